"""Regular part of the LKMS two-point function of the free Klein-Gordon field.

In the rest frame of beta(q), with b = |beta(q)| and the separation boosted
to (t, r), the regular part reduces to

    W = 1/(2 pi^2) int_0^inf dp p^2/omega cos(t omega) sinc(p r) n(b omega),

n(x) = 1/(e^x - 1). For m = 0 the integral has a closed form, evaluated by
:func:`regular_part_closed_massless`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np
from scipy.special import bernoulli

from .fields import StateSpec
from .minkowski import boost_to_rest, mink_dot, shell_lift, three_vector
from .quadrature import QuadratureError, integrate

__all__ = [
    "QuadratureConfig",
    "QuadratureError",
    "bose",
    "fourier_weights",
    "regular_part",
    "regular_part_with_error",
    "regular_part_closed_massless",
    "coincidence_limit",
    "full_two_point_spacelike_massless",
    "rest_frame_invariants",
    "DEFAULT_QUADRATURE",
]

_TWO_PI2 = 2.0 * np.pi**2
_FOUR_PI2 = 4.0 * np.pi**2


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_refinements: int = 30
    cutoff_safety: float = 1.5

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if int(self.max_refinements) < 1:
            raise ValueError("max_refinements must be at least 1")
        if not self.cutoff_safety >= 1.0:
            raise ValueError("cutoff_safety must be >= 1")


DEFAULT_QUADRATURE = QuadratureConfig()


def bose(x):
    """Occupation number 1/(e^x - 1) for x > 0; scalar or array."""
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise ValueError("bose factor needs x > 0")
    with np.errstate(over="ignore", under="ignore"):
        small = np.minimum(xa, 700.0)
        large = np.maximum(xa, 700.0)
        out = np.where(xa <= 700.0, 1.0 / np.expm1(small), np.exp(-large) / -np.expm1(-large))
    return float(out) if np.ndim(out) == 0 else out


def fourier_weights(q, p3, s: StateSpec) -> tuple[float, float]:
    """On-shell spectral weights (forward, backward) at momentum ``p3``.

    The forward weight is 1/(1 - e^{-x}) and the backward one 1/(e^x - 1),
    x = <beta(q), P>; both are positive.
    """
    p3 = three_vector(p3)
    if s.m == 0 and not np.any(p3):
        raise ValueError("massless zero mode p = 0 has no finite weight")
    beta = s.beta_at(q)
    x = mink_dot(beta, shell_lift(p3, s.m))
    with np.errstate(over="ignore"):
        w_plus = float(-1.0 / np.expm1(-x))
    return w_plus, bose(x)


def rest_frame_invariants(beta, z) -> tuple[float, float, float]:
    """(b, t', r') for separation ``z`` seen in the rest frame of ``beta``."""
    boost, b = boost_to_rest(beta)
    zr = boost.apply(z)
    return b, float(zr[0]), float(np.sqrt(zr[1:] @ zr[1:]))


# ---------------------------------------------------------------------------
# closed form, m = 0
# ---------------------------------------------------------------------------

_SERIES_TERMS = 12


@lru_cache(maxsize=None)
def _coth_series() -> np.ndarray:
    # coth(x) - 1/x = sum_k 2^{2k} B_{2k} x^{2k-1} / (2k)!
    bern = bernoulli(2 * _SERIES_TERMS)
    return np.array([2.0 ** (2 * k) * bern[2 * k] / factorial(2 * k) for k in range(1, _SERIES_TERMS + 1)])


def _pair(u: float, a: float) -> float:
    """(a/2) (coth(a u) - 1/(a u)), odd and analytic; = (pi/2b) coth(pi u/b) - 1/(2u)."""
    x = a * u
    if abs(x) < 0.05 * np.pi:
        x2 = x * x
        acc = 0.0
        for coef in _coth_series()[::-1]:
            acc = acc * x2 + coef
        return 0.5 * a * x * acc
    return 0.5 * a * (1.0 / np.tanh(x) - 1.0 / x)


def _pair_divided_difference_series(x: float, y: float, a: float) -> float:
    # (pair(y) - pair(x)) / (y - x) term by term: (y^n - x^n)/(y - x) = sum_j y^j x^{n-1-j}
    coefs = _coth_series()
    total = 0.0
    for k, coef in enumerate(coefs, start=1):
        n = 2 * k - 1
        h = sum(y**j * x ** (n - 1 - j) for j in range(n))
        total += 0.5 * coef * a ** (n + 1) * h
    return total


def _log_sinhc(w: float) -> float:
    w = abs(w)
    if w < 0.5:
        # log(sinh w / w) = sum_k 2^{2k} B_{2k} w^{2k} / (2k (2k)!)
        w2 = w * w
        acc = 0.0
        for k in range(_SERIES_TERMS, 0, -1):
            acc = acc * w2 + _coth_series()[k - 1] / (2 * k)
        return acc * w2
    if w < 20.0:
        return float(np.log(np.sinh(w) / w))
    return w + float(np.log1p(-np.exp(-2.0 * w))) - float(np.log(2.0 * w))


def regular_part_closed_massless(t: float, r: float, b: float) -> float:
    """Massless regular part at rest-frame separation (t, r), inverse temperature b.

    Equal to 1/(4 pi^2 r) [pair(r + t) + pair(r - t)] with
    pair(u) = (pi/2b) coth(pi u/b) - 1/(2u). Three evaluation regimes:

    * both |t - r| and |t + r| below 0.1 b: the pair difference expanded
      as a polynomial in (t - r, t + r), which covers r -> 0 and the origin;
    * one of them below 0.05 b (near the light cone): pairs with their
      Taylor series at small argument;
    * otherwise the product form
      [1 - sinhc(2 a r) h(t - r) h(t + r)] / (4 pi^2 (t^2 - r^2)),
      h(u) = a u / sinh(a u), a = pi/b, evaluated through logarithms.
    """
    if not b > 0:
        raise ValueError("b must be positive")
    r = abs(float(r))
    t = abs(float(t))  # W is even in t; folding keeps z -> -z exact
    a = np.pi / b
    x, y = t - r, t + r
    delta = 0.05 * b
    if max(abs(x), abs(y)) < 2.0 * delta:
        return _pair_divided_difference_series(x, y, a) / _TWO_PI2
    if min(abs(x), abs(y)) < delta:
        return (_pair(y, a) - _pair(x, a)) / (y - x) / _TWO_PI2
    log_prod = _log_sinhc(2.0 * a * r) - _log_sinhc(a * x) - _log_sinhc(a * y)
    return -float(np.expm1(log_prod)) / (x * y) / _FOUR_PI2


# ---------------------------------------------------------------------------
# quadrature path
# ---------------------------------------------------------------------------


def _cutoff(b: float, cfg: QuadratureConfig) -> float:
    # smallest p with tail bound (1/b)(p + 1/b)^2 e^{-b p} / (1 - e^{-b p}) / (2 pi^2) < abs_tol/10
    target = cfg.abs_tol / 10.0

    def tail(p):
        return (p + 1.0 / b) ** 2 * np.exp(-b * p) / b / -np.expm1(-b * p) / _TWO_PI2

    lo, hi = 1.0 / b, 2.0 / b
    while tail(hi) >= target:
        lo, hi = hi, 2.0 * hi
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if tail(mid) >= target:
            lo = mid
        else:
            hi = mid
    return cfg.cutoff_safety * hi


def _radial_integrand(t: float, r: float, b: float, m: float):
    def f(p):
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            if m == 0.0:
                x = b * p
                # p n(b p), finite at p = 0 where it tends to 1/b
                safe = np.where(x > 0, x, 1.0)
                pn = np.where(
                    x > 700.0,
                    p * np.exp(-np.minimum(x, 745.0)) / -np.expm1(-safe),
                    p / np.expm1(safe),
                )
                pn = np.where(x > 0, pn, 1.0 / b)
                osc = np.cos(t * p)
            else:
                omega = np.sqrt(p * p + m * m)
                x = b * omega
                n = np.where(x > 700.0, np.exp(-np.minimum(x, 745.0)), 1.0 / np.expm1(np.minimum(x, 700.0)))
                pn = p * p / omega * n
                osc = np.cos(t * omega)
            return pn * osc * np.sinc(p * r / np.pi)

    return f


def _rest_frame_quadrature(t: float, r: float, b: float, m: float, cfg: QuadratureConfig):
    p_max = _cutoff(b, cfg)
    width = 2.0 / b
    freq = max(abs(t), r)
    if freq > 0:
        width = min(width, np.pi / freq)
    n_panels = max(1, int(np.ceil(p_max / width)))
    edges = np.linspace(0.0, p_max, n_panels + 1)
    # the prefactor is applied after integration, so scale the tolerances
    res = integrate(
        _radial_integrand(t, r, b, m),
        edges,
        cfg.rel_tol,
        cfg.abs_tol * _TWO_PI2,
        int(cfg.max_refinements),
    )
    return res.value / _TWO_PI2, res.error / _TWO_PI2


def regular_part_with_error(
    q,
    z,
    s: StateSpec,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    closed_form: bool = True,
    debug: bool = False,
) -> tuple[float, float]:
    """W(q, z) and an error estimate.

    For m = 0 the closed form is used unless ``closed_form`` is False; with
    ``debug`` the closed form is cross-checked against quadrature.
    Raises :class:`QuadratureError` when quadrature does not converge.
    """
    beta = s.beta_at(q)
    b, t, r = rest_frame_invariants(beta, z)
    if s.m == 0 and closed_form:
        value = regular_part_closed_massless(t, r, b)
        if debug:
            quad, err = _rest_frame_quadrature(t, r, b, 0.0, cfg)
            if abs(quad - value) > 10 * max(err, cfg.rel_tol * abs(value), cfg.abs_tol):
                raise AssertionError(f"closed form {value!r} disagrees with quadrature {quad!r} +- {err:.2e}")
        return value, 4.0 * np.finfo(float).eps * abs(value)
    return _rest_frame_quadrature(t, r, b, float(s.m), cfg)


def regular_part(
    q,
    z,
    s: StateSpec,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
    closed_form: bool = True,
    debug: bool = False,
) -> float:
    return regular_part_with_error(q, z, s, cfg, closed_form, debug)[0]


def coincidence_limit(q, s: StateSpec, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """W(q, 0): 1/(12 b^2) for m = 0, quadrature for m > 0."""
    beta = s.beta_at(q)
    _, b = boost_to_rest(beta)
    if s.m == 0:
        return 1.0 / (12.0 * b * b)
    return _rest_frame_quadrature(0.0, 0.0, b, float(s.m), cfg)[0]


def full_two_point_spacelike_massless(q, z, s: StateSpec, cfg: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Regular part plus the massless vacuum term 1/(4 pi^2 (r^2 - t^2))."""
    if s.m != 0:
        raise ValueError("closed vacuum term is only implemented for m = 0")
    if not mink_dot(z, z) < 0:
        raise ValueError(f"z = {np.asarray(z).tolist()} is not spacelike")
    beta = s.beta_at(q)
    b, t, r = rest_frame_invariants(beta, z)
    return regular_part_closed_massless(t, r, b) + 1.0 / (_FOUR_PI2 * (r - t) * (r + t))

