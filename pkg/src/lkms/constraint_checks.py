"""Residual checks for detailed balance and the equation-of-motion constraints.

Every check returns a :class:`ResidualReport` normalised by an explicit
scale, so a claim that a residual vanishes can be falsified by reading the
report. Affine fields are checked with exact Jacobians; general callables
and W itself with central differences.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fields import AffineBetaField, BetaField, DomainError, StateSpec, evaluate_beta
from .minkowski import ETA, four_vector, lower, mink_dot, shell_lift
from .shell_tensor import max_norm
from .thermal_wightman import DEFAULT_QUADRATURE, QuadratureConfig, fourier_weights, regular_part

_METRIC_DIAG = np.diag(ETA)


@dataclass(frozen=True)
class ResidualReport:
    name: str
    max_abs_residual: float
    scale: float
    sample_count: int
    worst_witness: tuple
    tol: float | None = None

    @property
    def passed(self) -> bool:
        if self.tol is None:
            raise ValueError(f"report {self.name!r} carries no tolerance")
        return self.max_abs_residual <= self.tol

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "max_residual": self.max_abs_residual,
            "scale": self.scale,
            "samples": self.sample_count,
            "tol": self.tol,
            "pass": self.passed if self.tol is not None else None,
        }


def _worst(name, residuals, witnesses, scale, tol) -> ResidualReport:
    if not residuals:
        return ResidualReport(name, 0.0, scale, 0, (), tol)
    k = int(np.argmax(residuals))
    return ResidualReport(name, float(residuals[k]), scale, len(residuals), witnesses[k], tol)


def kms_detailed_balance(
    q,
    s: StateSpec,
    p_samples,
    tol: float = 1e-13,
    weights: Callable = fourier_weights,
) -> ResidualReport:
    """Max over samples of |w_plus - e^x w_minus| / w_plus, x = <beta(q), P>.

    ``weights`` defaults to :func:`fourier_weights`; pass a substitute to
    check injected faults. Samples whose backward weight underflows to zero
    (x beyond ~745) carry no information and are skipped.
    """
    beta = s.beta_at(q)
    residuals, witnesses = [], []
    for p3 in p_samples:
        w_plus, w_minus = weights(q, p3, s)
        x = mink_dot(beta, shell_lift(p3, s.m))
        if w_minus == 0.0:
            continue
        if x < 700.0:
            balanced = np.exp(x) * w_minus / w_plus
        else:
            balanced = np.exp(x + np.log(w_minus) - np.log(w_plus))
        residuals.append(abs(1.0 - balanced))
        witnesses.append((tuple(np.asarray(p3, dtype=float).tolist()),))
    return _worst("detailed_balance", residuals, witnesses, 1.0, tol)


def beta_jacobian(field: BetaField, q, h: float = 1e-5) -> np.ndarray:
    """J_{mu nu} = d_mu beta_nu at q: exact for affine fields, central differences otherwise."""
    q = four_vector(q)
    if isinstance(field, AffineBetaField):
        evaluate_beta(field, q)
        return field.jacobian
    if not h > 0:
        raise ValueError("finite-difference step must be positive")
    jac = np.zeros((4, 4))
    for mu in range(4):
        e = np.zeros(4)
        e[mu] = h
        plus = lower(evaluate_beta(field, q + e))
        minus = lower(evaluate_beta(field, q - e))
        jac[mu] = (plus - minus) / (2.0 * h)
    return jac


def beta_box(field: BetaField, q, h: float = 1e-3) -> np.ndarray:
    """Box beta_nu = eta^{mu mu} d_mu d_mu beta_nu (zero for affine fields)."""
    q = four_vector(q)
    if isinstance(field, AffineBetaField):
        return np.zeros(4)
    center = lower(evaluate_beta(field, q))
    out = np.zeros(4)
    for mu in range(4):
        e = np.zeros(4)
        e[mu] = h
        second = lower(evaluate_beta(field, q + e)) - 2.0 * center + lower(evaluate_beta(field, q - e))
        out += _METRIC_DIAG[mu] * second / (h * h)
    return out


def constraint1_residual(jac, m: float, samples, tol: float | None = 1e-10) -> ResidualReport:
    """max |P^mu P^nu J_{mu nu}| / (|J|_max omega^2) over shell samples."""
    jac = np.asarray(jac, dtype=float)
    norm = max_norm(jac)
    scale = norm if norm > 0 else 1.0
    residuals, witnesses = [], []
    for p3 in samples:
        p = shell_lift(p3, m)
        if p[0] == 0.0:
            continue
        residuals.append(abs(float(p @ jac @ p)) / (scale * p[0] ** 2))
        witnesses.append((tuple(p[1:].tolist()),))
    return _worst("constraint1", residuals, witnesses, scale, tol)


def constraint2_residual(
    field: BetaField, q, m: float, samples, h: float = 1e-3, tol: float | None = 1e-10
) -> ResidualReport:
    """max |L - R| / (1 + |J|^2 omega^2) with
    L = (d_mu beta_k P^k)(d^mu beta_l P^l) and R = tanh(x/2) (Box beta_nu) P^nu.
    """
    q = four_vector(q)
    beta = evaluate_beta(field, q)
    jac = beta_jacobian(field, q, h)
    box = beta_box(field, q, h)
    norm = max_norm(jac)
    residuals, witnesses = [], []
    for p3 in samples:
        p = shell_lift(p3, m)
        if p[0] == 0.0:
            continue
        v = jac @ p
        lhs = mink_dot(v, v)
        x = mink_dot(beta, p)
        rhs = np.tanh(0.5 * x) * float(box @ p)
        residuals.append(abs(lhs - rhs) / (1.0 + norm**2 * p[0] ** 2))
        witnesses.append((tuple(p[1:].tolist()),))
    return _worst("constraint2", residuals, witnesses, 1.0 + norm**2, tol)


def w_pde_residuals(
    s: StateSpec,
    q,
    z,
    h: float = 1e-2,
    cfg: QuadratureConfig = DEFAULT_QUADRATURE,
) -> tuple[float, float]:
    """Central-difference residuals of the two constraints on W(q, z).

    Returns (|d_q^mu d^z_mu W|, |Box_q W + 4 (Box_z + m^2) W|). The quadrature
    tolerance is tightened to at most h^4.
    """
    q = four_vector(q)
    z = four_vector(z)
    if not h > 0:
        raise ValueError("stencil step must be positive")
    cfg = QuadratureConfig(
        rel_tol=min(cfg.rel_tol, h**4),
        abs_tol=min(cfg.abs_tol, h**4),
        max_refinements=cfg.max_refinements,
        cutoff_safety=cfg.cutoff_safety,
    )
    steps = [h * np.eye(4)[mu] for mu in range(4)]
    for e in steps:
        for qq in (q + e, q - e):
            if not s.contains(qq):
                raise DomainError(f"stencil point {qq.tolist()} leaves the domain")

    cache: dict[tuple, float] = {}

    def w(dq, dz):
        key = (tuple(dq), tuple(dz))
        if key not in cache:
            cache[key] = regular_part(q + dq, z + dz, s, cfg)
        return cache[key]

    zero = np.zeros(4)
    center = w(zero, zero)
    mixed = box_q = box_z = 0.0
    for mu, e in enumerate(steps):
        sign = _METRIC_DIAG[mu]
        mixed += sign * (w(e, e) - w(e, -e) - w(-e, e) + w(-e, -e)) / (4.0 * h * h)
        box_q += sign * (w(e, zero) - 2.0 * center + w(-e, zero)) / (h * h)
        box_z += sign * (w(zero, e) - 2.0 * center + w(zero, -e)) / (h * h)
    return abs(mixed), abs(box_q + 4.0 * (box_z + s.m**2 * center))
