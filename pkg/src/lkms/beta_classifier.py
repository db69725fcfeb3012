"""Classify an inverse-temperature field as global KMS, hot bang or cold bang.

An LKMS field must be affine, beta(q) = c q + C q + beta_tilde, with C = 0;
for m > 0 also c = 0. The sign of c then fixes the maximal region:

    c > 0   hot bang,   beta = c (q + beta_tilde) on V+ - beta_tilde
    c < 0   cold bang,  beta = c (q + beta_tilde) on V- - beta_tilde
    c = 0   global KMS, beta = beta_tilde in V+ on all of Minkowski space

``Verdict.beta_tilde`` always uses the factored form above, so for c != 0
it is the affine offset divided by c.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .constraint_checks import beta_jacobian
from .fields import ANTISYM_INDEX, AffineBetaField, BetaField, DomainError, evaluate_beta
from .minkowski import ETA, ConeRegion, four_vector, is_future_timelike, lower, mink_dot

DEFAULT_TOL = 1e-8


class VerdictKind(str, enum.Enum):
    GLOBAL_KMS = "GlobalKMS"
    HOT_BANG = "HotBang"
    COLD_BANG = "ColdBang"
    NOT_LKMS = "NotLKMS"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    c: float = 0.0
    beta_tilde: np.ndarray = field(default_factory=lambda: np.zeros(4))
    region: ConeRegion | None = None
    reason: str = ""
    fit_residual: float = 0.0

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "c": float(self.c) + 0.0,
            "beta_tilde": [float(x) + 0.0 for x in self.beta_tilde],
            "region": None if self.region is None else self.region.to_dict(),
            "reason": self.reason,
            "fit_residual": float(self.fit_residual),
        }


def _reject(reason: str, c: float = 0.0, beta_tilde=None, fit_residual: float = 0.0) -> Verdict:
    bt = np.zeros(4) if beta_tilde is None else np.asarray(beta_tilde, dtype=float)
    return Verdict(VerdictKind.NOT_LKMS, c, bt, None, reason, fit_residual)


def classify_affine(
    f: AffineBetaField, m: float, domain_samples, tol: float = DEFAULT_TOL, fit_residual: float = 0.0
) -> Verdict:
    if not tol > 0:
        raise ValueError("tol must be positive")
    samples = [four_vector(q) for q in domain_samples]
    if not samples:
        raise ValueError("classification needs at least one domain sample")
    scale = max(1.0, abs(f.c), float(np.max(np.abs(f.beta_tilde))))

    c_norm = float(np.max(np.abs(f.C)))
    if c_norm > tol * scale:
        return _reject(f"C != 0 (max |C_mu nu| = {c_norm:.3g}); beta must have C = 0", f.c, f.beta_tilde, fit_residual)
    if m > 0 and abs(f.c) > tol * scale:
        return _reject(f"c = {f.c:.6g} != 0 with m > 0; beta must be constant", f.c, f.beta_tilde, fit_residual)

    if abs(f.c) <= tol * scale:
        kind, c = VerdictKind.GLOBAL_KMS, 0.0
        beta_tilde = f.beta_tilde.copy()
        region = ConeRegion.everywhere()
        if not is_future_timelike(beta_tilde):
            return _reject("β not future timelike", 0.0, beta_tilde, fit_residual)
    else:
        c = f.c
        beta_tilde = f.beta_tilde / c
        if c > 0:
            kind, region = VerdictKind.HOT_BANG, ConeRegion.forward(-beta_tilde)
        else:
            kind, region = VerdictKind.COLD_BANG, ConeRegion.backward(-beta_tilde)

    for q in samples:
        if not region.contains(q):
            return _reject(f"domain outside maximal region (sample {q.tolist()})", c, beta_tilde, fit_residual)
        if not is_future_timelike(f(q)):
            return _reject(f"β not future timelike at sample {q.tolist()}", c, beta_tilde, fit_residual)
    return Verdict(kind, c, beta_tilde, region, "", fit_residual)


def _affine_design(samples, jacobians, values):
    # unknowns: c, the six C entries, beta_tilde_nu (lower); rows: values then Jacobians
    rows, rhs = [], []
    for q, jac, val in zip(samples, jacobians, values):
        ql = lower(q)
        for nu in range(4):
            row = np.zeros(11)
            row[0] = ql[nu]
            for k, (a, b) in enumerate(ANTISYM_INDEX):
                # (C q)_nu = C_{mu nu} q^mu
                if b == nu:
                    row[1 + k] += q[a]
                if a == nu:
                    row[1 + k] -= q[b]
            row[7 + nu] = 1.0
            rows.append(row)
            rhs.append(val[nu])
        for mu in range(4):
            for nu in range(4):
                row = np.zeros(11)
                row[0] = ETA[mu, nu]
                for k, (a, b) in enumerate(ANTISYM_INDEX):
                    if (mu, nu) == (a, b):
                        row[1 + k] = 1.0
                    elif (mu, nu) == (b, a):
                        row[1 + k] = -1.0
                rows.append(row)
                rhs.append(jac[mu, nu])
    return np.array(rows), np.array(rhs)


def classify_field(f: BetaField, m: float, domain_samples, h: float = 1e-4, tol: float = DEFAULT_TOL) -> Verdict:
    """Classify a general callable beta field from values and Jacobians at samples.

    The Jacobian must be constant across samples; a varying one is rejected
    as non-affine rather than approximated. Otherwise (c, C, beta_tilde) are
    fitted by linear least squares and handed to :func:`classify_affine`.
    """
    samples = [four_vector(q) for q in domain_samples]
    if len(samples) < 5:
        raise ValueError("classify_field needs at least 5 affinely independent samples")
    aug = np.hstack([np.ones((len(samples), 1)), np.array(samples)])
    if np.linalg.matrix_rank(aug) < 5:
        raise ValueError("domain samples are not affinely independent")
    if not h > 0:
        raise ValueError("h must be positive")

    try:
        values = [lower(evaluate_beta(f, q)) for q in samples]
    except DomainError as exc:
        return _reject(f"β not future timelike: {exc}")
    jacobians = [beta_jacobian(f, q, h) for q in samples]
    jac_scale = max(1.0, max(float(np.max(np.abs(j))) for j in jacobians))
    spread = max(float(np.max(np.abs(j - jacobians[0]))) for j in jacobians)
    if spread > tol * jac_scale:
        return _reject(f"non-affine field (Jacobian varies by {spread:.3g} across samples)")

    design, rhs = _affine_design(samples, jacobians, values)
    sol, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    fit_scale = max(1.0, float(np.max(np.abs(rhs))))
    fit_residual = float(np.max(np.abs(design @ sol - rhs))) / fit_scale
    C = np.zeros((4, 4))
    for k, (a, b) in enumerate(ANTISYM_INDEX):
        C[a, b] = sol[1 + k]
        C[b, a] = -sol[1 + k]
    if fit_residual > tol:
        return _reject(
            f"field not of the form c q + C q + beta_tilde (fit residual {fit_residual:.3g})",
            float(sol[0]),
            lower(sol[7:]),
            fit_residual,
        )
    affine = AffineBetaField(float(sol[0]), C, lower(sol[7:]))
    return classify_affine(affine, m, samples, tol, fit_residual)


def maximal_region(v: Verdict) -> ConeRegion:
    if v.kind is VerdictKind.NOT_LKMS or v.region is None:
        raise ValueError(f"no maximal region for a NotLKMS verdict ({v.reason})")
    return v.region


def temperature(f: BetaField, q) -> float:
    """Rest-frame temperature 1/sqrt(<beta(q), beta(q)>)."""
    beta = evaluate_beta(f, q)
    return 1.0 / float(np.sqrt(mink_dot(beta, beta)))
