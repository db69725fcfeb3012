"""Inverse-temperature fields and the state data needed to evaluate W(q, z).

A beta field is any callable ``q -> beta(q)`` returning contravariant
components. :class:`AffineBetaField` is the closed family
``beta_nu(q) = c q_nu + C_{mu nu} q^mu + beta_tilde_nu`` (indices down),
with ``C`` antisymmetric.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .minkowski import ETA, Box, ConeRegion, four_vector, is_future_timelike, lower

# index pairs (mu, nu), mu < nu, of the six independent entries of C
ANTISYM_INDEX = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


class DomainError(ValueError):
    """A point is outside the state's domain, or beta is not future timelike there."""


def antisymmetric_from_entries(entries) -> np.ndarray:
    """Build C from (C01, C02, C03, C12, C13, C23)."""
    entries = np.asarray(entries, dtype=float).reshape(-1)
    if entries.shape != (6,):
        raise ValueError("antisymmetric tensor needs 6 independent entries")
    mat = np.zeros((4, 4))
    for (mu, nu), val in zip(ANTISYM_INDEX, entries):
        mat[mu, nu] = val
        mat[nu, mu] = -val
    return mat


@dataclass(frozen=True)
class AffineBetaField:
    c: float = 0.0
    C: np.ndarray = field(default_factory=lambda: np.zeros((4, 4)))
    beta_tilde: np.ndarray = field(default_factory=lambda: np.zeros(4))

    def __post_init__(self):
        mat = np.array(self.C, dtype=float)
        if mat.shape != (4, 4) or not np.all(np.isfinite(mat)):
            raise ValueError("C must be a finite 4x4 array")
        if np.max(np.abs(mat + mat.T)) > 1e-14 * max(1.0, np.max(np.abs(mat))):
            raise ValueError("C must be antisymmetric")
        if not np.isfinite(self.c):
            raise ValueError("c must be finite")
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "C", mat)
        object.__setattr__(self, "beta_tilde", four_vector(self.beta_tilde))

    @classmethod
    def constant(cls, beta) -> "AffineBetaField":
        return cls(0.0, np.zeros((4, 4)), beta)

    @property
    def jacobian(self) -> np.ndarray:
        """d_mu beta_nu = c eta_{mu nu} + C_{mu nu}."""
        return self.c * ETA + self.C

    def lowered(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        return self.c * lower(q) + q @ self.C + lower(self.beta_tilde)

    def __call__(self, q) -> np.ndarray:
        return lower(self.lowered(q))


BetaField = Union[AffineBetaField, Callable[[np.ndarray], np.ndarray]]


def evaluate_beta(beta: BetaField, q) -> np.ndarray:
    """beta(q), faulting unless it lies in the open forward cone."""
    val = four_vector(beta(np.asarray(q, dtype=float)))
    if not is_future_timelike(val):
        raise DomainError(
            f"beta({np.asarray(q, dtype=float).tolist()}) = {val.tolist()} is not future timelike"
        )
    return val


@dataclass(frozen=True)
class StateSpec:
    """Mass, inverse-temperature field and domain of an LKMS state.

    ``domain`` is a :class:`ConeRegion`, a :class:`Box`, or ``None`` for all
    of Minkowski space; beta is checked lazily at each queried point.
    """

    m: float
    beta: BetaField
    domain: ConeRegion | Box | None = None

    def __post_init__(self):
        if not (np.isfinite(self.m) and self.m >= 0):
            raise ValueError(f"mass must be finite and non-negative, got {self.m}")

    def contains(self, q) -> bool:
        return self.domain is None or self.domain.contains(q)

    def beta_at(self, q) -> np.ndarray:
        if not self.contains(q):
            raise DomainError(f"q = {np.asarray(q, dtype=float).tolist()} is outside the domain")
        return evaluate_beta(self.beta, q)
