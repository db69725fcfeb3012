"""Rank-2 tensors whose quadratic form vanishes on a mass shell.

Tensors are ``(4, 4)`` arrays with both indices down, ``a[mu, nu] = A_{mu nu}``.
The shell contraction ``P^mu P^nu A_{mu nu}`` uses the raw (upper-index)
components of ``P``; no metric factor is inserted.

For m = 0 the form vanishes on every null momentum exactly when
``A = c * eta + Omega`` with ``Omega`` antisymmetric; for m > 0 exactly when
``A`` itself is antisymmetric.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .minkowski import ETA, shell_lift

DEFAULT_TOL = 1e-10


def as_tensor2(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    if arr.shape != (4, 4):
        raise ValueError(f"rank-2 tensor must be 4x4, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite tensor entry")
    return arr


def max_norm(a) -> float:
    return float(np.max(np.abs(a)))


def sym_antisym_split(a) -> tuple[np.ndarray, np.ndarray]:
    a = as_tensor2(a)
    return 0.5 * (a + a.T), 0.5 * (a - a.T)


def shell_quadratic(a, p3, m: float) -> float:
    p = shell_lift(p3, m)
    return float(p @ np.asarray(a, dtype=float) @ p)


def _cube_directions() -> np.ndarray:
    # 6 faces, 12 edges, 8 corners of the cube [-1, 1]^3, normalised;
    # ordered so +e_i precedes -e_i
    dirs = []
    for n_nonzero in (1, 2, 3):
        for axes in itertools.combinations(range(3), n_nonzero):
            for signs in itertools.product((1.0, -1.0), repeat=n_nonzero):
                v = np.zeros(3)
                v[list(axes)] = signs
                dirs.append(v / np.sqrt(n_nonzero))
    return np.array(dirs)


NULL_PROBE_DIRECTIONS = _cube_directions()
NULL_PROBE_DIRECTIONS.flags.writeable = False


def massive_probe_momenta() -> np.ndarray:
    """Spatial momenta 0, +-e_i and e_i + e_j that decide the massive case."""
    probes = [np.zeros(3)]
    for i in range(3):
        for sign in (1.0, -1.0):
            v = np.zeros(3)
            v[i] = sign
            probes.append(v)
    for i, j in itertools.combinations(range(3), 2):
        v = np.zeros(3)
        v[[i, j]] = 1.0
        probes.append(v)
    return np.array(probes)


_SYM_INDEX = [(mu, nu) for mu in range(4) for nu in range(mu, 4)]


def probe_sensitivity(m: float) -> float:
    """Largest k with max_probe |P S P| / omega^2 >= k |S|_max for every symmetric S.

    The ten massive probes determine the ten entries of S linearly, so
    k = 1 / ||M^-1||_inf for the probe matrix M.
    """
    rows = []
    for p3 in massive_probe_momenta():
        p = shell_lift(p3, m)
        rows.append([(1.0 if mu == nu else 2.0) * p[mu] * p[nu] / p[0] ** 2 for mu, nu in _SYM_INDEX])
    inv = np.linalg.inv(np.array(rows))
    return 1.0 / float(np.max(np.sum(np.abs(inv), axis=1)))


@dataclass(frozen=True)
class NullFormDecomposition:
    """Outcome of :func:`massless_null_decompose`.

    On acceptance ``c`` and ``omega`` satisfy ``A = c * eta + omega`` up to
    ``residual``. On rejection ``witness`` is the unit direction among the
    26 cube probes where the null quadratic form is largest in magnitude.
    """

    accepted: bool
    c: float
    omega: np.ndarray
    residual: float
    witness: np.ndarray | None = None
    witness_value: float = 0.0


def massless_null_decompose(a, tol: float = DEFAULT_TOL) -> NullFormDecomposition:
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = as_tensor2(a)
    s, omega = sym_antisym_split(a)
    c = float(s[0, 0])
    residual = max_norm(s - c * ETA)
    if residual <= tol * (1.0 + max_norm(a)):
        return NullFormDecomposition(True, c, omega, residual)
    values = np.array([shell_quadratic(a, d, 0.0) for d in NULL_PROBE_DIRECTIONS])
    k = int(np.argmax(np.abs(values)))
    return NullFormDecomposition(
        False, c, omega, residual, NULL_PROBE_DIRECTIONS[k].copy(), float(values[k])
    )


def massive_null_test(a, m: float, tol: float = DEFAULT_TOL, debug: bool = False) -> bool:
    """True iff the shell form of ``a`` vanishes for mass ``m > 0``.

    With ``debug`` the algebraic decision is cross-checked against the
    quadratic form at :func:`massive_probe_momenta`.
    """
    if m <= 0:
        raise ValueError(f"massive test needs m > 0, got {m}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = as_tensor2(a)
    s, _ = sym_antisym_split(a)
    scale = 1.0 + max_norm(a)
    verdict = max_norm(s) <= tol * scale
    if debug:
        probe = max(
            abs(shell_quadratic(a, p, m)) / shell_lift(p, m)[0] ** 2
            for p in massive_probe_momenta()
        )
        inconsistent = (verdict and probe > 10.0 * tol * scale) or (
            not verdict and probe < 0.5 * probe_sensitivity(m) * max_norm(s)
        )
        if inconsistent:
            raise AssertionError(
                f"probe check disagrees: symmetric part {max_norm(s):.3e}, probe max {probe:.3e}"
            )
    return verdict
