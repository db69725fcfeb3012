"""Minkowski geometry with signature (+,-,-,-); component 0 is time.

Four-vectors are plain ``float64`` arrays of shape ``(4,)``. Use
:func:`four_vector` to build one from user input; it rejects NaN/Inf.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

ETA = np.diag([1.0, -1.0, -1.0, -1.0])
ETA.flags.writeable = False

# mink_dot(beta, beta) must exceed this times beta0**2 for a boost to be built
TIMELIKE_RTOL = 1e-12


def four_vector(v) -> np.ndarray:
    arr = np.array(v, dtype=float).reshape(-1)
    if arr.shape != (4,):
        raise ValueError(f"four-vector needs 4 components, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite four-vector component in {arr.tolist()}")
    return arr


def three_vector(v) -> np.ndarray:
    arr = np.array(v, dtype=float).reshape(-1)
    if arr.shape != (3,):
        raise ValueError(f"three-vector needs 3 components, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite three-vector component in {arr.tolist()}")
    return arr


def mink_dot(a, b) -> float:
    """Minkowski inner product a0*b0 - a.b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3])


def lower(v) -> np.ndarray:
    """Covariant components v_mu = eta_{mu nu} v^nu (also raises, eta being its own inverse)."""
    v = np.asarray(v, dtype=float)
    return v * np.array([1.0, -1.0, -1.0, -1.0])


def is_future_timelike(v) -> bool:
    v = np.asarray(v, dtype=float)
    return bool(v[0] > 0.0 and mink_dot(v, v) > 0.0)


def point_split(q, z) -> tuple[np.ndarray, np.ndarray]:
    """Map midpoint/separation (q, z) to the pair of points (q - z/2, q + z/2)."""
    q = np.asarray(q, dtype=float)
    z = np.asarray(z, dtype=float)
    return q - 0.5 * z, q + 0.5 * z


def split_point(x, y) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`point_split`: ((x + y)/2, y - x)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return 0.5 * (x + y), y - x


class ConeKind(str, enum.Enum):
    FORWARD = "ForwardCone"
    BACKWARD = "BackwardCone"
    ALL = "AllMinkowski"


@dataclass(frozen=True, eq=False)
class ConeRegion:
    """Open lightcone V+(apex), V-(apex), or all of Minkowski space."""

    kind: ConeKind
    apex: np.ndarray = field(default_factory=lambda: np.zeros(4))

    def __post_init__(self):
        object.__setattr__(self, "kind", ConeKind(self.kind))
        object.__setattr__(self, "apex", four_vector(self.apex))

    @classmethod
    def forward(cls, apex=(0.0, 0.0, 0.0, 0.0)) -> "ConeRegion":
        return cls(ConeKind.FORWARD, apex)

    @classmethod
    def backward(cls, apex=(0.0, 0.0, 0.0, 0.0)) -> "ConeRegion":
        return cls(ConeKind.BACKWARD, apex)

    @classmethod
    def everywhere(cls) -> "ConeRegion":
        return cls(ConeKind.ALL)

    def contains(self, q) -> bool:
        return cone_contains(self, q)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConeRegion):
            return NotImplemented
        if self.kind is not other.kind:
            return False
        return self.kind is ConeKind.ALL or bool(np.array_equal(self.apex, other.apex))

    def __hash__(self):
        return hash((self.kind, None if self.kind is ConeKind.ALL else tuple(self.apex)))

    def to_dict(self) -> dict:
        if self.kind is ConeKind.ALL:
            return {"kind": self.kind.value}
        # + 0.0 turns -0.0 into 0.0 so serialized apexes are canonical
        return {"kind": self.kind.value, "apex": [float(a) + 0.0 for a in self.apex]}


@dataclass(frozen=True)
class Box:
    """Axis-aligned box lower <= q <= upper, an explicit convex sample region."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lower", four_vector(self.lower))
        object.__setattr__(self, "upper", four_vector(self.upper))
        if np.any(self.lower > self.upper):
            raise ValueError("box lower corner exceeds upper corner")

    def contains(self, q) -> bool:
        q = np.asarray(q, dtype=float)
        return bool(np.all(q >= self.lower) and np.all(q <= self.upper))


def cone_contains(region: ConeRegion, q) -> bool:
    """Membership in an open cone; null-separated points are outside."""
    if region.kind is ConeKind.ALL:
        return True
    d = np.asarray(q, dtype=float) - region.apex
    if region.kind is ConeKind.BACKWARD:
        d = -d
    return bool(d[0] > 0.0 and mink_dot(d, d) > 0.0)


@dataclass(frozen=True)
class LorentzBoost:
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=float)
        if mat.shape != (4, 4):
            raise ValueError("boost matrix must be 4x4")
        if np.max(np.abs(mat.T @ ETA @ mat - ETA)) > 1e-12 * max(1.0, np.max(np.abs(mat)) ** 2):
            raise ValueError("matrix does not preserve the Minkowski metric")
        object.__setattr__(self, "matrix", mat)

    def apply(self, v) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=float)

    def inverse(self) -> "LorentzBoost":
        # Lambda^{-1} = eta Lambda^T eta
        return LorentzBoost(ETA @ self.matrix.T @ ETA)


def boost_from_velocity(v) -> LorentzBoost:
    """Pure boost that maps a frame moving with 3-velocity ``v`` to rest."""
    v = three_vector(v)
    v2 = float(v @ v)
    if v2 >= 1.0:
        raise ValueError(f"velocity {v.tolist()} is not subluminal")
    return LorentzBoost(_pure_boost(v, 1.0 / np.sqrt(1.0 - v2)))


def _pure_boost(v: np.ndarray, gamma: float) -> np.ndarray:
    mat = np.eye(4)
    mat[0, 0] = gamma
    mat[0, 1:] = -gamma * v
    mat[1:, 0] = -gamma * v
    # (gamma - 1)/v^2 written without the 0/0 at rest
    mat[1:, 1:] += (gamma * gamma / (gamma + 1.0)) * np.outer(v, v)
    return mat


def boost_to_rest(beta) -> tuple[LorentzBoost, float]:
    """Pure boost taking a future timelike ``beta`` to (b, 0, 0, 0).

    Returns the boost and the Minkowski length ``b = sqrt(<beta, beta>)``.
    """
    beta = four_vector(beta)
    spatial = float(np.sqrt(beta[1:] @ beta[1:]))
    norm2 = (beta[0] - spatial) * (beta[0] + spatial)
    if not (beta[0] > 0.0 and norm2 > TIMELIKE_RTOL * beta[0] ** 2):
        raise ValueError(f"beta = {beta.tolist()} is not future-pointing timelike")
    b = float(np.sqrt(norm2))
    if spatial == 0.0:
        return LorentzBoost(np.eye(4)), b
    return LorentzBoost(_pure_boost(beta[1:] / beta[0], beta[0] / b)), b


def shell_lift(p3, m: float) -> np.ndarray:
    """On-shell four-momentum (omega, p) with omega = sqrt(|p|^2 + m^2)."""
    if m < 0:
        raise ValueError(f"mass must be non-negative, got {m}")
    p3 = three_vector(p3)
    omega = float(np.sqrt(p3 @ p3 + m * m))
    return np.concatenate(([omega], p3))
