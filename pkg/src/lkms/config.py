"""JSON run configuration for the command-line tools.

Example::

    {
      "mass": 0.0,
      "beta": {"affine": {"c": 1.0, "C": [0, 0, 0, 0, 0, 0], "beta_tilde": [0, 0, 0, 0]}},
      "grid": {
        "q_points": [[1, 0, 0, 0], [2, 0, 0, 0]],
        "z_points": {"linspace": {"start": [0, 0, 0, 0], "stop": [0, 2, 0, 0], "num": 5}}
      },
      "quadrature": {"rel_tol": 1e-10},
      "seed": 7,
      "output_path": "w.csv",
      "worldline": {"origin": [0, 0, 0, 0], "direction": [1, 0, 0, 0], "tau": [1, 2, 4]}
    }

``beta`` may instead be ``{"constant": [b0, b1, b2, b3]}``. ``C`` lists
(C01, C02, C03, C12, C13, C23). Unknown keys are errors at every level.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .fields import AffineBetaField, antisymmetric_from_entries
from .thermal_wightman import QuadratureConfig


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Worldline:
    origin: np.ndarray
    direction: np.ndarray
    tau: np.ndarray

    def points(self) -> list[np.ndarray]:
        return [self.origin + t * self.direction for t in self.tau]


@dataclass(frozen=True)
class RunConfig:
    mass: float
    beta: AffineBetaField
    q_points: list = field(default_factory=list)
    z_points: list = field(default_factory=list)
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    seed: int = 0
    output_path: str | None = None
    worldline: Worldline | None = None


def _check_keys(obj, allowed: set, where: str, required: set = frozenset()):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")
    missing = sorted(required - set(obj))
    if missing:
        raise ConfigError(f"missing key(s) in {where}: {', '.join(missing)}")


def _number(val, where: str) -> float:
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{where} must be a number, got {val!r}")
    if not np.isfinite(val):
        raise ConfigError(f"{where} must be finite")
    return float(val)


def _vector(val, n: int, where: str) -> np.ndarray:
    if not isinstance(val, list) or len(val) != n:
        raise ConfigError(f"{where} must be a list of {n} numbers")
    return np.array([_number(v, f"{where}[{i}]") for i, v in enumerate(val)])


def _points(node, where: str) -> list[np.ndarray]:
    if isinstance(node, list):
        return [_vector(p, 4, f"{where}[{i}]") for i, p in enumerate(node)]
    _check_keys(node, {"linspace"}, where, {"linspace"})
    lin = node["linspace"]
    _check_keys(lin, {"start", "stop", "num"}, f"{where}.linspace", {"start", "stop", "num"})
    start = _vector(lin["start"], 4, f"{where}.linspace.start")
    stop = _vector(lin["stop"], 4, f"{where}.linspace.stop")
    num = lin["num"]
    if isinstance(num, bool) or not isinstance(num, int) or num < 0:
        raise ConfigError(f"{where}.linspace.num must be a non-negative integer")
    return [start + (stop - start) * s for s in np.linspace(0.0, 1.0, num)]


def _scalars(node, where: str) -> np.ndarray:
    if isinstance(node, list):
        return np.array([_number(v, f"{where}[{i}]") for i, v in enumerate(node)])
    _check_keys(node, {"linspace"}, where, {"linspace"})
    lin = node["linspace"]
    _check_keys(lin, {"start", "stop", "num"}, f"{where}.linspace", {"start", "stop", "num"})
    num = lin["num"]
    if isinstance(num, bool) or not isinstance(num, int) or num < 0:
        raise ConfigError(f"{where}.linspace.num must be a non-negative integer")
    return np.linspace(_number(lin["start"], where), _number(lin["stop"], where), num)


def _beta(node) -> AffineBetaField:
    _check_keys(node, {"affine", "constant"}, "beta")
    if len(node) != 1:
        raise ConfigError("beta needs exactly one of 'affine' or 'constant'")
    if "constant" in node:
        return AffineBetaField.constant(_vector(node["constant"], 4, "beta.constant"))
    aff = node["affine"]
    _check_keys(aff, {"c", "C", "beta_tilde"}, "beta.affine")
    c = _number(aff.get("c", 0.0), "beta.affine.c")
    C = antisymmetric_from_entries(_vector(aff.get("C", [0.0] * 6), 6, "beta.affine.C"))
    bt = _vector(aff.get("beta_tilde", [0.0] * 4), 4, "beta.affine.beta_tilde")
    return AffineBetaField(c, C, bt)


def parse_config(doc: dict) -> RunConfig:
    _check_keys(
        doc,
        {"mass", "beta", "grid", "quadrature", "seed", "output_path", "worldline"},
        "config",
        {"mass", "beta"},
    )
    mass = _number(doc["mass"], "mass")
    if mass < 0:
        raise ConfigError("mass must be non-negative")
    beta = _beta(doc["beta"])

    grid = doc.get("grid", {})
    _check_keys(grid, {"q_points", "z_points"}, "grid")
    q_points = _points(grid.get("q_points", []), "grid.q_points")
    z_points = _points(grid.get("z_points", []), "grid.z_points")

    quad = doc.get("quadrature", {})
    _check_keys(quad, {"rel_tol", "abs_tol", "max_refinements", "cutoff_safety"}, "quadrature")
    try:
        quadrature = QuadratureConfig(**quad)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"quadrature: {exc}") from exc

    seed = doc.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError("seed must be an integer")
    output_path = doc.get("output_path")
    if output_path is not None and not isinstance(output_path, str):
        raise ConfigError("output_path must be a string")

    worldline = None
    if "worldline" in doc:
        wl = doc["worldline"]
        _check_keys(wl, {"origin", "direction", "tau"}, "worldline", {"tau"})
        worldline = Worldline(
            _vector(wl.get("origin", [0.0] * 4), 4, "worldline.origin"),
            _vector(wl.get("direction", [1.0, 0.0, 0.0, 0.0]), 4, "worldline.direction"),
            _scalars(wl["tau"], "worldline.tau"),
        )
    return RunConfig(mass, beta, q_points, z_points, quadrature, seed, output_path, worldline)


def load_config(path: str | Path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return parse_config(doc)
