"""Command-line entry point: ``lkms {eval,check,classify,profile} --config PATH``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np


from . import beta_classifier as bc
from .config import ConfigError, RunConfig, load_config
from .constraint_checks import (
    constraint1_residual,
    constraint2_residual,
    beta_jacobian,
    kms_detailed_balance,
    w_pde_residuals,
)
from .fields import DomainError, StateSpec, evaluate_beta
from .quadrature import QuadratureError
from .sampling import default_shell_samples
from .thermal_wightman import coincidence_limit, regular_part_with_error

log = logging.getLogger("lkms")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

# pass thresholds of the check suites
BALANCE_TOL = 1e-12
CONSTRAINT_TOL = 1e-10
PDE_TOL = 1e-4
PDE_STEP = 1e-2

_EPILOG = """\
exit codes:
  0  success (check: every suite passed)
  1  check: at least one suite failed (report is still written)
  2  configuration error (unreadable JSON, unknown keys, invalid beta)
  3  numerical failure (quadrature did not converge, point outside region)

LKMS_THREADS sets the worker count when --threads is not given.
"""


def _fmt(x: float) -> str:
    return "%.17g" % x


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("LKMS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"LKMS_THREADS must be an integer, got {env!r}") from None
    return 1


def _ordered_map(fn, items, threads: int) -> list:
    if threads <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _validate_beta(cfg: RunConfig, points) -> None:
    for q in points:
        try:
            evaluate_beta(cfg.beta, q)
        except DomainError as exc:
            raise ConfigError(f"invalid beta: {exc}") from None


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_eval(cfg: RunConfig, out: str | None, threads: int) -> int:
    _validate_beta(cfg, cfg.q_points)
    state = StateSpec(cfg.mass, cfg.beta)
    pairs = [(q, z) for q in cfg.q_points for z in cfg.z_points]
    log.info("evaluating W at %d (q, z) pairs", len(pairs))

    def row(pair):
        q, z = pair
        value, err = regular_part_with_error(q, z, state, cfg.quadrature)
        return ",".join(_fmt(v) for v in (*q, *z, value, err))

    try:
        rows = _ordered_map(row, pairs, threads)
    except QuadratureError as exc:
        if out is not None and os.path.exists(out):
            os.remove(out)
        print(f"lkms eval: quadrature failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    header = "q0,q1,q2,q3,z0,z1,z2,z3,W,err_estimate"
    _emit("\n".join([header, *rows]) + "\n", out)
    return EXIT_OK


def run_check_suites(cfg: RunConfig, threads: int = 1) -> dict:
    """All residual suites over the configured q (and z) points."""
    state = StateSpec(cfg.mass, cfg.beta)
    samples = default_shell_samples(cfg.mass, cfg.seed)
    suites: dict[str, list] = {"detailed_balance": [], "constraint1": [], "constraint2": []}
    for q in cfg.q_points:
        suites["detailed_balance"].append(kms_detailed_balance(q, state, samples, BALANCE_TOL))
        jac = beta_jacobian(cfg.beta, q)
        suites["constraint1"].append(constraint1_residual(jac, cfg.mass, samples, CONSTRAINT_TOL))
        suites["constraint2"].append(constraint2_residual(cfg.beta, q, cfg.mass, samples, tol=CONSTRAINT_TOL))

    pde_pairs = [(q, z) for q in cfg.q_points for z in cfg.z_points]
    pde = _ordered_map(lambda qz: w_pde_residuals(state, qz[0], qz[1], PDE_STEP, cfg.quadrature), pde_pairs, threads)

    def summary(name, values, scale, tol, count):
        worst = max(values, default=0.0)
        return {"name": name, "max_residual": worst, "scale": scale, "samples": count, "tol": tol, "pass": worst <= tol}

    report = []
    for name, reps in suites.items():
        tol = reps[0].tol if reps else (BALANCE_TOL if name == "detailed_balance" else CONSTRAINT_TOL)
        report.append(
            summary(
                name,
                [r.max_abs_residual for r in reps],
                max((r.scale for r in reps), default=1.0),
                tol,
                sum(r.sample_count for r in reps),
            )
        )
    report.append(summary("w_pde_mixed", [float(r[0]) for r in pde], 1.0, PDE_TOL, len(pde)))
    report.append(summary("w_pde_box", [float(r[1]) for r in pde], 1.0, PDE_TOL, len(pde)))
    return {"seed": cfg.seed, "mass": cfg.mass, "suites": report, "pass": all(s["pass"] for s in report)}


def cmd_check(cfg: RunConfig, out: str | None, threads: int) -> int:
    _validate_beta(cfg, cfg.q_points)
    try:
        result = run_check_suites(cfg, threads)
    except (QuadratureError, DomainError) as exc:
        print(f"lkms check: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(json.dumps(result, indent=2) + "\n", out)
    for suite in result["suites"]:
        log.info("%-18s %-4s max %.3e (tol %.1e)", suite["name"], "ok" if suite["pass"] else "FAIL", suite["max_residual"], suite["tol"])
    return EXIT_OK if result["pass"] else EXIT_FAIL


def _interior_sample(f) -> list:
    # one point strictly inside the region the algebra alone would assign
    if abs(f.c) <= bc.DEFAULT_TOL * max(1.0, float(np.max(np.abs(f.beta_tilde)))):
        return [np.zeros(4)]
    return [-f.beta_tilde / f.c + np.sign(f.c) * np.array([1.0, 0.0, 0.0, 0.0])]


def cmd_classify(cfg: RunConfig, out: str | None, threads: int) -> int:
    samples = cfg.q_points or _interior_sample(cfg.beta)
    verdict = bc.classify_affine(cfg.beta, cfg.mass, samples)
    _emit(json.dumps(verdict.to_dict(), indent=2) + "\n", out)
    return EXIT_OK


def cmd_profile(cfg: RunConfig, out: str | None, threads: int) -> int:
    if cfg.worldline is None:
        raise ConfigError("profile needs a 'worldline' section")
    points = cfg.worldline.points()
    state = StateSpec(cfg.mass, cfg.beta)
    if points:
        verdict = bc.classify_affine(cfg.beta, cfg.mass, points)
        if verdict.kind is bc.VerdictKind.NOT_LKMS:
            print(f"lkms profile: {verdict.reason}", file=sys.stderr)
            return EXIT_NUMERIC

    def row(item):
        tau, q = item
        return ",".join(_fmt(v) for v in (tau, bc.temperature(cfg.beta, q), coincidence_limit(q, state, cfg.quadrature)))

    try:
        rows = _ordered_map(row, list(zip(cfg.worldline.tau, points)), threads)
    except (QuadratureError, DomainError) as exc:
        print(f"lkms profile: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit("\n".join(["tau,T,W_coincidence", *rows]) + "\n", out)
    return EXIT_OK


COMMANDS = {"eval": cmd_eval, "check": cmd_check, "classify": cmd_classify, "profile": cmd_profile}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lkms",
        description="Evaluate and check local-KMS thermal two-point functions of the free Klein-Gordon field.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "eval": "write W(q, z) on the configured grid as CSV",
        "check": "run detailed-balance and constraint residual suites, write a JSON report",
        "classify": "classify the configured beta field (global KMS / hot bang / cold bang)",
        "profile": "temperature and W(q, 0) along a worldline as CSV",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text, epilog=_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", help="output path (default: config output_path, else stdout)")
        p.add_argument("--threads", type=int, help="worker threads (default: $LKMS_THREADS or 1)")
        p.add_argument("--verbose", action="store_true", help="log progress to stderr")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        out = args.out if args.out is not None else cfg.output_path
        return COMMANDS[args.command](cfg, out, _threads(args))
    except ConfigError as exc:
        print(f"lkms {args.command}: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
