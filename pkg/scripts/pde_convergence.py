"""Finite-difference residuals of the two W constraints under step halving.

Prints a CSV table (h, r_mixed, r_box, ratios) for the hot-bang state and,
for contrast, a field with a symmetric non-metric Jacobian whose mixed
residual does not shrink with h.

    python scripts/pde_convergence.py --q 3 0 0 0 --z 0.2 0.1 0 0
"""

import argparse

import numpy as np

from lkms import AffineBetaField, ConeRegion, StateSpec, w_pde_residuals


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--q", type=float, nargs=4, default=[3.0, 0.0, 0.0, 0.0])
    ap.add_argument("--z", type=float, nargs=4, default=[0.2, 0.1, 0.0, 0.0])
    ap.add_argument("--steps", type=float, nargs="+", default=[0.04, 0.02, 0.01, 0.005, 0.0025])
    ap.add_argument("--slope", type=float, default=0.3, help="slope of the invalid field beta_0 = 1 + slope q^1")
    args = ap.parse_args()

    hot = StateSpec(0.0, AffineBetaField(1.0), ConeRegion.forward())
    invalid = StateSpec(0.0, lambda q: np.array([1.0 + args.slope * q[1], 0.0, 0.0, 0.0]))

    for label, state, q in (("hot_bang", hot, args.q), ("invalid", invalid, [0.0, 0.0, 0.0, 0.0])):
        print(f"# {label}")
        print("h,r_mixed,r_box,ratio_mixed,ratio_box")
        prev = None
        for h in args.steps:
            r = w_pde_residuals(state, q, args.z, h)
            ratios = ("", "") if prev is None else tuple(f"{p / c:.4f}" if c else "inf" for p, c in zip(prev, r))
            print(f"{h:g},{r[0]:.6e},{r[1]:.6e},{ratios[0]},{ratios[1]}")
            prev = r


if __name__ == "__main__":
    main()
