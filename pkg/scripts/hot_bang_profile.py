"""Temperature and coincidence value along the hot-bang time axis.

For beta(q) = c q the temperature along the axis is 1/(c tau) and
W(q, 0) = 1/(12 c^2 tau^2). The script prints both the computed values
and their deviation from these closed forms, for m = 0 and for a
massive comparison state with the same local beta (not an LKMS state,
just the pointwise thermal value).
"""

import argparse

import numpy as np

from lkms import AffineBetaField, StateSpec, coincidence_limit, temperature


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--c", type=float, default=1.0)
    ap.add_argument("--tau", type=float, nargs="+", default=list(np.geomspace(0.1, 10.0, 9)))
    ap.add_argument("--mass", type=float, default=1.0, help="mass of the comparison column")
    args = ap.parse_args()

    field = AffineBetaField(args.c)
    print("tau,T,W0,W0_rel_dev,W_massive")
    for tau in args.tau:
        q = np.array([tau, 0.0, 0.0, 0.0])
        T = temperature(field, q)
        w0 = coincidence_limit(q, StateSpec(0.0, field))
        exact = 1.0 / (12.0 * (args.c * tau) ** 2)
        wm = coincidence_limit(q, StateSpec(args.mass, AffineBetaField.constant(field(q))))
        print(f"{tau:.6g},{T:.12g},{w0:.12g},{abs(w0 - exact) / exact:.1e},{wm:.12g}")


if __name__ == "__main__":
    main()
