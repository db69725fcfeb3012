"""Verdict table over mass, c and a rotation generator, with constraint residuals.

Each row lists the classifier verdict and the worst constraint residual
over the default probe momenta, so the two independent checks can be
compared by eye.
"""

import argparse

import numpy as np

from lkms import (
    AffineBetaField,
    antisymmetric_from_entries,
    beta_jacobian,
    classify_affine,
    constraint1_residual,
    constraint2_residual,
    default_shell_samples,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rotation", type=float, default=0.5, help="C_01 entry of the rotation generator")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rot = antisymmetric_from_entries([args.rotation, 0, 0, 0, 0, 0])
    e0 = np.array([1.0, 0.0, 0.0, 0.0])
    print("m,c,C01,verdict,constraint1,constraint2,reason")
    for m in (0.0, 1.0):
        samples = default_shell_samples(m, args.seed)
        for c in (-1.0, 0.0, 1.0):
            for C in (np.zeros((4, 4)), rot):
                if c == 0:
                    f, q = AffineBetaField(0.0, C, e0), np.zeros(4)
                else:
                    f, q = AffineBetaField(c, C), 2 * c * e0
                v = classify_affine(f, m, [q])
                r1 = constraint1_residual(beta_jacobian(f, q), m, samples).max_abs_residual
                r2 = constraint2_residual(f, q, m, samples).max_abs_residual
                print(f"{m:g},{c:g},{C[0, 1]:g},{v.kind.value},{r1:.3e},{r2:.3e},\"{v.reason}\"")


if __name__ == "__main__":
    main()
