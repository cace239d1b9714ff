"""Family averages against their conjectures for several sizes X.

Quadratic characters (both signs of d) with one numerator and one
denominator shift, and even twists of E11 with one numerator shift.
"""

import argparse

from ratiolab.arithmetic import e11_coefficients
from ratiolab.conjectures import conj_elliptic_rhs, conj_quadratic_rhs
from ratiolab.lhs import lhs_elliptic_family_sum, lhs_quadratic_family_sum
from ratiolab.shifts import EulerConfig, ShiftSet


def row(label, X, lhs, rhs, count):
    gap = abs(lhs - rhs) / abs(rhs)
    print(f"{label:22s} X={X:<7.0f} n={count:<6d} lhs={lhs.real:12.3f} "
          f"rhs={rhs.real:12.3f} gap={gap:.2e}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--X", type=float, nargs="+", default=[1000, 3000, 10000])
    parser.add_argument("--elliptic-X", type=float, nargs="+", default=[500, 1000])
    parser.add_argument("--alpha", type=float, default=0.10)
    parser.add_argument("--gamma", type=float, default=0.15)
    args = parser.parse_args()
    s = ShiftSet([args.alpha], (), [args.gamma])
    for sign in ("positive", "negative"):
        for X in args.X:
            res = lhs_quadratic_family_sum(s, X, sign, full=True)
            row(f"quadratic {sign}", X, res.value, conj_quadratic_rhs(s, X, sign).value, res.count)
    cfg = EulerConfig(prime_cutoff=100_000, tail_policy="fixed")
    afe_len = int(40 * 11 ** 0.5 * max(args.elliptic_X) / 6.28) + 10
    table = e11_coefficients(max(afe_len, cfg.prime_cutoff))
    se = ShiftSet([args.alpha])
    for X in args.elliptic_X:
        res = lhs_elliptic_family_sum(se, X, "even", table, full=True)
        row("elliptic even", X, res.value, conj_elliptic_rhs(se, X, "even", cfg, table).value,
            res.count)


if __name__ == "__main__":
    main()
