"""Relative gap between the zeta-ratio integral and its conjecture as T grows.

The conjectured error is about T^(-1/2); the table shows the gap next to
that scale, and the leading-order form for comparison.
"""

import argparse

from ratiolab.conjectures import conj_zeta_rhs, leading_order_ratio
from ratiolab.lhs import lhs_zeta_ratio_integral
from ratiolab.shifts import ShiftSet


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--T", type=float, nargs="+", default=[500, 1000, 2000, 5000])
    parser.add_argument("--shifts", type=float, nargs=4, default=[0.10, 0.12, 0.15, 0.20],
                        metavar=("ALPHA", "BETA", "GAMMA", "DELTA"))
    args = parser.parse_args()
    a, b, g, d = args.shifts
    s = ShiftSet([a], [b], [g], [d])
    print(f"{'T':>8} {'lhs':>14} {'rhs':>14} {'gap':>10} {'T^-1/2':>10} {'lead gap':>11}")
    for T in args.T:
        lhs = lhs_zeta_ratio_integral(s, T)
        rhs = conj_zeta_rhs(s, T).value
        gap = abs(lhs - rhs) / abs(rhs)
        far = leading_order_ratio(a, b, g, d, T) * (T - 1)
        fgap = abs(far - rhs) / abs(rhs)
        print(f"{T:8.0f} {lhs.real:14.4f} {rhs.real:14.4f} {gap:10.2e} {T ** -0.5:10.2e} {fgap:11.2e}")


if __name__ == "__main__":
    main()
