"""Distinct entries of the X by X multiplication table against a Ford-type shape."""

import argparse

from billiard_gaps.counting import FORD_C, QuadrupleWindow, ford_exponent_report, quadruple_count


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--X", type=int, nargs="+", default=[10, 100, 1000, 10000])
    ap.add_argument("--loglog-exponent", type=float, default=-2 / 3)
    ap.add_argument("--M", type=int, nargs="+", default=[20, 50, 100])
    args = ap.parse_args()
    print(f"c = {FORD_C:.6f}")
    for r in ford_exponent_report(args.X, loglog_exponent=args.loglog_exponent):
        print(f"X={r['X']:>6} distinct={r['distinct']:>10} ratio={r['ratio']:.5f} "
              f"ratio/shape={r['ratio_over_reference']:.4f}")
    for M in args.M:
        q = quadruple_count(QuadrupleWindow(M), "sqrt:2")
        print(f"quadruples M={M} T=M^3: {q.count}")


if __name__ == "__main__":
    main()
