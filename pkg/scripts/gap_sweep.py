"""Scaled minimal gap N * delta_min(N) along a geometric sequence of N."""

import argparse

from billiard_gaps.spectrum import scaled_gap_sweep, scaled_ratio


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", default="sqrt:2")
    ap.add_argument("--N", type=int, nargs="+", default=[10**2, 10**3, 10**4, 10**5])
    args = ap.parse_args()
    rows = scaled_gap_sweep(args.alpha, sorted(args.N))
    for r in rows:
        print(f"N={r.N:>7}  pair=({r.lower.m},{r.lower.n})->({r.upper.m},{r.upper.n})  "
              f"N*delta={r.scaled_decimal(12)}")
    print(f"max/min = {scaled_ratio(rows):.6f}")


if __name__ == "__main__":
    main()
