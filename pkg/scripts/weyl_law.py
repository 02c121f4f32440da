"""Counting function against the Weyl main term for a few parameters."""

import argparse

from billiard_gaps.spectrum import count_below, weyl_main_term


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", nargs="+", default=["sqrt:2", "sqrt:3", "golden2"])
    ap.add_argument("--X", type=int, nargs="+", default=[10**3, 10**4, 10**5, 10**6])
    args = ap.parse_args()
    print(f"{'alpha':>10} {'X':>9} {'N(X)':>9} {'main term':>12} {'ratio':>8}")
    for a in args.alpha:
        for X in args.X:
            n = count_below(a, 0, X)
            w = weyl_main_term(a, X)
            print(f"{a:>10} {X:>9} {n:>9} {w:>12.1f} {n / w:>8.5f}")


if __name__ == "__main__":
    main()
