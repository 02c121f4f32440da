"""Pell-based certificates for sqrt(4D): lcm exponent and normalised gap."""

import argparse
import time
from fractions import Fraction

from billiard_gaps.chebyshev import prime_select
from billiard_gaps.construct import construct_sqrtD


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--D", type=int, default=2)
    ap.add_argument("--eps", type=Fraction, default=Fraction(1, 25))
    ap.add_argument("--P", type=int, nargs="+", default=[7, 11, 13])
    args = ap.parse_args()
    sel = prime_select(args.eps)
    print(f"primes {sel.primes}, density {sel.density} = {float(sel.density):.6f}")
    t0 = time.perf_counter()
    for c in construct_sqrtD(args.D, sel, args.P):
        q_n = c.meta["q_n"]
        print(f"n={c.meta['index']:>7}  bits(q_n)={c.meta['bits_q']:>8}  "
              f"lcm exponent={c.meta['lcm_exponent_q']}  gap*q_n={float(c.gap) * q_n:.4f}  "
              f"revalidated={c.revalidate()}")
    print(f"{time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
