"""Square-root balanced certificates for an even power of the golden mean."""

import argparse

from billiard_gaps.construct import construct_strong_exact, named_spec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--spec", default="golden2")
    ap.add_argument("--count", type=int, default=10)
    args = ap.parse_args()
    for c in construct_strong_exact(named_spec(args.spec), args.count):
        small = min(c.d, c.q // c.d)
        print(f"n={c.meta['index']:>3} t={c.t} q={c.q:<14} min(d,q/d)^2/q={small * small / c.q:.4f} "
              f"gap*level={float(c.gap * c.level_bound):9.3f}")


if __name__ == "__main__":
    main()
