"""Poisson minimal gaps: empirical laws, exact medians and Devroye-type events."""

import argparse
import json

from billiard_gaps.poisson import (PoissonExperiment, billiard_vs_poisson_report,
                                   devroye_frequencies, exact_median, poisson_min_gap)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=10**4)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=20240611)
    ap.add_argument("--devroye", type=int, nargs=2, default=[4, 14], metavar=("J0", "J1"))
    ap.add_argument("--alpha", default="sqrt:2")
    args = ap.parse_args()
    for k in (1, 2):
        res = poisson_min_gap(PoissonExperiment(args.N, args.trials, args.seed, k))
        print(f"k={k}: median {res.median:.4f} (exact {exact_median(args.N, k):.4f}), "
              f"KS to Gamma({k}) {res.ks_limit():.4f}")
    print("\nDevroye event frequencies along N = 2^j")
    for row in devroye_frequencies(*args.devroye, trials=min(args.trials, 500), seed=args.seed):
        print("  " + "  ".join(f"{k}={v:.3f}" if isinstance(v, float) else f"{k}={v}"
                               for k, v in row.items()))
    rep = billiard_vs_poisson_report(args.alpha, [10**2, 10**3, 10**4], 200, args.seed, 12)
    print("\nbilliard vs Poisson")
    for r in rep["rows"]:
        print(f"  N={r['N']:>6} billiard {r['billiard_scaled_min']:>16} "
              f"poisson median {r['poisson_min_quantiles']['0.5']:.4f}")
    print(json.dumps(rep["propagation"], indent=1))


if __name__ == "__main__":
    main()
