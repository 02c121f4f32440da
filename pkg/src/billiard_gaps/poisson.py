"""Poisson minimal-gap baselines and the billiard comparison.

Sampling is reproducible across platforms: trial ``i`` of an experiment
draws from ``numpy.random.Philox`` with ``key=seed`` and counter
``(0, 0, 0, i)``, and uniforms are the generator's 53-bit doubles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import mpmath
import numpy as np
from scipy import stats

from .errors import ValidationError
from .exact import REPORT_DIGITS, as_alpha
from .spectrum import GapRecord, enumerate_spectrum, gap_from_levels, propagate_gap, rank_of

QUANTILES = (0.1, 0.25, 0.5, 0.75, 0.9)


@dataclass(frozen=True)
class PoissonExperiment:
    """``trials`` independent samples of ``N`` uniform points on [0, N]."""

    N: int
    trials: int
    seed: int
    k: int = 1

    def __post_init__(self):
        if self.N < 2:
            raise ValidationError("N must be >= 2")
        if self.trials < 1:
            raise ValidationError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        if not 1 <= self.k <= self.N - 1:
            raise ValidationError("need 1 <= k <= N - 1")


def trial_generator(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, trial]))


def _scaled_small_gaps(points: np.ndarray, kmax: int) -> np.ndarray:
    """The ``kmax`` smallest consecutive gaps of points in [0, 1], times N^2."""
    N = points.size
    gaps = np.diff(np.sort(points))
    if kmax < gaps.size:
        gaps = np.partition(gaps, kmax - 1)[:kmax]
    return np.sort(gaps) * (float(N) * N)


def poisson_kth_gaps(exp: PoissonExperiment, kmax: int | None = None) -> np.ndarray:
    """Array of shape ``(trials, kmax)``: ``N * delta_min,k`` for k = 1..kmax."""
    kmax = exp.k if kmax is None else kmax
    if not 1 <= kmax <= exp.N - 1:
        raise ValidationError("need 1 <= kmax <= N - 1")
    out = np.empty((exp.trials, kmax))
    for i in range(exp.trials):
        out[i] = _scaled_small_gaps(trial_generator(exp.seed, i).random(exp.N), kmax)
    return out


@dataclass(frozen=True)
class PoissonResult:
    experiment: PoissonExperiment
    values: np.ndarray  # sorted N * delta_min,k per trial

    def ecdf(self, t: float) -> float:
        return float(np.searchsorted(self.values, t, side="right")) / self.values.size

    def quantiles(self, qs: Iterable[float] = QUANTILES) -> dict[float, float]:
        return {q: float(np.quantile(self.values, q)) for q in qs}

    @property
    def median(self) -> float:
        return float(np.median(self.values))

    def ks_exponential(self) -> float:
        """Kolmogorov-Smirnov distance to ``1 - exp(-t)``."""
        return float(stats.kstest(self.values, "expon").statistic)

    def ks_limit(self) -> float:
        """KS distance to the Gamma(k) limit law of the k-th smallest scaled gap."""
        return float(stats.kstest(self.values, stats.gamma(self.experiment.k).cdf).statistic)

    def to_dict(self) -> dict:
        e = self.experiment
        return {"N": e.N, "trials": e.trials, "seed": e.seed, "k": e.k,
                "quantiles": {str(q): v for q, v in self.quantiles().items()},
                "median": self.median, "ks_limit": self.ks_limit()}


def poisson_min_gap(exp: PoissonExperiment) -> PoissonResult:
    vals = poisson_kth_gaps(exp)[:, exp.k - 1]
    return PoissonResult(exp, np.sort(vals))


# --------------------------------------------------------------------------
# Exact order statistics of uniform spacings


def exact_survival(N: int, k: int, t, dps: int = 50) -> mpmath.mpf:
    """``P(N * delta_min,k > t)`` for N uniform points on [0, N].

    Any ``r`` of the uniform spacings all exceed ``s`` with probability
    ``(1 - r s)_+^N``. With ``M = N - 1`` interior spacings and
    ``s = t / N^2``, inclusion-exclusion over the number of interior
    spacings above ``s`` gives the law of the k-th smallest.
    """
    if N < 2 or not 1 <= k <= N - 1:
        raise ValidationError("need N >= 2 and 1 <= k <= N - 1")
    with mpmath.workdps(dps):
        M = N - 1
        s = mpmath.mpf(t) / N**2

        def S(r: int):
            base = 1 - r * s
            return mpmath.binomial(M, r) * (base**N if base > 0 else 0)

        # P(#large = j) = sum_{r >= j} (-1)^(r - j) C(r, j) S_r; need j >= M - k + 1
        total = mpmath.mpf(0)
        lo = M - k + 1
        for r in range(lo, M + 1):
            inner = sum((-1) ** (r - j) * mpmath.binomial(r, j) for j in range(lo, r + 1))
            total += inner * S(r)
        return +total


def exact_median(N: int, k: int = 1) -> float:
    """Median of ``N * delta_min,k`` from :func:`exact_survival`."""
    f = lambda t: exact_survival(N, k, t) - mpmath.mpf(0.5)  # noqa: E731
    hi = mpmath.mpf(k + 2)
    while f(hi) > 0:
        hi *= 2
    return float(mpmath.findroot(f, (mpmath.mpf(0), hi), solver="anderson"))


# --------------------------------------------------------------------------
# Devroye-type events along N = 2^j


def _devroye_events(N: int, g1: float, g2: float) -> dict[str, bool]:
    L = math.log(N)
    LL = math.log(L)
    return {
        "dev1": g1 <= 1 / L,  # N delta_min <= 1/log N, expected infinitely often
        "dev1a": g2 < L ** (-2 / 3),  # violates delta_2 >= 1/(N (log N)^(2/3))
        "dev2": g1 >= LL,  # N delta_min >= log log N, expected infinitely often
        "dev3": g1 >= LL**2,  # expected only finitely often
    }


def devroye_frequencies(j_min: int, j_max: int, trials: int, seed: int) -> list[dict]:
    """Finite-N frequencies of the four Devroye events on nested sequences.

    Each trial is one sequence of ``2^j_max`` uniform points; level ``N = 2^j``
    looks at its first ``N`` points. Rows give the per-level frequency and the
    fraction of trials in which the event has occurred at some level so far.
    Nothing about the infinitary limits is asserted.
    """
    if not 2 <= j_min <= j_max:
        raise ValidationError("need 2 <= j_min <= j_max")
    levels = range(j_min, j_max + 1)
    names = ("dev1", "dev1a", "dev2", "dev3")
    hits = {name: np.zeros((trials, len(levels)), dtype=bool) for name in names}
    for i in range(trials):
        pts = trial_generator(seed, i).random(2**j_max)
        for col, j in enumerate(levels):
            g = _scaled_small_gaps(pts[: 2**j], 2)
            for name, v in _devroye_events(2**j, g[0], g[1]).items():
                hits[name][i, col] = v
    rows = []
    for col, j in enumerate(levels):
        row = {"N": 2**j}
        for name in names:
            row[name] = float(hits[name][:, col].mean())
            row[name + "_ever"] = float(hits[name][:, : col + 1].any(axis=1).mean())
        rows.append(row)
    return rows


# --------------------------------------------------------------------------
# Billiard against Poisson


def billiard_vs_poisson_report(alpha, N_list: Iterable[int], trials: int, seed: int,
                               digits: int = REPORT_DIGITS) -> dict:
    """Billiard ``N delta_min`` and ``N delta_min,2`` next to Poisson quantiles.

    The last entry is the quadrupling check: the pair ``(2m, 2n), (2m', 2n')``
    built from the minimal gap at the largest ``N`` is a gap of exactly
    ``4 delta_min(N)``, so ``delta_min,2(N') <= 4 delta_min(N)`` where ``N'``
    is the rank of its upper level.
    """
    alpha = as_alpha(alpha)
    N_list = sorted(set(N_list))
    levels = enumerate_spectrum(alpha, N_list[-1])
    rows = []
    for N in N_list:
        g1, g2 = gap_from_levels(levels[:N], 1), gap_from_levels(levels[:N], 2)
        p1 = poisson_min_gap(PoissonExperiment(N, trials, seed, 1)) if N >= 2 else None
        p2 = poisson_min_gap(PoissonExperiment(N, trials, seed, 2)) if N >= 3 else None
        s1, s2 = float(g1.scaled_gap), float(g2.scaled_gap)
        L = math.log(N)
        rows.append({
            "N": N,
            "billiard_scaled_min": g1.scaled_decimal(digits),
            "billiard_scaled_min2": g2.scaled_decimal(digits),
            "poisson_min_quantiles": {str(q): v for q, v in p1.quantiles().items()},
            "poisson_min2_quantiles": {str(q): v for q, v in p2.quantiles().items()},
            "dev1_event": s1 <= 1 / L,
            "dev1a_violation": s2 < L ** (-2 / 3),
        })
    return {"alpha": alpha.label, "rows": rows,
            "propagation": propagation_check(gap_from_levels(levels, 1), digits)}


def propagation_check(g: GapRecord, digits: int = REPORT_DIGITS) -> dict:
    """Verify the quadrupled pair and bound ``delta_min,2`` at its rank."""
    alpha = g.alpha
    big = propagate_gap(g)
    u, v = g.affine
    bu, bv = big.affine
    N_prime = rank_of(big.upper)
    second = gap_from_levels(enumerate_spectrum(alpha, N_prime), 2)
    su, sv = second.affine
    return {
        "N": g.N,
        "pair": [[big.lower.m, big.lower.n], [big.upper.m, big.upper.n]],
        "gap_is_4_delta": (bu, bv) == (4 * u, 4 * v) and alpha.sign_affine(bu, bv) > 0,
        "N_prime": N_prime,
        "rank_lower": rank_of(big.lower),
        "delta2_at_N_prime": second.gap_decimal(digits),
        "four_delta": alpha.render_affine(4 * u, 4 * v, digits),
        "delta2_le_4delta": alpha.sign_affine(4 * u - su, 4 * v - sv) >= 0,
    }
