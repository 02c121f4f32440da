"""The billiard spectrum {alpha*m^2 + n^2 : m, n >= 1} and its gaps.

Levels and level differences are kept as integer pairs ``(u, v)`` standing
for ``u*alpha + v``. Ordering uses a float fast path with a rigorous error
guard and falls back to ``alpha.sign_affine`` whenever the guard cannot
separate two values, so results are exact for surd alpha and certified (or a
loud :class:`PrecisionExhausted`) for literal alpha.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from itertools import islice
from typing import Iterable, Iterator

import numpy as np

from .errors import RationalAlpha, ValidationError
from .exact import REPORT_DIGITS, Alpha, CertifiedReal, QuadSurd, as_alpha

# relative error bound of float(alpha_f*m*m + n*n) beyond the error in alpha_f
_REL = 4 * 2.0**-53


def _require_irrational(alpha: Alpha) -> None:
    if alpha.is_rational:
        raise RationalAlpha("rational alpha has a degenerate spectrum with multiplicities")


@dataclass(frozen=True)
class Eigenvalue:
    m: int
    n: int
    alpha: Alpha = field(repr=False, compare=False)

    @property
    def level(self) -> QuadSurd | CertifiedReal:
        if self.alpha.exact:
            return self.alpha.affine(self.m * self.m, self.n * self.n)
        return self.alpha.eval_affine(self.m * self.m, self.n * self.n)

    @property
    def approx(self) -> float:
        return self.alpha.approx * self.m * self.m + self.n * self.n

    def decimal(self, digits: int = REPORT_DIGITS) -> str:
        return self.alpha.render_affine(self.m * self.m, self.n * self.n, digits)


@dataclass(frozen=True)
class GapRecord:
    """Gap between two levels, ``upper - lower == u*alpha + v > 0``.

    ``index`` is ``i`` for the consecutive pair (lambda_i, lambda_{i+1}), or
    ``None`` for a pair that was not located in the spectrum.
    """

    index: int | None
    lower: Eigenvalue
    upper: Eigenvalue
    N: int

    @property
    def alpha(self) -> Alpha:
        return self.lower.alpha

    @property
    def affine(self) -> tuple[int, int]:
        lo, up = self.lower, self.upper
        return up.m * up.m - lo.m * lo.m, up.n * up.n - lo.n * lo.n

    @property
    def gap(self) -> QuadSurd | CertifiedReal:
        u, v = self.affine
        return self.alpha.affine(u, v) if self.alpha.exact else self.alpha.eval_affine(u, v)

    @property
    def scaled_gap(self) -> QuadSurd | CertifiedReal:
        u, v = self.affine
        if self.alpha.exact:
            return self.alpha.affine(u, v) * self.N
        return self.alpha.eval_affine(u * self.N, v * self.N)

    def gap_decimal(self, digits: int = REPORT_DIGITS) -> str:
        return self.alpha.render_affine(*self.affine, digits)

    def scaled_decimal(self, digits: int = REPORT_DIGITS) -> str:
        u, v = self.affine
        return self.alpha.render_affine(u * self.N, v * self.N, digits)

    def row(self, digits: int = REPORT_DIGITS) -> dict:
        return {
            "N": self.N,
            "m": self.lower.m, "n": self.lower.n,
            "m2": self.upper.m, "n2": self.upper.n,
            "gap_decimal": self.gap_decimal(digits),
            "scaled_gap": self.scaled_decimal(digits),
        }


CSV_COLUMNS = ("N", "m", "n", "m2", "n2", "gap_decimal", "scaled_gap")


# --------------------------------------------------------------------------
# Enumeration


class _Level:
    """Heap entry ordered by the exact level."""

    __slots__ = ("f", "err", "m2", "n2", "m", "n", "alpha")

    def __init__(self, alpha: Alpha, m: int, n: int):
        self.m, self.n, self.alpha = m, n, alpha
        self.m2, self.n2 = m * m, n * n
        self.f = alpha.approx * self.m2 + self.n2
        self.err = alpha.float_err * self.m2 + _REL * self.f

    def __lt__(self, other: _Level) -> bool:
        d = self.f - other.f
        guard = self.err + other.err
        if d < -guard:
            return True
        if d > guard:
            return False
        return self.alpha.sign_affine(self.m2 - other.m2, self.n2 - other.n2) < 0


def iter_spectrum(alpha) -> Iterator[Eigenvalue]:
    """Lazily yield the spectrum in increasing order.

    One stream per ``m`` (increasing in ``n``); stream ``m + 1`` is opened
    when the head of stream ``m`` is emitted, so only O(sqrt N) streams are
    live after N emissions.
    """
    alpha = as_alpha(alpha)
    _require_irrational(alpha)
    heap = [_Level(alpha, 1, 1)]
    while True:
        top = heapq.heappop(heap)
        yield Eigenvalue(top.m, top.n, alpha)
        heapq.heappush(heap, _Level(alpha, top.m, top.n + 1))
        if top.n == 1:
            heapq.heappush(heap, _Level(alpha, top.m + 1, 1))


def _collect_below(alpha: Alpha, x: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All lattice points whose float level is <= x."""
    a = alpha.approx
    ms, ns = [], []
    m = 1
    while a * m * m + 1 <= x:
        top = math.isqrt(max(0, int(x - a * m * m))) + 1
        ms.append(np.full(top, m, dtype=np.int64))
        ns.append(np.arange(1, top + 1, dtype=np.int64))
        m += 1
    if not ms:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, np.zeros(0)
    mm, nn = np.concatenate(ms), np.concatenate(ns)
    f = a * (mm * mm).astype(np.float64) + (nn * nn).astype(np.float64)
    keep = f <= x
    return mm[keep], nn[keep], f[keep]


def _exact_sort(alpha: Alpha, mm: np.ndarray, nn: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Permutation sorting the levels exactly: float sort, then exact repair."""
    order = np.argsort(f, kind="stable")
    if len(order) < 2:
        return order
    m2 = (mm * mm).astype(np.float64)
    err = alpha.float_err * float(m2.max()) + _REL * float(f.max())
    fs = f[order]
    close = np.flatnonzero(np.diff(fs) <= 2 * err)
    if len(close) == 0:
        return order

    def cmp(i: int, j: int) -> int:
        mi, mj = int(mm[i]), int(mm[j])
        ni, nj = int(nn[i]), int(nn[j])
        return alpha.sign_affine(mi * mi - mj * mj, ni * ni - nj * nj)

    order = order.copy()
    start = prev = int(close[0])
    for c in list(close[1:]) + [None]:
        if c is not None and int(c) == prev + 1:
            prev = int(c)
            continue
        lo, hi = start, prev + 2
        order[lo:hi] = sorted(order[lo:hi].tolist(), key=cmp_to_key(cmp))
        if c is not None:
            start = prev = int(c)
    return order


def _float_err(alpha: Alpha, mm: np.ndarray, f: np.ndarray) -> float:
    return alpha.float_err * float((mm * mm).max()) + _REL * float(f.max())


def enumerate_spectrum(alpha, count: int) -> list[Eigenvalue]:
    """The first ``count`` eigenvalues in increasing order.

    The cutoff is found by a Weyl-guided exponential search, then every
    lattice point under it is sorted (floats first, exact repair of any pair
    the float error bound cannot separate) and the list trimmed to ``count``.
    """
    alpha = as_alpha(alpha)
    _require_irrational(alpha)
    if count < 1:
        raise ValidationError("count must be >= 1")
    a = alpha.approx
    x = max(a + 2.0, 1.05 * count * 4 * math.sqrt(a) / math.pi + 4 * math.sqrt(count) * (1 + a) + 2)
    while True:
        mm, nn, f = _collect_below(alpha, x)
        if len(f):
            err = _float_err(alpha, mm, f)
            # N points with float <= x - 2err guarantees the true first N are all collected
            if int(np.count_nonzero(f <= x - 2 * err)) >= count:
                break
        x *= 1.5
    order = _exact_sort(alpha, mm, nn, f)[:count]
    return [Eigenvalue(int(mm[i]), int(nn[i]), alpha) for i in order]


def count_below(alpha, u: int, v: int = 0, *, strict: bool = False) -> int:
    """Number of lattice points with level <= u*alpha + v (``<`` if strict).

    ``count_below(alpha, 0, X)`` is the Weyl counting function at ``X``.
    """
    alpha = as_alpha(alpha)
    a = alpha.approx
    bound = a * u + v
    total = 0
    m = 1
    while True:
        m2 = m * m
        # is (m, 1) inside?
        if not _inside(alpha, m2, 1, u, v, strict):
            break
        n = max(1, math.isqrt(max(0, int(bound - a * m2))))
        while n > 1 and not _inside(alpha, m2, n * n, u, v, strict):
            n -= 1
        while _inside(alpha, m2, (n + 1) * (n + 1), u, v, strict):
            n += 1
        total += n
        m += 1
    return total


def _inside(alpha: Alpha, m2: int, n2: int, u: int, v: int, strict: bool) -> bool:
    s = alpha.sign_affine(m2 - u, n2 - v)
    return s < 0 if strict else s <= 0


def weyl_main_term(alpha, x: float) -> float:
    """Leading term pi X / (4 sqrt(alpha)) of the counting function."""
    return math.pi * x / (4 * math.sqrt(as_alpha(alpha).approx))


def rank_of(ev: Eigenvalue) -> int:
    """1-based position of ``ev`` in the spectrum."""
    return count_below(ev.alpha, ev.m * ev.m, ev.n * ev.n)


# --------------------------------------------------------------------------
# Gaps


def _gap_arrays(levels: list[Eigenvalue]):
    alpha = levels[0].alpha
    mm = np.array([e.m for e in levels], dtype=np.int64)
    nn = np.array([e.n for e in levels], dtype=np.int64)
    f = alpha.approx * (mm * mm).astype(np.float64) + (nn * nn).astype(np.float64)
    gaps = np.diff(f)
    # each gap inherits the error of both endpoints
    err = 2 * _float_err(alpha, mm, f)
    return mm, nn, gaps, err


def _gap_cmp(alpha: Alpha, mm: np.ndarray, nn: np.ndarray):
    def aff(i: int) -> tuple[int, int]:
        m0, m1 = int(mm[i]), int(mm[i + 1])
        n0, n1 = int(nn[i]), int(nn[i + 1])
        return m1 * m1 - m0 * m0, n1 * n1 - n0 * n0

    def cmp(i: int, j: int) -> int:
        (u1, v1), (u2, v2) = aff(i), aff(j)
        s = alpha.sign_affine(u1 - u2, v1 - v2)
        return s if s else (i > j) - (i < j)

    return cmp


def kth_gaps(levels: list[Eigenvalue], k: int) -> list[int]:
    """Positions ``i`` (0-based, gap between levels[i] and levels[i+1]) of the
    ``k`` smallest consecutive gaps, in exact increasing order."""
    if len(levels) < k + 1:
        raise ValidationError(f"need at least k+1 = {k + 1} levels, got {len(levels)}")
    alpha = levels[0].alpha
    mm, nn, gaps, err = _gap_arrays(levels)
    fk = np.partition(gaps, k - 1)[k - 1]
    cand = np.flatnonzero(gaps <= fk + 2 * err).tolist()
    cand.sort(key=cmp_to_key(_gap_cmp(alpha, mm, nn)))
    return cand[:k]


def min_gap(alpha, N: int, k: int = 1) -> GapRecord:
    """The k-th smallest of the N-1 consecutive gaps among the first N levels."""
    if k < 1:
        raise ValidationError("k must be >= 1")
    if N < k + 1:
        raise ValidationError(f"N={N} levels have fewer than k={k} gaps")
    levels = enumerate_spectrum(alpha, N)
    return gap_from_levels(levels, k)


def gap_from_levels(levels: list[Eigenvalue], k: int = 1) -> GapRecord:
    i = kth_gaps(levels, k)[-1]
    return GapRecord(i + 1, levels[i], levels[i + 1], len(levels))


def scaled_gap_sweep(alpha, N_list: Iterable[int]) -> list[GapRecord]:
    """delta_min(N) for every N in an increasing list, from one enumeration."""
    N_list = list(N_list)
    if not N_list:
        return []
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ValidationError("N_list must be strictly increasing")
    if N_list[0] < 2:
        raise ValidationError("every N must be >= 2")
    levels = enumerate_spectrum(alpha, N_list[-1])
    alpha = levels[0].alpha
    mm, nn, gaps, err = _gap_arrays(levels)
    cmp = _gap_cmp(alpha, mm, nn)
    rows = []
    best = 0
    start = 1
    for N in N_list:
        # running minimum over gaps[start:N-1], exact ties resolved by cmp
        for i in range(start, N - 1):
            if gaps[i] < gaps[best] - 2 * err:
                best = i
            elif gaps[i] <= gaps[best] + 2 * err and cmp(i, best) < 0:
                best = i
        start = max(start, N - 1)
        rows.append(GapRecord(best + 1, levels[best], levels[best + 1], N))
    return rows


def propagate_gap(g: GapRecord) -> GapRecord:
    """The pair (2m, 2n), (2m', 2n'): both levels and the gap scale by 4."""
    lo, up = g.lower, g.upper
    return GapRecord(
        None,
        Eigenvalue(2 * lo.m, 2 * lo.n, lo.alpha),
        Eigenvalue(2 * up.m, 2 * up.n, up.alpha),
        g.N,
    )


def verify_in_spectrum(g: GapRecord) -> dict:
    """Exact membership and ranks of a gap's two endpoints.

    Returns the 1-based ranks, whether the two levels are adjacent in the
    spectrum, and the exact gap; the levels are rebuilt from ``(m, n)`` so
    membership is by construction and the rank is an exact lattice count.
    """
    lo, up = g.lower, g.upper
    r_lo, r_up = rank_of(lo), rank_of(up)
    return {"rank_lower": r_lo, "rank_upper": r_up, "adjacent": r_up == r_lo + 1}


def scaled_ratio(records: list[GapRecord]) -> float:
    """max/min of N*delta over a sweep, as a float (for display)."""
    vals = [float(r.scaled_gap) for r in records]
    return max(vals) / min(vals)


def scaled_ratio_at_most(records: list[GapRecord], bound) -> bool:
    """Exact test of ``max(N*delta) <= bound * min(N*delta)`` over a sweep."""
    bound = Fraction(bound)
    num, den = bound.numerator, bound.denominator
    alpha = records[0].alpha
    for r in records:
        ur, vr = r.affine
        for s in records:
            us, vs = s.affine
            # den * N_r * gap_r - num * N_s * gap_s <= 0
            u = den * r.N * ur - num * s.N * us
            v = den * r.N * vr - num * s.N * vs
            if alpha.sign_affine(u, v) > 0:
                return False
    return True
