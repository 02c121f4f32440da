"""Brute-force counting objects: multiplication-table entries and the
quadruple count ``#{n_i in [M, 2M] : |n1 n2 / (n3 n4) - alpha| <= 1/T}``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import MemoryBound, ValidationError
from .exact import as_alpha

DEFAULT_MAX_X = 30_000  # a bitmap of X^2 bytes; 30k is about 0.9 GB
FORD_C = 1 - (1 + math.log(math.log(2))) / math.log(2)


def mult_table_distinct(X: int, max_X: int = DEFAULT_MAX_X) -> int:
    """Number of distinct products ``u*v`` with ``1 <= u, v <= X``."""
    if X < 1:
        raise ValidationError("X must be >= 1")
    if X > max_X:
        raise MemoryBound(f"X={X} exceeds the configured bound {max_X}")
    seen = np.zeros(X * X + 1, dtype=bool)
    for u in range(1, X + 1):
        seen[u * np.arange(u, X + 1, dtype=np.int64)] = True
    return int(seen.sum())


def ford_exponent_report(X_list: Iterable[int], c: float = FORD_C,
                         loglog_exponent: float = -2 / 3, max_X: int = DEFAULT_MAX_X) -> list[dict]:
    """Distinct-product ratio next to ``(log X)^(-c) (log log X)^loglog_exponent``.

    Descriptive only; the asymptotic regime is far beyond reach.
    """
    rows = []
    for X in sorted(set(X_list)):
        count = mult_table_distinct(X, max_X)
        ratio = count / (X * X)
        ref = math.log(X) ** (-c) * math.log(math.log(X)) ** loglog_exponent if X >= 3 else float("nan")
        rows.append({"X": X, "distinct": count, "ratio": ratio, "reference": ref,
                     "ratio_over_reference": ratio / ref if X >= 3 else float("nan"),
                     "c": f"{c:.6f}"})
    return rows


# --------------------------------------------------------------------------
# Quadruples


@dataclass(frozen=True)
class QuadrupleWindow:
    """All ``n_i`` in ``[M, 2M]``; threshold ``T`` with ``M^3 <= T <= M^4``.

    ``T`` defaults to ``floor(M^t_exp)`` (exact for integral ``t_exp``).
    """

    M: int
    t_exp: Fraction = Fraction(3)
    T: int | None = None

    def __post_init__(self):
        if self.M < 2:
            raise ValidationError("M must be >= 2")
        if self.T is None:
            e = Fraction(self.t_exp)
            T = self.M ** int(e) if e.denominator == 1 else math.floor(self.M ** float(e))
            object.__setattr__(self, "T", T)
        if not self.M**3 <= self.T <= self.M**4:
            raise ValidationError(f"T={self.T} outside [M^3, M^4]")

    @property
    def lo(self) -> int:
        return self.M

    @property
    def hi(self) -> int:
        return 2 * self.M


@dataclass(frozen=True)
class QuadrupleCount:
    window: QuadrupleWindow
    count: int
    witnesses: tuple[tuple[int, int, int, int], ...]

    def to_dict(self) -> dict:
        w = self.window
        return {"M": w.M, "T": str(w.T), "count": self.count,
                "witnesses": [list(x) for x in self.witnesses]}


def _product_counts(lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    r = np.arange(lo, hi + 1, dtype=np.int64)
    return np.unique(np.multiply.outer(r, r).ravel(), return_counts=True)


def _factor_in_window(a: int, lo: int, hi: int) -> tuple[int, int]:
    for x in range(lo, hi + 1):
        if a % x == 0 and lo <= a // x <= hi:
            return x, a // x
    raise AssertionError("product has no in-window factorization")  # pragma: no cover


def quadruple_count(w: QuadrupleWindow, alpha, max_witnesses: int = 10) -> QuadrupleCount:
    """Exact count of ordered quadruples via sorted products.

    For each product ``b = n3 n4`` the admissible ``a = n1 n2`` satisfy
    ``T a - b <= alpha T b <= T a + b``; a float search over the sorted
    distinct products narrows the candidates, which are then decided exactly.
    """
    alpha = as_alpha(alpha)
    T = w.T
    vals, counts = _product_counts(w.lo, w.hi)
    fv = vals.astype(np.float64)
    a_float = alpha.approx
    slack = 1e-9
    lo_f = fv * (a_float - 1 / T) * (1 - slack) - 1
    hi_f = fv * (a_float + 1 / T) * (1 + slack) + 1
    start = np.searchsorted(fv, lo_f, side="left")
    stop = np.searchsorted(fv, hi_f, side="right")
    total = 0
    hits: list[tuple[int, int]] = []
    for j in np.nonzero(stop > start)[0]:
        b = int(vals[j])
        for i in range(start[j], stop[j]):
            a = int(vals[i])
            # alpha T b - (T a - b) >= 0  and  (T a + b) - alpha T b >= 0
            if alpha.sign_affine(T * b, b - T * a) >= 0 and alpha.sign_affine(-T * b, T * a + b) >= 0:
                total += int(counts[i]) * int(counts[j])
                if len(hits) < max_witnesses:
                    hits.append((a, b))
    witnesses = tuple((*_factor_in_window(a, w.lo, w.hi), *_factor_in_window(b, w.lo, w.hi))
                      for a, b in hits)
    return QuadrupleCount(w, total, witnesses)
