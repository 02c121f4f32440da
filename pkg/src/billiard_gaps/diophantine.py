"""Continued fractions, convergents, Dirichlet approximation and divisor balance."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice
from typing import Iterator

import sympy
from sympy.ntheory import pollard_pm1, pollard_rho

from .bigint import divides, floordiv, int_str, isqrt
from .errors import FactorizationTimeout, PrecisionExhausted, RationalAlpha, ValidationError
from .exact import REPORT_DIGITS, CertifiedReal, LiteralAlpha, QuadSurd, SurdAlpha, as_alpha

TRIAL_BOUND = 10**6
DEFAULT_FACTOR_SECONDS = 30.0
RHO_SEED = 1234


@dataclass(frozen=True)
class CFExpansion:
    a0: int
    partial_quotients: tuple[int, ...]
    period: tuple[int, int] | None = None  # (start index, length); index 0 is a0
    finite: bool = False

    @property
    def terms(self) -> list[int]:
        return [self.a0, *self.partial_quotients]


@dataclass(frozen=True)
class Approximant:
    """A rational ``p/q`` next to ``alpha``; ``p, q`` are kept unreduced."""

    p: int
    q: int
    alpha: SurdAlpha | LiteralAlpha

    @property
    def affine(self) -> tuple[int, int]:
        """``(u, v)`` with ``q*alpha - p == u*alpha + v``."""
        return self.q, -self.p

    @property
    def signed_quality(self) -> QuadSurd | CertifiedReal:
        if self.alpha.exact:
            return self.alpha.affine(self.q, -self.p)
        return self.alpha.eval_affine(self.q, -self.p)

    @property
    def quality(self) -> QuadSurd | CertifiedReal:
        """``|q*alpha - p|``."""
        x = self.signed_quality
        if isinstance(x, QuadSurd):
            return abs(x)
        return x if self.alpha.sign_affine(self.q, -self.p) >= 0 else -x

    @property
    def scaled_quality(self) -> QuadSurd | CertifiedReal:
        """``q * |q*alpha - p|``."""
        x = self.quality
        return x * self.q if isinstance(x, QuadSurd) else x.scale_int(self.q)

    def quality_sign(self) -> int:
        return self.alpha.sign_affine(self.q, -self.p)

    def quality_decimal(self, digits: int = REPORT_DIGITS) -> str:
        s = self.quality_sign()
        return self.alpha.render_affine(s * self.q, -s * self.p, digits)

    def quality_at_most(self, bound: Fraction) -> bool:
        """Exact test of ``|q*alpha - p| <= bound``."""
        bound = Fraction(bound)
        num, den = bound.numerator, bound.denominator
        s = self.quality_sign()
        # s*(q alpha - p) * den - num <= 0
        return self.alpha.sign_affine(s * self.q * den, -s * self.p * den - num) <= 0

    def log_refined(self, eps: float) -> float:
        """Diagnostic ``q (log q)^(1+eps) |q alpha - p|`` (reported, never asserted)."""
        if self.q < 2:
            return float("nan")
        return float(self.scaled_quality) * math.log(self.q) ** (1 + eps)

    def to_dict(self) -> dict:
        return {"p": int_str(self.p), "q": int_str(self.q),
                "quality": self.quality_decimal(),
                "scaled_quality": self.alpha.render_affine(
                    self.quality_sign() * self.q * self.q, -self.quality_sign() * self.p * self.q)}


# --------------------------------------------------------------------------
# Continued fractions


def _fraction_cf(x: Fraction) -> Iterator[int]:
    p, q = x.numerator, x.denominator
    while q:
        a, r = divmod(p, q)
        yield a
        p, q = q, r


def _surd_cf(x: QuadSurd) -> Iterator[tuple[int, QuadSurd]]:
    """Yield ``(a_k, x_k)`` with x_k the complete quotient."""
    while True:
        a = x.floor()
        yield a, x
        x = (x - a).inverse()


def continued_fraction(alpha, depth: int) -> CFExpansion:
    """First ``depth`` terms (``a0`` included) of the continued fraction.

    Rational input gives the finite expansion (truncated to ``depth``). For
    a surd the complete quotients are tracked exactly; the first repeated
    quotient fixes the period and the remaining terms are read off it.
    For a literal, terms are produced while both ends of its interval agree
    and :class:`PrecisionExhausted` is raised past that point.
    """
    if depth < 1:
        raise ValidationError("depth must be >= 1")
    if isinstance(alpha, (int, Fraction)):
        return _rational_cf(Fraction(alpha), depth)
    alpha = as_alpha(alpha)
    if isinstance(alpha, LiteralAlpha):
        terms = _certain_prefix(alpha)
        if len(terms) < depth:
            raise PrecisionExhausted(
                f"literal {alpha.text} determines only {len(terms)} continued fraction terms")
        return CFExpansion(terms[0], tuple(terms[1:depth]))
    if alpha.is_rational:
        return _rational_cf(alpha.value.to_fraction(), depth)
    seen: dict[QuadSurd, int] = {}
    terms = []
    period = None
    for k, (a, x) in enumerate(_surd_cf(alpha.value)):
        if x in seen:
            start = seen[x]
            period = (start, k - start)
            break
        seen[x] = k
        terms.append(a)
        if len(terms) >= depth and k > 2 * depth + 50:
            break
    if period is not None:
        start, length = period
        while len(terms) < depth:
            terms.append(terms[start + (len(terms) - start) % length])
    return CFExpansion(terms[0], tuple(terms[1:depth]), period)


def _rational_cf(x: Fraction, depth: int) -> CFExpansion:
    full = list(_fraction_cf(x))
    terms = full[:depth]
    return CFExpansion(terms[0], tuple(terms[1:]), None, finite=len(full) <= depth)


def iter_partial_quotients(alpha) -> Iterator[int]:
    """Unbounded stream of partial quotients (finite for rationals).

    A literal yields the terms its interval determines, then raises
    :class:`PrecisionExhausted`.
    """
    if isinstance(alpha, (int, Fraction)):
        yield from _fraction_cf(Fraction(alpha))
        return
    alpha = as_alpha(alpha)
    if isinstance(alpha, LiteralAlpha):
        terms = _certain_prefix(alpha)
        yield from terms
        raise PrecisionExhausted(
            f"literal {alpha.text} determines only {len(terms)} continued fraction terms")
    if alpha.is_rational:
        yield from _fraction_cf(alpha.value.to_fraction())
        return
    for a, _ in _surd_cf(alpha.value):
        yield a


def _certain_prefix(alpha: LiteralAlpha) -> list[int]:
    """Terms shared by the expansions of both interval ends."""
    lo = list(_fraction_cf(alpha.mid - alpha.lit_radius))
    hi = list(_fraction_cf(alpha.mid + alpha.lit_radius))
    out = []
    # the last term of a finite expansion is not a reliable partial quotient
    for x, y in zip(lo[:-1], hi[:-1]):
        if x != y:
            break
        out.append(x)
    return out


def iter_convergents(alpha) -> Iterator[Approximant]:
    """Convergents p_k/q_k via p_k = a_k p_{k-1} + p_{k-2} (same for q)."""
    alpha = as_alpha(alpha)
    p0, q0, p1, q1 = 1, 0, 0, 1
    for a in iter_partial_quotients(alpha):
        p0, q0, p1, q1 = a * p0 + p1, a * q0 + q1, p0, q0
        yield Approximant(p0, q0, alpha)


def convergents(alpha, count: int) -> list[Approximant]:
    if count < 1:
        raise ValidationError("count must be >= 1")
    return list(islice(iter_convergents(alpha), count))


def dirichlet_approx(alpha, Q: int) -> Approximant:
    """``(a, q)`` with ``1 <= q <= Q`` and ``0 < |a - q alpha| <= 1/Q``.

    Takes the convergent with the largest denominator not exceeding ``Q``;
    the next convergent has ``q' > Q`` and ``|q alpha - a| < 1/q'``.
    """
    if Q < 1:
        raise ValidationError("Q must be >= 1")
    alpha = as_alpha(alpha)
    best = None
    for c in iter_convergents(alpha):
        if c.q > Q:
            break
        best = c
    if best is None:  # pragma: no cover - q_0 = 1 always qualifies
        raise ValidationError("no convergent with q <= Q")
    if best.quality_sign() == 0:
        raise RationalAlpha(f"alpha equals {best.p}/{best.q}")
    if best.p < 1:
        raise ValidationError(f"Q={Q} is too small for alpha < 1 (best numerator is 0)")
    if not best.quality_at_most(Fraction(1, Q)):  # pragma: no cover - theorem
        raise AssertionError("Dirichlet bound violated")
    return best


# --------------------------------------------------------------------------
# Factorization and divisor balance


def factorize(n: int, seconds: float = DEFAULT_FACTOR_SECONDS, seed: int = RHO_SEED) -> dict[int, int]:
    """Prime factorization: trial division to 10^6, then Pollard rho / p-1.

    Deterministic for a given ``seed``; raises :class:`FactorizationTimeout`
    once ``seconds`` have elapsed with a composite cofactor left.
    """
    if n < 1:
        raise ValidationError("can only factor positive integers")
    deadline = time.monotonic() + seconds
    found = sympy.factorint(n, limit=TRIAL_BOUND, use_rho=False, use_pm1=False, use_ecm=False)
    out: dict[int, int] = {}
    stack = []
    for p, e in found.items():
        if p <= TRIAL_BOUND * TRIAL_BOUND or sympy.isprime(p):
            if p > TRIAL_BOUND and not sympy.isprime(p):
                stack.extend([p] * e)
            else:
                out[p] = out.get(p, 0) + e
        else:
            stack.extend([p] * e)
    attempt = 0
    while stack:
        c = stack.pop()
        if c == 1:
            continue
        if sympy.isprime(c):
            out[c] = out.get(c, 0) + 1
            continue
        r = isqrt(c)
        if r * r == c:
            stack.extend([r, r])
            continue
        if time.monotonic() > deadline:
            raise FactorizationTimeout(f"could not split {c} within {seconds}s")
        f = pollard_rho(c, seed=seed + attempt, max_steps=20000, retries=2)
        if not f:
            f = pollard_pm1(c, seed=seed + attempt, B=2000 * (attempt + 1), retries=1)
        attempt += 1
        if f:
            stack.extend([f, c // f])
        else:
            stack.append(c)
    return dict(sorted(out.items()))


def divisors_from_factorization(fac: dict[int, int]) -> list[int]:
    divs = [1]
    for p, e in fac.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def balance_of(n: int, d: int) -> float:
    """``log min(d, n/d) / (log(n) / 2)``; 1 for n = 1."""
    if not divides(d, n):
        raise ValidationError(f"{d} does not divide {n}")
    if n == 1:
        return 1.0
    small = min(d, floordiv(n, d))
    return math.log(small) / (0.5 * math.log(n))


def divisor_exponent(n: int, d: int) -> float:
    """``log d / log n``: the exponent theta with d = n^theta."""
    return math.log(d) / math.log(n) if n > 1 else 0.0


@dataclass(frozen=True)
class DivisorWitness:
    n: int
    d: int

    @property
    def complement(self) -> int:
        return floordiv(self.n, self.d)

    @property
    def balance(self) -> float:
        return balance_of(self.n, self.d)

    @property
    def balance_str(self) -> str:
        return f"{self.balance:.10f}"

    def meets(self, theta: Fraction) -> bool:
        """Exact test of ``min(d, n/d) >= n^(theta/2)``, i.e. balance >= theta."""
        theta = Fraction(theta)
        small = min(self.d, self.complement)
        # small^(2 den) >= n^(num)
        return small ** (2 * theta.denominator) >= self.n**theta.numerator

    def to_dict(self) -> dict:
        return {"n": int_str(self.n), "d": int_str(self.d), "balance": self.balance_str}


def best_divisor(n: int, seconds: float = DEFAULT_FACTOR_SECONDS) -> DivisorWitness:
    """The divisor ``d <= sqrt(n)`` maximizing ``min(d, n/d)``."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    root = isqrt(n)
    best = 1
    for d in divisors_from_factorization(factorize(n, seconds)):
        if d > root:
            break
        best = d
    return DivisorWitness(n, best)


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def desquare(p: int, q: int) -> tuple[int, int, int]:
    """Smallest ``t`` in {1, 2, 3} with neither ``t*p`` nor ``t*q`` a square.

    Returns ``(t*p, t*q, t)``.
    """
    if p < 1 or q < 1:
        raise ValidationError("p and q must be positive")
    for t in (1, 2, 3):
        if not is_square(t * p) and not is_square(t * q):
            return t * p, t * q, t
    raise AssertionError("unreachable: one of t = 1, 2, 3 always works")  # pragma: no cover
