"""Integer Chebyshev values, strong divisibility sequences, Pell equations and
prime selection.

Half-integral specializations are integers: ``U_k(x/2)`` is the Lucas
sequence ``U_{k+1}(P=x, Q=1)`` and ``2 T_k(x/2)`` is ``V_k(P=x, Q=1)``.
Small indices use the three-term recurrence; indices above
``FAST_INDEX`` use the doubling ladder
``V_2k = V_k^2 - 2``, ``U_2k = U_k V_k`` (composition formula with m = n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Iterable, Literal

import sympy

from .bigint import gcd, int_str, isqrt, lcm, mpz
from .errors import InvalidSpec, OddIndexRequired, PoolExhausted, SquareD, ValidationError

FAST_INDEX = 10_000


# --------------------------------------------------------------------------
# Lucas sequences with Q = +-1


def lucas_uv(n: int, P: int, Q: int = 1) -> tuple[int, int]:
    """``(U_n, V_n)`` of the Lucas pair with parameters ``(P, Q)``, ``Q = +-1``.

    ``U_0 = 0, U_1 = 1, V_0 = 2, V_1 = P`` and ``W_{k+1} = P W_k - Q W_{k-1}``.
    """
    if n < 0:
        raise ValidationError("index must be >= 0")
    if Q not in (1, -1):
        raise ValidationError("only Q = +1 or -1 is supported")
    if n < FAST_INDEX:
        u0, u1, v0, v1 = 0, 1, 2, P
        for _ in range(n):
            u0, u1 = u1, P * u1 - Q * u0
            v0, v1 = v1, P * v1 - Q * v0
        return u0, v0
    D = P * P - 4 * Q
    u, v, qk = mpz(1), mpz(P), Q  # index 1; qk = Q^k
    for bit in bin(n)[3:]:
        u, v = u * v, v * v - 2 * qk
        qk = 1
        if bit == "1":
            # U_{k+1} = (P U_k + V_k)/2, V_{k+1} = (D U_k + P V_k)/2
            u, v = (P * u + v) // 2, (D * u + P * v) // 2
            qk = Q
    return int(u), int(v)


def cheb_T2(n: int, x: int) -> int:
    """``2 T_n(x/2)``: a_0 = 2, a_1 = x, a_{k+1} = x a_k - a_{k-1}."""
    if n < 0:
        raise ValidationError("n must be >= 0")
    if n < FAST_INDEX:
        a0, a1 = 2, x
        for _ in range(n):
            a0, a1 = a1, x * a1 - a0
        return a0
    return lucas_uv(n, x, 1)[1]


def cheb_U(k: int, x: int) -> int:
    """``U_k(x/2)``: b_0 = 1, b_1 = x, b_{j+1} = x b_j - b_{j-1}; U_{-1} = 0."""
    if k < -1:
        raise ValidationError("U index must be >= -1")
    if k + 1 < FAST_INDEX:
        b0, b1 = 0, 1
        for _ in range(k + 1):
            b0, b1 = b1, x * b1 - b0
        return b0
    return lucas_uv(k + 1, x, 1)[0]


def cheb_T2_table(nmax: int, x: int) -> list[int]:
    out = [2, x]
    for _ in range(nmax - 1):
        out.append(x * out[-1] - out[-2])
    return out[: nmax + 1]


def cheb_U_table(kmax: int, x: int) -> list[int]:
    """``[U_0(x/2), ..., U_kmax(x/2)]``."""
    out = [1, x]
    for _ in range(kmax - 1):
        out.append(x * out[-1] - out[-2])
    return out[: kmax + 1]


def verify_pell_poly(n: int, x: int) -> bool:
    """``T_n(x)^2 - (x^2 - 1) U_{n-1}(x)^2 == 1`` at an integer point ``x``."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    t2 = cheb_T2(n, 2 * x)  # 2 T_n(x)
    u = cheb_U(n - 1, 2 * x)  # U_{n-1}(x)
    # (2T)^2 = 4 T^2
    return t2 % 2 == 0 and (t2 // 2) ** 2 - (x * x - 1) * u * u == 1


def verify_composition(n: int, m: int, x: int) -> bool:
    """``2T_{n+m} == 2T_n * 2T_m - 2T_{n-m}`` at ``x/2``, for ``n >= m >= 0``."""
    if not n >= m >= 0:
        raise ValidationError("need n >= m >= 0")
    return cheb_T2(n + m, x) == cheb_T2(n, x) * cheb_T2(m, x) - cheb_T2(n - m, x)


# --------------------------------------------------------------------------
# Strong divisibility sequences

SDSKind = Literal["U_halfint", "T_halfint_doubled", "linear_recurrence"]


@dataclass(frozen=True)
class SDSSpec:
    """An integer sequence ``a_n`` with (some form of) strong divisibility.

    ``U_halfint``: ``a_n = U_{n-1}(x/2)``. ``T_halfint_doubled``:
    ``a_n = 2 T_n(x/2)`` (odd indices only). ``linear_recurrence``:
    ``a_0 = 0, a_1 = 1, a_{n+1} = b a_n + d a_{n-1}`` with ``gcd(b, d) = 1``.
    """

    kind: SDSKind
    x: int = 0
    b: int = 0
    d: int = 0

    def __post_init__(self):
        if self.kind not in ("U_halfint", "T_halfint_doubled", "linear_recurrence"):
            raise InvalidSpec(f"unknown SDS kind {self.kind!r}")
        if self.kind == "linear_recurrence" and gcd(self.b, self.d) != 1:
            raise InvalidSpec(f"need gcd(b, d) = 1, got b={self.b}, d={self.d}")

    def term(self, n: int) -> int:
        if self.kind == "U_halfint":
            return cheb_U(n - 1, self.x)
        if self.kind == "T_halfint_doubled":
            return cheb_T2(n, self.x)
        if n < FAST_INDEX or self.d not in (1, -1):
            a0, a1 = 0, 1
            for _ in range(n):
                a0, a1 = a1, self.b * a1 + self.d * a0
            return a0
        return lucas_uv(n, self.b, -self.d)[0]

    def table(self, nmax: int) -> list[int]:
        """``[a_0, ..., a_nmax]``."""
        if self.kind == "U_halfint":
            return [0] + cheb_U_table(nmax - 1, self.x) if nmax >= 1 else [0]
        if self.kind == "T_halfint_doubled":
            return cheb_T2_table(nmax, self.x)
        out = [0, 1]
        for _ in range(nmax - 1):
            out.append(self.b * out[-1] + self.d * out[-2])
        return out[: nmax + 1]


def sds_gcd_check(spec: SDSSpec, n: int, m: int, table: list[int] | None = None) -> bool:
    """``gcd(a_n, a_m) == |a_gcd(n, m)|`` for the given sequence."""
    if n < 1 or m < 1:
        raise ValidationError("indices must be >= 1")
    if spec.kind == "T_halfint_doubled" and (n % 2 == 0 or m % 2 == 0):
        raise OddIndexRequired(f"2T identity needs odd indices, got ({n}, {m})")
    a = table.__getitem__ if table is not None else spec.term
    return gcd(a(n), a(m)) == abs(a(gcd(n, m)))


# --------------------------------------------------------------------------
# Pell equation


@dataclass(frozen=True)
class PellSolution:
    D: int
    x: int
    y: int

    def __post_init__(self):
        if self.x * self.x - self.D * self.y * self.y != 1:
            raise ValidationError(f"({self.x}, {self.y}) does not solve x^2 - {self.D} y^2 = 1")

    def to_dict(self) -> dict:
        return {"D": self.D, "x": int_str(self.x), "y": int_str(self.y)}


def pell_fundamental(D: int) -> PellSolution:
    """Least positive solution of ``x^2 - D y^2 = 1`` from the expansion of sqrt(D).

    Runs the complete-quotient recurrence ``m' = a q - m``,
    ``q' = (D - m'^2)/q``, ``a' = (a0 + m')/q'`` while accumulating
    convergents; the first convergent with ``p^2 - D q^2 = 1`` is returned.
    """
    if D < 2:
        raise ValidationError("D must be >= 2")
    a0 = isqrt(D)
    if a0 * a0 == D:
        raise SquareD(f"D={D} is a perfect square")
    m, q, a = 0, 1, a0
    p0, p1 = a0, 1
    q0, q1 = 1, 0
    while p0 * p0 - D * q0 * q0 != 1:
        m = a * q - m
        q = (D - m * m) // q
        a = (a0 + m) // q
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
    return PellSolution(D, p0, q0)


def _zsqrt_pow(x: int, y: int, D: int, n: int) -> tuple[int, int]:
    rx, ry, x, y = mpz(1), mpz(0), mpz(x), mpz(y)
    while n:
        if n & 1:
            rx, ry = rx * x + D * ry * y, rx * y + ry * x
        n >>= 1
        if n:
            x, y = x * x + D * y * y, 2 * x * y
    return int(rx), int(ry)


def pell_sequence(D: int, n: int, fundamental: PellSolution | None = None) -> PellSolution:
    """``(x_n, y_n) = (T_n(x), y U_{n-1}(x))`` for the fundamental ``(x, y)``.

    Equal to ``(x + y sqrt D)^n``; large ``n`` use binary powering in Z[sqrt D].
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    f = fundamental or pell_fundamental(D)
    if n < 64:
        xn = cheb_T2(n, 2 * f.x) // 2
        yn = f.y * cheb_U(n - 1, 2 * f.x)
    else:
        xn, yn = _zsqrt_pow(f.x, f.y, D, n)
    return PellSolution(D, xn, yn)


def pell_growth_slope(fundamental: PellSolution) -> float:
    """``log10(x + sqrt(x^2 - 1))``: digits gained per index step."""
    x = fundamental.x
    return math.log10(x + math.sqrt(x * x - 1))


# --------------------------------------------------------------------------
# Prime selection


@dataclass(frozen=True)
class PrimePool:
    """Admissible primes: odd, below ``bound``, optionally in a residue class
    and coprime to a given integer."""

    bound: int = 10**6
    residue: tuple[int, int] | None = None  # (r, modulus)
    coprime_to: int = 1
    exclude: frozenset[int] = frozenset()

    def primes(self) -> Iterable[int]:
        for p in sympy.primerange(3, self.bound):
            if self.residue and p % self.residue[1] != self.residue[0]:
                continue
            if self.coprime_to % p == 0 or p in self.exclude:
                continue
            yield p


POOLS = {
    "odd": PrimePool(),
    "1mod4": PrimePool(residue=(1, 4)),
    "3mod4": PrimePool(residue=(3, 4)),
}


@dataclass(frozen=True)
class PrimeSelection:
    primes: tuple[int, ...]
    epsilon: Fraction

    @property
    def density(self) -> Fraction:
        """``1 - prod(1 - 1/l)`` as an exact rational."""
        prod = Fraction(1)
        for p in self.primes:
            prod *= Fraction(p - 1, p)
        return 1 - prod

    @property
    def product(self) -> int:
        return math.prod(self.primes)

    def in_window(self) -> bool:
        return Fraction(1, 2) - self.epsilon < self.density < Fraction(1, 2)

    def to_dict(self) -> dict:
        return {"primes": list(self.primes), "epsilon": str(self.epsilon),
                "density": str(self.density), "density_decimal": f"{float(self.density):.8f}"}


def prime_select(epsilon, pool: PrimePool | str = "odd") -> PrimeSelection:
    """Greedy smallest-first primes with density in (1/2 - eps, 1/2).

    A prime is taken whenever it keeps the density below 1/2; selection stops
    as soon as the density exceeds 1/2 - eps.
    """
    eps = Fraction(epsilon).limit_denominator(10**12) if isinstance(epsilon, float) else Fraction(epsilon)
    if not 0 < eps < Fraction(1, 2):
        raise ValidationError("epsilon must lie in (0, 1/2)")
    if isinstance(pool, str):
        if pool not in POOLS:
            raise ValidationError(f"unknown pool policy {pool!r}; choose from {sorted(POOLS)}")
        pool = POOLS[pool]
    chosen: list[int] = []
    prod = Fraction(1)
    target = Fraction(1, 2) - eps
    for p in pool.primes():
        new = prod * Fraction(p - 1, p)
        if 1 - new < Fraction(1, 2):
            chosen.append(p)
            prod = new
            if 1 - prod > target:
                return PrimeSelection(tuple(chosen), eps)
    raise PoolExhausted(f"primes below {pool.bound} cannot reach density > {float(target)}")


# --------------------------------------------------------------------------
# lcm and its inclusion-exclusion audit


@dataclass(frozen=True)
class LcmResult:
    value: int
    audited: bool | None = None


def lcm_divisor(values: list[int], audit: bool = False) -> LcmResult:
    """lcm of positive integers, optionally checked against

    ``lcm(a_1..a_J) * prod_{|S| even} gcd(S) == prod_{|S| odd} gcd(S)``
    over nonempty subsets S.
    """
    if not values:
        raise ValidationError("need at least one value")
    if any(v < 1 for v in values):
        raise ValidationError("values must be positive")
    L = lcm(values)
    if not audit:
        return LcmResult(L)
    odd, even = 1, 1
    for r in range(1, len(values) + 1):
        for S in combinations(values, r):
            g = reduce(gcd, S)
            if r % 2:
                odd *= g
            else:
                even *= g
    return LcmResult(L, L * even == odd)


def pool_from_name(name: str, coprime_to: int = 1, bound: int = 10**6) -> PrimePool:
    base = POOLS.get(name)
    if base is None:
        raise ValidationError(f"unknown pool policy {name!r}")
    return PrimePool(bound=bound, residue=base.residue, coprime_to=coprime_to)
