"""Exact arithmetic in Q(sqrt d) and certified numeric rendering.

A billiard parameter ``alpha`` is either a :class:`SurdAlpha` (an exact
quadratic surd, every comparison decided by integer arithmetic) or a
:class:`LiteralAlpha` (a decimal literal, understood as the interval of reals
that round to it). Both expose ``sign_affine(u, v)``, the sign of
``u*alpha + v`` for integers ``u, v``. Every eigenvalue ``alpha*m^2 + n^2`` and
every difference of two eigenvalues has this affine shape, so that single
predicate is all the spectrum code needs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache

import sympy

from .bigint import gcd, isqrt, mpz, SMALL_BITS
from .errors import MixedRadicands, PrecisionExhausted, ValidationError

START_BITS = 128
DEFAULT_PRECISION_CAP = 4096
REPORT_DIGITS = 30

_LOG10_2 = math.log10(2)


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


@lru_cache(maxsize=4096)
def squarefree_split(d: int) -> tuple[int, int]:
    """Return ``(s, k)`` with ``d == s*s*k`` and ``k`` squarefree."""
    if d <= 0:
        raise ValidationError(f"radicand must be positive, got {d}")
    s, k = 1, 1
    for p, e in sympy.factorint(d).items():
        s *= p ** (e // 2)
        if e % 2:
            k *= p
    return s, k


def surd_sign(u: int, v: int, d: int) -> int:
    """Exact sign of ``u + v*sqrt(d)`` for a nonsquare ``d``."""
    su, sv = _sgn(u), _sgn(v)
    if sv == 0 or su == sv:
        return su or sv
    if su == 0:
        return sv
    if u.bit_length() > SMALL_BITS:
        u, v = mpz(u), mpz(v)
    lhs, rhs = u * u, v * v * d
    if lhs == rhs:
        return 0
    return su if lhs > rhs else sv


# --------------------------------------------------------------------------
# Certified reals


@dataclass(frozen=True)
class CertifiedReal:
    """The interval ``[(man - rad) * 2**exp, (man + rad) * 2**exp]``."""

    man: int
    rad: int
    exp: int

    @property
    def midpoint(self) -> Fraction:
        return _scale(Fraction(self.man), self.exp)

    @property
    def radius(self) -> Fraction:
        return _scale(Fraction(self.rad), self.exp)

    @classmethod
    def exact(cls, value: int | Fraction, bits: int = START_BITS) -> CertifiedReal:
        value = Fraction(value)
        den = value.denominator
        if den & (den - 1) == 0:
            return cls(value.numerator, 0, -(den.bit_length() - 1))
        num = value.numerator
        # relative precision: shift so the mantissa has at least bits+2 bits
        k = max(0, bits + 2 + den.bit_length() - abs(num).bit_length())
        q, r = divmod(num << k, den)
        return cls(q, 1 if r else 0, -k)

    def sign(self) -> int | None:
        """Sign of every point of the interval, or ``None`` if it straddles 0."""
        if self.man > self.rad:
            return 1
        if self.man < -self.rad:
            return -1
        if self.man == 0 and self.rad == 0:
            return 0
        return None

    def _align(self, other: CertifiedReal) -> tuple[int, int, int, int, int]:
        e = min(self.exp, other.exp)
        s1, s2 = self.exp - e, other.exp - e
        return self.man << s1, self.rad << s1, other.man << s2, other.rad << s2, e

    def __add__(self, other: CertifiedReal) -> CertifiedReal:
        m1, r1, m2, r2, e = self._align(other)
        return CertifiedReal(m1 + m2, r1 + r2, e)

    def __neg__(self) -> CertifiedReal:
        return CertifiedReal(-self.man, self.rad, self.exp)

    def __sub__(self, other: CertifiedReal) -> CertifiedReal:
        return self + (-other)

    def scale_int(self, k: int) -> CertifiedReal:
        return CertifiedReal(self.man * k, self.rad * abs(k), self.exp)

    def __float__(self) -> float:
        m, e = self.man, self.exp
        extra = abs(m).bit_length() - 60
        if extra > 0:
            m, e = m >> extra, e + extra
        return math.ldexp(m, e)

    def floor(self) -> int:
        """Floor of the midpoint."""
        return self.man << self.exp if self.exp >= 0 else self.man >> -self.exp

    def to_decimal(self, digits: int = REPORT_DIGITS) -> str:
        """Render the midpoint with ``digits`` significant digits."""
        return _dyadic_to_decimal(self.man, self.exp, digits)


def _scale(x: Fraction, exp: int) -> Fraction:
    return x * (1 << exp) if exp >= 0 else x / (1 << -exp)


def _dyadic_to_decimal(man: int, exp: int, digits: int) -> str:
    if man == 0:
        return "0"
    sign = 1 if man < 0 else 0
    man = abs(man)
    e10 = math.floor((man.bit_length() - 1 + exp) * _LOG10_2)
    for _ in range(3):
        shift = digits - 1 - e10
        num = man * 10**shift if shift >= 0 else man
        den = 1 if shift >= 0 else 10**-shift
        if exp >= 0:
            num <<= exp
        else:
            den <<= -exp
        q = (2 * num + den) // (2 * den)
        nd = len(str(q))
        if nd == digits:
            break
        e10 += nd - digits
    return str(Decimal((sign, tuple(int(ch) for ch in str(q)), e10 - digits + 1)))


# --------------------------------------------------------------------------
# Quadratic surds


class QuadSurd:
    """The real number ``(a + b*sqrt(d)) / c`` in canonical form.

    Canonical means ``d`` squarefree, ``c >= 1``, ``gcd(a, b, c) == 1`` and
    ``d == 1`` whenever ``b == 0``. Two surds are equal iff their fields are.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int, b: int = 0, c: int = 1, d: int = 1):
        if c == 0:
            raise ZeroDivisionError("surd denominator is zero")
        if b == 0 or d == 0:
            b, d = 0, 1
        else:
            s, d = squarefree_split(d)
            b *= s
            if d == 1:
                a, b = a + b, 0
        if c < 0:
            a, b, c = -a, -b, -c
        g = gcd(gcd(a, b), c)
        if g > 1:
            a, b, c = a // g, b // g, c // g
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadSurd is immutable")

    def __reduce__(self):
        return QuadSurd, (self.a, self.b, self.c, self.d)

    @classmethod
    def sqrt(cls, r: int | Fraction) -> QuadSurd:
        """``sqrt(r)`` for a positive rational ``r``."""
        r = Fraction(r)
        if r <= 0:
            raise ValidationError(f"sqrt needs a positive argument, got {r}")
        # sqrt(p/q) = sqrt(p*q)/q
        return cls(0, 1, r.denominator, r.numerator * r.denominator)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b:
            raise ValueError(f"{self} is irrational")
        return Fraction(self.a, self.c)

    def __repr__(self) -> str:
        if self.b == 0:
            return f"QuadSurd({self.a}/{self.c})" if self.c != 1 else f"QuadSurd({self.a})"
        return f"QuadSurd(({self.a}{self.b:+d}*sqrt({self.d}))/{self.c})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(Fraction(self.a, self.c))
        s = f"{self.a} {'+' if self.b > 0 else '-'} {abs(self.b)}*sqrt({self.d})"
        return f"({s})/{self.c}" if self.c != 1 else s

    def grammar(self) -> str:
        return f"surd:{self.a},{self.b},{self.c},{self.d}"

    # ---- coercion

    @staticmethod
    def _coerce(x) -> QuadSurd:
        if isinstance(x, QuadSurd):
            return x
        if isinstance(x, int):
            return QuadSurd(x)
        if isinstance(x, Fraction):
            return QuadSurd(x.numerator, 0, x.denominator)
        return NotImplemented

    def _common_d(self, other: QuadSurd) -> int:
        if self.b == 0:
            return other.d
        if other.b == 0 or other.d == self.d:
            return self.d
        raise MixedRadicands(f"sqrt({self.d}) and sqrt({other.d}) do not mix")

    # ---- field operations

    def __add__(self, other) -> QuadSurd:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self._common_d(other)
        return QuadSurd(self.a * other.c + other.a * self.c,
                        self.b * other.c + other.b * self.c,
                        self.c * other.c, d)

    __radd__ = __add__

    def __neg__(self) -> QuadSurd:
        return QuadSurd(-self.a, -self.b, self.c, self.d)

    def __pos__(self) -> QuadSurd:
        return self

    def __sub__(self, other) -> QuadSurd:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> QuadSurd:
        return (-self) + other

    def __mul__(self, other) -> QuadSurd:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self._common_d(other)
        return QuadSurd(self.a * other.a + self.b * other.b * d,
                        self.a * other.b + self.b * other.a,
                        self.c * other.c, d)

    __rmul__ = __mul__

    def conjugate(self) -> QuadSurd:
        return QuadSurd(self.a, -self.b, self.c, self.d)

    def norm(self) -> Fraction:
        """Field norm ``x * conj(x)``."""
        return Fraction(self.a * self.a - self.b * self.b * self.d, self.c * self.c)

    def inverse(self) -> QuadSurd:
        n = self.a * self.a - self.b * self.b * self.d
        if n == 0:
            raise ZeroDivisionError("inverse of zero surd")
        # c / (a + b sqrt d) = c (a - b sqrt d) / n
        return QuadSurd(self.c * self.a, -self.c * self.b, n, self.d)

    def __truediv__(self, other) -> QuadSurd:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._common_d(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> QuadSurd:
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int) -> QuadSurd:
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = QuadSurd(1)
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # ---- order

    def sign(self) -> int:
        return surd_sign(self.a, self.b, self.d)

    def __abs__(self) -> QuadSurd:
        return -self if self.sign() < 0 else self

    def _cmp(self, other) -> int:
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare QuadSurd with {type(other).__name__}")
        return (self - other).sign()

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(Fraction(self.a, self.c))
        return hash((self.a, self.b, self.c, self.d))

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def floor(self) -> int:
        g = surd_eval(self, 64).floor()
        while self < g:
            g -= 1
        while self >= g + 1:
            g += 1
        return g

    def __float__(self) -> float:
        return float(surd_eval(self, 64))

    def to_decimal(self, digits: int = REPORT_DIGITS) -> str:
        return surd_eval(self, int(digits / _LOG10_2) + 8).to_decimal(digits)


def surd_arith(x: QuadSurd, y: QuadSurd, op: str) -> QuadSurd:
    ops = {"add": QuadSurd.__add__, "sub": QuadSurd.__sub__,
           "mul": QuadSurd.__mul__, "div": QuadSurd.__truediv__}
    if op not in ops:
        raise ValidationError(f"unknown surd operation {op!r}")
    return ops[op](x, y)


def surd_eval(x: QuadSurd, bits: int = START_BITS) -> CertifiedReal:
    """Certified enclosure with ``radius <= 2**-bits * max(1, |x|)``.

    The precision is in fact relative: when ``a`` and ``b*sqrt(d)`` nearly
    cancel, the value is rewritten as ``(a^2 - b^2 d) / (c (a - b sqrt d))``
    so that tiny gaps are rendered to full relative accuracy.
    """
    if bits < 8:
        raise ValidationError("surd_eval needs bits >= 8")
    if x.b == 0:
        return CertifiedReal.exact(Fraction(x.a, x.c), bits)
    a, b, c, d = x.a, x.b, x.c, x.d
    sb = _sgn(b)
    if a == 0 or _sgn(a) == sb:
        # no cancellation, |x| >= sqrt(2)/c
        k = bits + c.bit_length() + 2
        s = isqrt((b * b * d) << (2 * k))  # floor(|b| sqrt(d) 2^k)
        num = (a << k) + sb * s  # true numerator lies strictly between num and num + sb
        man = (2 * num + sb) // (2 * c)
        return CertifiedReal(man, 2, -k)
    n0 = a * a - b * b * d
    k = bits + 4
    s = isqrt((b * b * d) << (2 * k))
    den = c * ((abs(a) << k) + s)  # c(|a| + |b| sqrt d) * 2^k, true value in [den, den + c)
    j = max(0, bits + 6 - (abs(n0).bit_length() + k - den.bit_length()))
    q0 = (abs(n0) << (k + j)) // den
    rad = (q0 >> (k - 2)) + 2
    sgn = _sgn(n0) * _sgn(a)
    return CertifiedReal(sgn * q0, rad, -j)


def certified_sign(evaluate, start: int = START_BITS, cap: int = DEFAULT_PRECISION_CAP) -> int:
    """Sign of a quantity given as ``evaluate(bits) -> CertifiedReal``.

    Doubles the working precision from ``start`` until the enclosure excludes
    zero; raises :class:`PrecisionExhausted` past ``cap`` bits.
    """
    bits = start
    while True:
        s = evaluate(bits).sign()
        if s is not None:
            return s
        if bits >= cap:
            raise PrecisionExhausted(f"sign undecided at {bits} bits")
        bits = min(2 * bits, cap)


# --------------------------------------------------------------------------
# Billiard parameters


class SurdAlpha:
    """Exact parameter; all predicates are decided by integer arithmetic."""

    exact = True

    def __init__(self, value: QuadSurd, label: str | None = None):
        if value.sign() <= 0:
            raise ValidationError(f"alpha must be positive, got {value}")
        self.value = value
        self.label = label or value.grammar()
        self.approx = float(value)
        # |float(alpha) - alpha| bound, plus slack for the conversion
        self.float_err = 4 * math.ulp(self.approx)

    @property
    def is_rational(self) -> bool:
        return self.value.is_rational

    def __repr__(self) -> str:
        return f"SurdAlpha({self.label})"

    def sign_affine(self, u: int, v: int) -> int:
        """Sign of ``u*alpha + v``."""
        x = self.value
        return surd_sign(u * x.a + v * x.c, u * x.b, x.d)

    def affine(self, u: int, v: int) -> QuadSurd:
        return self.value * u + v

    def eval_affine(self, u: int, v: int, bits: int = START_BITS) -> CertifiedReal:
        return surd_eval(self.affine(u, v), bits)

    def render_affine(self, u: int, v: int, digits: int = REPORT_DIGITS) -> str:
        return self.affine(u, v).to_decimal(digits)


class LiteralAlpha:
    """A decimal literal ``x``, read as every real that rounds to it.

    The enclosure is ``x +- 10**-k / 2`` for ``k`` fractional digits. Predicates
    are evaluated at a dyadic working precision that starts at 128 bits and
    doubles up to ``precision_cap``; a predicate that stays undecided raises
    :class:`PrecisionExhausted` rather than guessing.
    """

    exact = False
    is_rational = False

    def __init__(self, text: str, precision_cap: int = DEFAULT_PRECISION_CAP):
        text = text.strip()
        if not re.fullmatch(r"\d+(\.\d+)?", text):
            raise ValidationError(f"malformed decimal literal {text!r}")
        self.text = text
        self.label = f"dec:{text}"
        self.mid = Fraction(Decimal(text))
        frac_digits = len(text.partition(".")[2])
        self.lit_radius = Fraction(1, 2 * 10**frac_digits)
        if self.mid - self.lit_radius <= 0:
            raise ValidationError("alpha literal must be positive")
        self.precision_cap = precision_cap
        self.approx = float(self.mid)
        self.float_err = float(self.lit_radius) + 4 * math.ulp(self.approx)

    def __repr__(self) -> str:
        return f"LiteralAlpha({self.text})"

    @property
    def value(self) -> CertifiedReal:
        return self.enclosure(START_BITS)

    def enclosure(self, bits: int) -> CertifiedReal:
        """Dyadic enclosure of the literal interval at working precision ``bits``."""
        man = round(self.mid * (1 << bits))
        # rounding error <= 1/2 ulp; literal radius rounded up to whole ulps
        rad = math.ceil(self.lit_radius * (1 << bits)) + 1
        return CertifiedReal(man, rad, -bits)

    def eval_affine(self, u: int, v: int, bits: int = START_BITS) -> CertifiedReal:
        return self.enclosure(bits).scale_int(u) + CertifiedReal(v, 0, 0)

    def sign_affine(self, u: int, v: int) -> int:
        bits = START_BITS
        while True:
            s = self.eval_affine(u, v, bits).sign()
            if s is not None:
                return s
            # once the literal's own radius dominates, more bits cannot help
            if bits >= self.precision_cap or Fraction(1, 1 << bits) < self.lit_radius / 4:
                raise PrecisionExhausted(
                    f"sign of {u}*alpha + {v} undecided for literal {self.text}")
            bits = min(2 * bits, self.precision_cap)

    def render_affine(self, u: int, v: int, digits: int = REPORT_DIGITS) -> str:
        return self.eval_affine(u, v, max(START_BITS, int(digits / _LOG10_2) + 8)).to_decimal(digits)


Alpha = SurdAlpha | LiteralAlpha

GOLDEN = QuadSurd(1, 1, 2, 5)
GOLDEN2 = QuadSurd(3, 1, 2, 5)
_ALIASES = {"golden": GOLDEN, "golden2": GOLDEN2}


def parse_alpha(text: str, precision_cap: int = DEFAULT_PRECISION_CAP) -> Alpha:
    """Parse the textual grammar used on the command line.

    ``sqrt:p/q`` is sqrt(p/q), ``surd:a,b,c,d`` is (a + b sqrt d)/c,
    ``dec:<digits>`` is a decimal literal, and ``golden`` / ``golden2`` are
    the golden mean and its square.
    """
    text = text.strip()
    if text in _ALIASES:
        return SurdAlpha(_ALIASES[text], text)
    kind, sep, body = text.partition(":")
    if not sep:
        raise ValidationError(f"cannot parse alpha {text!r}")
    try:
        if kind == "sqrt":
            return SurdAlpha(QuadSurd.sqrt(Fraction(body)), text)
        if kind == "surd":
            a, b, c, d = (int(t) for t in body.split(","))
            return SurdAlpha(QuadSurd(a, b, c, d), text)
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"cannot parse alpha {text!r}: {exc}") from exc
    if kind == "dec":
        return LiteralAlpha(body, precision_cap)
    raise ValidationError(f"unknown alpha kind {kind!r}")


def as_alpha(x) -> Alpha:
    """Accept an alpha object, a surd, a rational, or a grammar string."""
    if isinstance(x, (SurdAlpha, LiteralAlpha)):
        return x
    if isinstance(x, str):
        return parse_alpha(x)
    if isinstance(x, QuadSurd):
        return SurdAlpha(x)
    if isinstance(x, (int, Fraction)):
        return SurdAlpha(QuadSurd._coerce(x))
    raise TypeError(f"cannot interpret {x!r} as alpha")
