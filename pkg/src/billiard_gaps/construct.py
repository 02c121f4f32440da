"""Gap certificates built from evenly divisible rational approximants.

Given ``|q alpha - p|`` small with divisors ``d | q`` and ``e | p``, the
lattice points

    m = q/d + d,  m' = q/d - d,  n = p/e - e,  n' = p/e + e

satisfy ``m^2 - m'^2 = 4q`` and ``n'^2 - n^2 = 4p``, so the levels
``alpha m^2 + n^2`` and ``alpha m'^2 + n'^2`` differ by exactly
``4 |q alpha - p|``. Every pipeline here ends in that construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .bigint import divides, floordiv, gcd, int_str, isqrt, lcm, square
from .chebyshev import PellSolution, PrimeSelection, lucas_uv, pell_fundamental, pell_sequence, prime_select
from .diophantine import (
    DEFAULT_FACTOR_SECONDS,
    Approximant,
    DivisorWitness,
    best_divisor,
    desquare,
    dirichlet_approx,
)
from .errors import DegenerateDivisor, DivisibilityViolation, InvalidSpec, ValidationError
from .exact import REPORT_DIGITS, Alpha, CertifiedReal, QuadSurd, SurdAlpha, as_alpha

PROVENANCES = ("approximant", "dirichlet", "sqrtD_pipeline", "general_quadratic", "strong_exact")


def _log_ratio(a: int, b: int) -> float:
    """``log a / log b`` for possibly huge integers."""
    return math.log(a) / math.log(b) if b > 1 else 0.0


@dataclass(frozen=True, eq=False)
class GapCertificate:
    """Two lattice points whose levels differ by ``4 |q alpha - p|``.

    ``p, q`` are the integers actually used (after any rescaling by ``t``),
    ``d | q`` and ``e | p`` the divisors. ``meta`` holds pipeline specific
    diagnostics such as sequence indices and lcm exponents.
    """

    alpha: Alpha
    p: int
    q: int
    d: int
    e: int
    provenance: str
    t: int = 1
    meta: dict = field(default_factory=dict)
    q_over_d: int = field(init=False, repr=False)
    p_over_e: int = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "q_over_d", floordiv(self.q, self.d))
        object.__setattr__(self, "p_over_e", floordiv(self.p, self.e))

    @property
    def m(self) -> int:
        return self.q_over_d + self.d

    @property
    def m_prime(self) -> int:
        return self.q_over_d - self.d

    @property
    def n(self) -> int:
        return self.p_over_e - self.e

    @property
    def n_prime(self) -> int:
        return self.p_over_e + self.e

    @property
    def witness_q(self) -> DivisorWitness:
        return DivisorWitness(self.q, self.d)

    @property
    def witness_p(self) -> DivisorWitness:
        return DivisorWitness(self.p, self.e)

    def _orientation(self) -> int:
        """Sign of ``lambda - lambda'`` = sign of ``q alpha - p``."""
        return self.alpha.sign_affine(self.q, -self.p)

    @property
    def gap_affine(self) -> tuple[int, int]:
        """``(u, v)`` with ``gap = u alpha + v``."""
        s = self._orientation()
        return 4 * s * self.q, -4 * s * self.p

    @property
    def gap(self) -> QuadSurd | CertifiedReal:
        u, v = self.gap_affine
        return self.alpha.affine(u, v) if self.alpha.exact else self.alpha.eval_affine(u, v)

    @property
    def levels_affine(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """``((m^2, n^2), (m'^2, n'^2))``: lambda and lambda' as affine pairs."""
        return (square(self.m), square(self.n)), (square(self.m_prime), square(self.n_prime))

    @property
    def level_bound_affine(self) -> tuple[int, int]:
        lam, lam_p = self.levels_affine
        return lam if self._orientation() > 0 else lam_p

    @property
    def level_bound(self) -> QuadSurd | CertifiedReal:
        u, v = self.level_bound_affine
        return self.alpha.affine(u, v) if self.alpha.exact else self.alpha.eval_affine(u, v)

    def gap_at_most(self, bound) -> bool:
        """Exact ``gap <= bound`` for a rational bound."""
        bound = Fraction(bound)
        u, v = self.gap_affine
        return self.alpha.sign_affine(bound.denominator * u,
                                      bound.denominator * v - bound.numerator) <= 0

    def levels_at_most(self, bound) -> bool:
        """Exact ``max(lambda, lambda') <= bound`` for a rational bound."""
        bound = Fraction(bound)
        u, v = self.level_bound_affine
        return self.alpha.sign_affine(bound.denominator * u,
                                      bound.denominator * v - bound.numerator) <= 0

    def revalidate(self) -> bool:
        """Recheck every identity of the construction with exact arithmetic."""
        m, mp, n, np_ = self.m, self.m_prime, self.n, self.n_prime
        if not (divides(self.d, self.q) and divides(self.e, self.p)):
            return False
        if not (m > mp >= 1 and np_ > n >= 1):
            return False
        (m2, n2), (mp2, np2) = self.levels_affine
        if m2 - mp2 != 4 * self.q or np2 - n2 != 4 * self.p:
            return False
        s = self._orientation()
        if s == 0:
            return False
        if self.alpha.exact:
            a = self.alpha.value
            lam, lam_p = a * m2 + n2, a * mp2 + np2
            return abs(lam - lam_p) == self.gap and self.gap > 0
        # inexact alpha: the difference is the same affine form, decided by sign
        return self.alpha.sign_affine(*self.gap_affine) > 0

    def balance_exponents(self) -> tuple[float, float]:
        """``log min(d, q/d) / log q`` and the same for ``p``."""
        return (_log_ratio(min(self.d, self.q_over_d), self.q),
                _log_ratio(min(self.e, self.p_over_e), self.p))

    def to_dict(self, digits: int = REPORT_DIGITS) -> dict:
        gu, gv = self.gap_affine
        lu, lv = self.level_bound_affine
        bq, bp = self.balance_exponents()
        out = {
            "provenance": self.provenance,
            "alpha": self.alpha.label,
            "m": int_str(self.m), "m_prime": int_str(self.m_prime),
            "n": int_str(self.n), "n_prime": int_str(self.n_prime),
            "p": int_str(self.p), "q": int_str(self.q), "t": self.t,
            "d": int_str(self.d), "e": int_str(self.e),
            "gap": self.alpha.render_affine(gu, gv, digits),
            "level_bound": self.alpha.render_affine(lu, lv, digits),
            "balance_q": self.witness_q.balance_str,
            "balance_p": self.witness_p.balance_str,
            "exponent_q": f"{bq:.10f}", "exponent_p": f"{bp:.10f}",
        }
        out.update({k: (int_str(v) if isinstance(v, int) and not isinstance(v, bool) else v)
                    for k, v in self.meta.items()})
        out["revalidated"] = self.revalidate()
        return out


def _certify(alpha: Alpha, p: int, q: int, d: int, e: int, provenance: str,
             t: int = 1, **meta) -> GapCertificate:
    if d * d == q or e * e == p:
        raise DegenerateDivisor(f"square split: d^2={d * d} vs q={q}, e^2={e * e} vs p={p}")
    cert = GapCertificate(alpha, p, q, d, e, provenance, t, meta)
    if cert.m_prime < 1 or cert.n < 1:
        raise DegenerateDivisor("divisor exceeds the square root")
    return cert


def _small_side(n: int, k: int) -> int:
    """Whichever of ``k`` and ``n/k`` is at most sqrt(n)."""
    return k if square(k) <= n else floordiv(n, k)


# --------------------------------------------------------------------------
# From a single approximant


def construct_from_approximant(alpha, p: int, q: int, *, divisors: tuple[int, int] | None = None,
                               threshold=Fraction(1, 3),
                               seconds: float = DEFAULT_FACTOR_SECONDS) -> GapCertificate:
    """Certificate from one approximant ``p/q``.

    Squares are removed by rescaling with ``t`` in {1, 2, 3}; the divisors are
    the best balanced ones (by factorization) unless ``divisors=(d, e)`` is
    given. ``evenly_divisible`` in the metadata is a finite-size flag: both
    divisors reach balance ``threshold``.
    """
    alpha = as_alpha(alpha)
    if p < 1 or q < 1:
        raise ValidationError("p and q must be positive")
    tp, tq, t = desquare(p, q)
    if divisors is None:
        wq, wp = best_divisor(tq, seconds), best_divisor(tp, seconds)
        d, e = wq.d, wp.d
    else:
        d, e = divisors
        if not (divides(d, tq) and divides(e, tp)):
            raise ValidationError(f"({d}, {e}) do not divide ({tq}, {tp})")
        d, e = _small_side(tq, d), _small_side(tp, e)
    flag = DivisorWitness(tq, d).meets(threshold) and DivisorWitness(tp, e).meets(threshold)
    return _certify(alpha, tp, tq, d, e, "approximant", t, evenly_divisible=flag)


def general_upper_bound(alpha, N: int) -> GapCertificate:
    """A gap at most ``8 / ceil(sqrt N)`` among levels of size O(N).

    With ``Q = ceil(sqrt N)`` and the Dirichlet approximant ``(a, q)``, the
    points ``(2q+1, 2a-1)`` and ``(2q-1, 2a+1)`` differ by ``8 |q alpha - a|``.
    """
    alpha = as_alpha(alpha)
    if N < 4:
        raise ValidationError("N must be >= 4")
    Q = isqrt(N - 1) + 1
    appr = dirichlet_approx(alpha, Q)
    return _certify(alpha, 2 * appr.p, 2 * appr.q, 1, 1, "dirichlet", 1,
                    Q=Q, N=N, a=appr.p, q_approx=appr.q)


# --------------------------------------------------------------------------
# The sqrt(D) pipeline


def construct_sqrtD(D: int, primes: PrimeSelection | Iterable[int], P_list: Iterable[int],
                    prefactor=Fraction(1)) -> list[GapCertificate]:
    """Certificates for ``alpha = prefactor * sqrt(4D)`` from Pell solutions.

    For each ``P`` the index is ``n = l_1 ... l_J P``; ``p_n = 2 x_n`` and
    ``q_n = y_n``. The lcm of ``q_{n/l}`` over the chosen primes divides
    ``q_n`` (and likewise for ``p``), which gives the balanced divisors.
    """
    plist = tuple(primes.primes if isinstance(primes, PrimeSelection) else primes)
    if not plist or any(l < 3 or l % 2 == 0 for l in plist) or len(set(plist)) != len(plist):
        raise ValidationError("primes must be distinct odd primes")
    r = Fraction(prefactor)
    if r <= 0:
        raise ValidationError("prefactor must be positive")
    fund = pell_fundamental(D)
    alpha = SurdAlpha(QuadSurd.sqrt(4 * D) * r, f"{r}*sqrt:{4 * D}" if r != 1 else f"sqrt:{4 * D}")
    L = math.prod(plist)
    out = []
    for P in sorted(set(P_list)):
        if P < 1 or P % 2 == 0 or gcd(P, L) != 1:
            raise ValidationError(f"P={P} must be odd and coprime to {L}")
        out.append(_sqrtD_one(D, fund, plist, L * P, alpha, r))
    return sorted(out, key=lambda c: c.q)


def _sqrtD_one(D: int, fund: PellSolution, plist: tuple[int, ...], n: int,
               alpha: SurdAlpha, r: Fraction) -> GapCertificate:
    top = pell_sequence(D, n, fund)
    p_n, q_n = 2 * top.x, top.y
    parts = [pell_sequence(D, n // l, fund) for l in plist]
    for l, s in zip(plist, parts):
        if not (divides(s.y, q_n) and divides(2 * s.x, p_n)):
            raise DivisibilityViolation(f"q_{n // l} or p_{n // l} fails to divide index {n}")
    Qd = lcm(s.y for s in parts)
    Pd = lcm(2 * s.x for s in parts)
    if not (divides(Qd, q_n) and divides(Pd, p_n)):  # pragma: no cover - implied by the checks above
        raise DivisibilityViolation("lcm does not divide")
    p, q, t = desquare(r.numerator * p_n, r.denominator * q_n)
    d, e = _small_side(q, Qd), _small_side(p, Pd)
    return _certify(alpha, p, q, d, e, "sqrtD_pipeline", t,
                    index=n, q_n=q_n, lcm_exponent_q=f"{_log_ratio(Qd, q_n):.10f}",
                    lcm_exponent_p=f"{_log_ratio(Pd, p_n):.10f}",
                    bits_q=q_n.bit_length())


# --------------------------------------------------------------------------
# The general quadratic family  r * phi^a * sqrt(Delta)^b


@dataclass(frozen=True)
class GeneralQuadraticSpec:
    """``alpha = r * ((x + sqrt(Delta))/2)^a * sqrt(Delta)^b`` with ``Delta = x^2 + 4 sign``."""

    x: int
    a: int
    b: int
    sign: int
    r: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        if self.b not in (0, 1):
            raise InvalidSpec("b must be 0 or 1")
        if self.sign not in (1, -1):
            raise InvalidSpec("sign must be +1 or -1")
        if self.x == 0:
            raise InvalidSpec("x must be nonzero")
        if self.a == 0 and self.b == 0:
            raise InvalidSpec("(a, b) = (0, 0) gives a rational alpha")
        if self.sign == -1 and abs(self.x) <= 2:
            raise InvalidSpec("sign -1 needs |x| >= 3")
        if self.r == 0:
            raise InvalidSpec("r must be nonzero")
        if self.normalized().r <= 0:
            raise InvalidSpec("alpha must be positive")

    @property
    def delta(self) -> int:
        return self.x * self.x + 4 * self.sign

    def normalized(self) -> GeneralQuadraticSpec:
        """Equivalent spec with ``x > 0`` (phi(-x) = sign / phi(x))."""
        if self.x > 0:
            return self
        r = self.r * (self.sign ** (self.a % 2))
        return _raw_spec(-self.x, -self.a, self.b, self.sign, r)

    def value(self) -> QuadSurd:
        s = self.normalized()
        phi = QuadSurd(s.x, 1, 2, s.delta)
        v = QuadSurd(s.r.numerator, 0, s.r.denominator) * phi**s.a
        if s.b:
            v = v * QuadSurd.sqrt(s.delta)
        return v

    def alpha(self) -> SurdAlpha:
        return SurdAlpha(self.value(), f"quad:{self.x},{self.a},{self.b},{self.sign},{self.r}")


def _raw_spec(x, a, b, sign, r) -> GeneralQuadraticSpec:
    spec = object.__new__(GeneralQuadraticSpec)
    for k, v in (("x", x), ("a", a), ("b", b), ("sign", sign), ("r", Fraction(r))):
        object.__setattr__(spec, k, v)
    return spec


NAMED_SPECS = {
    "golden": (1, 1, 0, 1, 1),
    "golden2": (1, 2, 0, 1, 1),
}


def named_spec(name: str) -> GeneralQuadraticSpec:
    if name not in NAMED_SPECS:
        raise InvalidSpec(f"unknown named spec {name!r}")
    return GeneralQuadraticSpec(*NAMED_SPECS[name])


# Integer sequences of the family, with P = x and Q = -sign:
#   u_k = U_k(x/2) analogue = LucasU_{k+1},  v_k = 2T_k(x/2) analogue = LucasV_k.
# For sign = +1 these are i^(-k) U_k(ix/2) and i^(-k) 2T_k(ix/2).

def seq_u(k: int, x: int, sign: int) -> int:
    return lucas_uv(k + 1, x, -sign)[0]


def seq_v(k: int, x: int, sign: int) -> int:
    return lucas_uv(k, x, -sign)[1]


def _num_den(s: GeneralQuadraticSpec, n: int) -> tuple[int, int]:
    if s.b == 0:
        return seq_u(n + s.a, s.x, s.sign), seq_u(n, s.x, s.sign)
    return seq_v(n + s.a, s.x, s.sign), seq_u(n - 1, s.x, s.sign)


def _first_index(s: GeneralQuadraticSpec) -> int:
    return max(1, -s.a + 1)


def approximant_at(spec: GeneralQuadraticSpec, n: int) -> Approximant:
    """The approximant with sequence index ``n``."""
    s = spec.normalized()
    if n < _first_index(s):
        raise ValidationError(f"index {n} too small for this spec")
    num, den = _num_den(s, n)
    return Approximant(s.r.numerator * num, s.r.denominator * den, spec.alpha())


def approximants_general_quadratic(spec: GeneralQuadraticSpec, count: int,
                                   start: int | None = None) -> list[Approximant]:
    s = spec.normalized()
    n0 = _first_index(s) if start is None else start
    return [approximant_at(spec, n) for n in range(n0, n0 + count)]


@dataclass(frozen=True)
class IndexSolution:
    """``L (2 mu L + 1) - L' (mu' L' + 1) = b_off`` with ``mu, mu' >= 0``."""

    L: int
    L_prime: int
    mu: int
    mu_prime: int
    b_off: int

    def __post_init__(self):
        if self.mu < 0 or self.mu_prime < 0:
            raise ValidationError("mu and mu' must be nonnegative")
        if self.L * self.m_idx - self.L_prime * self.m_prime_idx != self.b_off:
            raise ValidationError("index equation not satisfied")

    @property
    def m_idx(self) -> int:
        return 2 * self.mu * self.L + 1

    @property
    def m_prime_idx(self) -> int:
        return self.mu_prime * self.L_prime + 1


def solve_index_equation(L: int, L_prime: int, b_off: int) -> Iterator[IndexSolution]:
    """All solutions in increasing ``mu``.

    ``L'^2 mu' = 2 L^2 mu + L - L' - b_off`` fixes ``mu`` modulo ``L'^2``
    because ``2 L^2`` is invertible there.
    """
    if L < 1 or L_prime < 1 or L % 2 == 0 or L_prime % 2 == 0:
        raise ValidationError("L and L' must be positive and odd")
    if gcd(L, L_prime) != 1:
        raise ValidationError("L and L' must be coprime")
    mod = L_prime * L_prime
    mu = (b_off - L + L_prime) * pow(2 * L * L, -1, mod) % mod if mod > 1 else 0
    while True:
        rhs = 2 * L * L * mu + L - L_prime - b_off
        if rhs >= 0:
            yield IndexSolution(L, L_prime, mu, rhs // mod, b_off)
        mu += mod


def _lcm_divisor(term, K: int, primes: tuple[int, ...]) -> tuple[int, int]:
    """``(a_K, lcm_l a_{K/l})`` with every division checked."""
    top = term(K)
    parts = [term(K // l) for l in primes]
    for l, v in zip(primes, parts):
        if v == 0 or not divides(v, top):
            raise DivisibilityViolation(f"a_{K // l} does not divide a_{K}")
    return top, lcm(parts)


def construct_general(spec: GeneralQuadraticSpec, eps=Fraction(1, 4), count: int = 3,
                      primes_L: Iterable[int] | None = None,
                      primes_L_prime: Iterable[int] | None = None) -> list[GapCertificate]:
    """Certificates for the general family via the index equation.

    Numerator and denominator indices are ``L m`` and ``L' m'`` in the
    strong-divisibility indexing of the relevant sequence; ``L`` is a product of
    primes 1 mod 4 and ``L'`` of primes 3 mod 4, each with density in
    ``(1/2 - eps, 1/2)`` unless given explicitly.
    """
    s = spec.normalized()
    alpha = spec.alpha()
    pl = tuple(primes_L) if primes_L is not None else prime_select(eps, "1mod4").primes
    plp = tuple(primes_L_prime) if primes_L_prime is not None else prime_select(eps, "3mod4").primes
    L, Lp = math.prod(pl), math.prod(plp)
    x, sg = s.x, s.sign
    lu = lambda k: lucas_uv(k, x, -sg)[0]  # noqa: E731  a_k = u_{k-1}
    lv = lambda k: lucas_uv(k, x, -sg)[1]  # noqa: E731  a_k = v_k (odd k)
    out: list[GapCertificate] = []
    for sol in solve_index_equation(L, Lp, s.a):
        K, Kp = L * sol.m_idx, Lp * sol.m_prime_idx
        if s.b == 0:
            n = Kp - 1  # den u_n = a_{n+1};  num u_{n+a} = a_{n+a+1}
            num, num_div = _lcm_divisor(lu, K, pl)
        else:
            n = Kp  # den u_{n-1} = a_n;  num v_{n+a}
            num, num_div = _lcm_divisor(lv, K, pl)
        if n < _first_index(s):
            continue
        den, den_div = _lcm_divisor(lu, Kp, plp)
        p, q, t = desquare(s.r.numerator * num, s.r.denominator * den)
        cert = _certify(alpha, p, q, _small_side(q, den_div), _small_side(p, num_div),
                        "general_quadratic", t, index=n, mu=sol.mu, mu_prime=sol.mu_prime,
                        L=L, L_prime=Lp, b_off=sol.b_off,
                        lcm_exponent_q=f"{_log_ratio(den_div, den):.10f}",
                        lcm_exponent_p=f"{_log_ratio(num_div, num):.10f}")
        out.append(cert)
        if len(out) == count:
            break
    return sorted(out, key=lambda c: c.q)


def construct_strong_exact(spec: GeneralQuadraticSpec, count: int = 10) -> list[GapCertificate]:
    """Certificates with square-root sized divisors (even ``a``, ``b = 0``).

    For odd ``n`` the divisors are ``u_{(n-1)/2} | u_n`` and
    ``u_{(n+a-1)/2} | u_{n+a}``.
    """
    s = spec.normalized()
    if s.b != 0 or s.a % 2:
        raise InvalidSpec("strong construction needs b = 0 and even a")
    alpha = spec.alpha()
    n = max(1, 1 - s.a)
    n += 1 - n % 2
    out = []
    while len(out) < count:
        num, den = _num_den(s, n)
        num_div = seq_u((n + s.a - 1) // 2, s.x, s.sign)
        den_div = seq_u((n - 1) // 2, s.x, s.sign)
        if not (divides(num_div, num) and divides(den_div, den)):
            raise DivisibilityViolation(f"half-index divisibility fails at n={n}")
        p, q, t = desquare(s.r.numerator * num, s.r.denominator * den)
        out.append(_certify(alpha, p, q, _small_side(q, den_div), _small_side(p, num_div),
                            "strong_exact", t, index=n))
        n += 2
    return out
