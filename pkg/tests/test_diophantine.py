import math
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, strategies as st

from billiard_gaps.diophantine import (DivisorWitness, balance_of, best_divisor, continued_fraction,
                                       convergents, desquare, dirichlet_approx, factorize, is_square)
from billiard_gaps.errors import PrecisionExhausted, RationalAlpha, ValidationError
from billiard_gaps.exact import parse_alpha


@pytest.mark.parametrize("text,terms", [
    ("sqrt:2", [1, 2, 2, 2, 2, 2]),
    ("sqrt:7", [2, 1, 1, 1, 4, 1]),
    ("golden", [1, 1, 1, 1, 1, 1]),
    ("golden2", [2, 1, 1, 1, 1, 1]),
])
def test_known_expansions(text, terms):
    assert continued_fraction(parse_alpha(text), 6).terms == terms


def test_rational_expansion_is_finite():
    assert continued_fraction(Fraction(415, 93), 10).terms == [4, 2, 6, 7]


@given(st.integers(2, 999).filter(lambda n: math.isqrt(n) ** 2 != n))
def test_periodic_expansion_matches_integer_recurrence(D):
    # classical m, d, a recurrence for sqrt(D)
    a0 = math.isqrt(D)
    m, d, a, ref = 0, 1, a0, [a0]
    while len(ref) < 25:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        ref.append(a)
    assert continued_fraction(parse_alpha(f"sqrt:{D}"), 25).terms == ref


def test_literal_runs_out_of_digits():
    lit = parse_alpha("dec:1.41421356237309504880")
    assert continued_fraction(lit, 10).terms == [1] + [2] * 9
    with pytest.raises(PrecisionExhausted):
        continued_fraction(lit, 200)


def test_convergents_of_sqrt2():
    got = [(c.p, c.q) for c in convergents(parse_alpha("sqrt:2"), 6)]
    assert got == [(1, 1), (3, 2), (7, 5), (17, 12), (41, 29), (99, 70)]


@given(st.integers(2, 300).filter(lambda n: math.isqrt(n) ** 2 != n), st.integers(1, 10**6))
def test_dirichlet_bound(D, Q):
    a = dirichlet_approx(parse_alpha(f"sqrt:{D}"), Q)
    assert 1 <= a.q <= Q
    with mpmath.workdps(60):
        err = abs(a.q * mpmath.sqrt(D) - a.p)
        assert 0 < err <= mpmath.mpf(1) / Q


def test_dirichlet_small_alpha():
    with pytest.raises(ValidationError):
        dirichlet_approx(parse_alpha("sqrt:1/5"), 1)


def test_dirichlet_rational():
    with pytest.raises(RationalAlpha):
        dirichlet_approx(Fraction(3, 2), 10)


@given(st.integers(1, 10**12))
def test_factorize_reconstructs(n):
    fac = factorize(n)
    assert math.prod(p**e for p, e in fac.items()) == n
    assert all(sympy.isprime(p) for p in fac)


def test_factorize_beyond_trial_division():
    n = 1000003 * 1000033 * 999983
    assert factorize(n) == {999983: 1, 1000003: 1, 1000033: 1}


@given(st.integers(1, 20000))
def test_best_divisor_matches_brute(n):
    brute = max(d for d in range(1, math.isqrt(n) + 1) if n % d == 0)
    assert best_divisor(n).d == brute


def test_balance_and_meets():
    w = DivisorWitness(360, 18)
    assert w.complement == 20
    assert balance_of(360, 18) == pytest.approx(math.log(18) / (0.5 * math.log(360)))
    assert w.meets(Fraction(9, 10))
    assert not DivisorWitness(1024, 2).meets(Fraction(1, 2))
    with pytest.raises(ValidationError):
        balance_of(10, 3)


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_desquare(p, q):
    tp, tq, t = desquare(p, q)
    assert t in (1, 2, 3) and (tp, tq) == (t * p, t * q)
    assert not is_square(tp) and not is_square(tq)
    if not is_square(p) and not is_square(q):
        assert t == 1
