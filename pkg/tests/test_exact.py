from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, strategies as st

from billiard_gaps.errors import PrecisionExhausted, ValidationError
from billiard_gaps.exact import (GOLDEN, GOLDEN2, LiteralAlpha, QuadSurd, SurdAlpha, as_alpha,
                                 parse_alpha, squarefree_split, surd_eval, surd_sign)

mpmath.mp.dps = 80

nonsquare = st.integers(2, 500).filter(lambda d: int(d**0.5) ** 2 != d)
small = st.integers(-10**6, 10**6)


def mp_value(x: QuadSurd):
    return (x.a + x.b * mpmath.sqrt(x.d)) / x.c


def test_canonical_form():
    assert QuadSurd(2, 2, 4, 8) == QuadSurd(1, 2, 2, 2)
    assert QuadSurd(0, 1, 1, 4) == QuadSurd(2)
    assert QuadSurd(1, 1, -2, 5).c == 2
    assert QuadSurd.sqrt(Fraction(1, 2)) == QuadSurd(0, 1, 2, 2)
    assert squarefree_split(72) == (6, 2)


def test_golden_identities():
    assert GOLDEN * GOLDEN == GOLDEN2
    assert GOLDEN2 - GOLDEN == 1
    assert GOLDEN.inverse() == GOLDEN - 1
    assert GOLDEN.floor() == 1 and GOLDEN2.floor() == 2


def test_decimal_rendering():
    assert QuadSurd.sqrt(2).to_decimal(30) == "1.41421356237309504880168872421"
    assert (QuadSurd.sqrt(2) * 3 - 3).to_decimal(12) == "1.24264068712"


@given(small, small, nonsquare)
def test_surd_sign_matches_high_precision(u, v, d):
    ref = mpmath.sign(u + v * mpmath.sqrt(d))
    assert surd_sign(u, v, d) == int(ref)


@given(st.integers(1, 10**40), nonsquare)
def test_surd_sign_near_cancellation(v, d):
    # u = round(v sqrt d) makes u - v sqrt d tiny but nonzero
    u = int(mpmath.nint(v * mpmath.sqrt(d)))
    ref = mpmath.sign(u - v * mpmath.sqrt(d))
    assert ref != 0
    assert surd_sign(u, -v, d) == int(ref)


surds = st.builds(QuadSurd, st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 20),
                  st.sampled_from([2, 3, 5, 7]))


@given(surds, surds)
def test_field_operations_against_mpmath(x, y):
    assume(x.d == y.d or x.is_rational or y.is_rational)
    for got, ref in ((x + y, mp_value(x) + mp_value(y)), (x - y, mp_value(x) - mp_value(y)),
                     (x * y, mp_value(x) * mp_value(y))):
        assert abs(mp_value(got) - ref) < mpmath.mpf(10) ** -60
    if y != 0:
        assert abs(mp_value(x / y) - mp_value(x) / mp_value(y)) < mpmath.mpf(10) ** -50


@given(surds, st.integers(8, 400))
def test_certified_enclosure_contains_value(x, bits):
    iv = surd_eval(x, bits)
    with mpmath.workdps(bits + 60):
        lo = mpmath.mpf(iv.man - iv.rad) * mpmath.mpf(2) ** iv.exp
        hi = mpmath.mpf(iv.man + iv.rad) * mpmath.mpf(2) ** iv.exp
        assert lo <= mp_value(x) <= hi


@given(surds, surds)
def test_ordering_consistent_with_sign(x, y):
    assume(x.d == y.d or x.is_rational or y.is_rational)
    assert (x < y) == ((x - y).sign() < 0)
    assert (x == y) == ((x - y).sign() == 0)


def test_parse_grammar():
    assert parse_alpha("sqrt:2").value == QuadSurd.sqrt(2)
    assert parse_alpha("surd:3,1,2,5").value == GOLDEN2
    assert parse_alpha("golden2").value == GOLDEN2
    lit = parse_alpha("dec:1.4142")
    assert isinstance(lit, LiteralAlpha) and lit.lit_radius == Fraction(1, 20000)
    assert as_alpha(QuadSurd.sqrt(3)).exact


@pytest.mark.parametrize("text", ["", "sqrt:", "sqrt:-2", "surd:1,2", "dec:abc", "cube:2", "sqrt:0"])
def test_parse_rejects(text):
    with pytest.raises(ValidationError):
        parse_alpha(text)


def test_nonpositive_alpha_rejected():
    with pytest.raises(ValidationError):
        SurdAlpha(QuadSurd(1, -1, 1, 2))


def test_literal_sign_is_interval_sound():
    lit = LiteralAlpha("1.41421356237")
    assert lit.sign_affine(1, -1) == 1
    # 1.41421356237 +- 5e-12 straddles nothing near 99/70
    assert lit.sign_affine(70, -99) == -1
    with pytest.raises(PrecisionExhausted):
        lit.sign_affine(10**11, -141421356237)


@given(st.integers(1, 10**6), st.integers(-10**7, 10**7))
def test_literal_sign_agrees_with_midpoint_when_decided(u, v):
    lit = LiteralAlpha("1.7320508075688772935274463415")
    mid = lit.mid * u + v
    try:
        s = lit.sign_affine(u, v)
    except PrecisionExhausted:
        assert abs(mid) <= lit.lit_radius * u
        return
    assert s == (mid > 0) - (mid < 0)
