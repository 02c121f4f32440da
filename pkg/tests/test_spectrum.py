import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, strategies as st

from billiard_gaps.errors import RationalAlpha, ValidationError
from billiard_gaps.exact import QuadSurd, parse_alpha
from billiard_gaps.spectrum import (count_below, enumerate_spectrum, kth_gaps, min_gap,
                                    propagate_gap, rank_of, scaled_gap_sweep, scaled_ratio,
                                    scaled_ratio_at_most, verify_in_spectrum, weyl_main_term)

from oracles import brute_count, brute_spectrum


def test_first_levels_sqrt2(sqrt2):
    pairs = [(e.m, e.n) for e in enumerate_spectrum(sqrt2, 7)]
    # 2.41, 5.41, 6.66, 9.66, 10.41, 13.73, 14.66
    assert pairs == [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1), (2, 3)]


def test_three_levels_gap(sqrt2):
    g = min_gap(sqrt2, 3)
    # levels sqrt2+1, sqrt2+4, 4 sqrt2+1: the smaller gap is 3 sqrt2 - 3
    assert g.gap == QuadSurd.sqrt(2) * 3 - 3
    assert g.index == 2


def test_rational_alpha_rejected():
    with pytest.raises(RationalAlpha):
        enumerate_spectrum(parse_alpha("sqrt:4"), 10)


def test_bad_counts(sqrt2):
    with pytest.raises(ValidationError):
        enumerate_spectrum(sqrt2, 0)
    with pytest.raises(ValidationError):
        min_gap(sqrt2, 2, k=2)


@pytest.mark.parametrize("text,mp", [("sqrt:2", mpmath.sqrt(2)), ("sqrt:7/3", mpmath.sqrt(mpmath.mpf(7) / 3)),
                                     ("golden", (1 + mpmath.sqrt(5)) / 2)])
def test_enumeration_matches_brute_force(text, mp):
    got = [(e.m, e.n) for e in enumerate_spectrum(parse_alpha(text), 1500)]
    assert got == brute_spectrum(mp, 1500)


@given(st.integers(2, 60), st.integers(1, 30))
def test_enumeration_property(p, q):
    assume(math.isqrt(p * q) ** 2 != p * q)
    alpha = parse_alpha(f"sqrt:{p}/{q}")
    mp = mpmath.sqrt(mpmath.mpf(p) / q)
    assert [(e.m, e.n) for e in enumerate_spectrum(alpha, 200)] == brute_spectrum(mp, 200)


@pytest.mark.parametrize("X", [10, 1000, 12345])
def test_count_below_matches_brute(sqrt2, X):
    assert count_below(sqrt2, 0, X) == brute_count(2**0.5, X)


def test_count_below_boundary(sqrt2):
    # the level 4 sqrt2 + 1 itself is counted unless strict
    assert count_below(sqrt2, 4, 1) == count_below(sqrt2, 4, 1, strict=True) + 1 == 3


def test_rank_of_agrees_with_position(sqrt2):
    levels = enumerate_spectrum(sqrt2, 300)
    for i in (0, 17, 299):
        assert rank_of(levels[i]) == i + 1


def test_weyl_ratio_moderate(sqrt2):
    X = 10**5
    assert abs(count_below(sqrt2, 0, X) / weyl_main_term(sqrt2, X) - 1) < 0.02


def test_kth_gaps_sorted(golden2):
    levels = enumerate_spectrum(golden2, 2000)
    idx = kth_gaps(levels, 5)
    gaps = [levels[i + 1].level - levels[i].level for i in idx]
    assert gaps == sorted(gaps)
    everything = sorted(levels[i + 1].level - levels[i].level for i in range(len(levels) - 1))
    assert gaps == everything[:5]


def test_sweep_known_values(sqrt2):
    rows = scaled_gap_sweep(sqrt2, [100, 1000, 10000])
    assert [r.scaled_decimal(10) for r in rows] == ["0.7142674936", "7.142674936", "2.102607186"]
    assert rows[0].gap == rows[1].gap
    assert scaled_ratio_at_most(rows, 10)
    assert not scaled_ratio_at_most(rows, Fraction(99, 10))
    assert scaled_ratio(rows) == pytest.approx(10)


def test_sweep_agrees_with_min_gap(golden2):
    rows = scaled_gap_sweep(golden2, [50, 400, 900])
    for r in rows:
        assert r.gap == min_gap(golden2, r.N).gap


def test_sweep_requires_increasing(sqrt2):
    with pytest.raises(ValidationError):
        scaled_gap_sweep(sqrt2, [100, 50])


def test_propagation_quadruples(sqrt2):
    g = min_gap(sqrt2, 2000)
    big = propagate_gap(g)
    assert big.gap == g.gap * 4
    info = verify_in_spectrum(big)
    assert info["rank_upper"] > info["rank_lower"]


def test_literal_alpha_spectrum_matches_surd():
    lit = parse_alpha("dec:1.41421356237309504880168872420969807856967187537694")
    exact = parse_alpha("sqrt:2")
    a = [(e.m, e.n) for e in enumerate_spectrum(lit, 3000)]
    b = [(e.m, e.n) for e in enumerate_spectrum(exact, 3000)]
    assert a == b
    assert min_gap(lit, 3000).gap_decimal(20) == min_gap(exact, 3000).gap_decimal(20)
