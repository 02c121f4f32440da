import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from billiard_gaps.errors import ValidationError
from billiard_gaps.poisson import (PoissonExperiment, billiard_vs_poisson_report,
                                   devroye_frequencies, exact_median, exact_survival,
                                   poisson_kth_gaps, poisson_min_gap, trial_generator)


def test_experiment_validation():
    for bad in (dict(N=1, trials=1, seed=0), dict(N=5, trials=0, seed=0),
                dict(N=5, trials=1, seed=-1), dict(N=5, trials=1, seed=0, k=5)):
        with pytest.raises(ValidationError):
            PoissonExperiment(**bad)


def test_two_points():
    exp = PoissonExperiment(2, 3, seed=11)
    vals = poisson_kth_gaps(exp)[:, 0]
    for i in range(3):
        u = trial_generator(11, i).random(2)
        assert vals[i] == pytest.approx(4 * abs(u[0] - u[1]))


def test_reproducible():
    a = poisson_min_gap(PoissonExperiment(500, 50, seed=7)).values
    b = poisson_min_gap(PoissonExperiment(500, 50, seed=7)).values
    c = poisson_min_gap(PoissonExperiment(500, 50, seed=8)).values
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_kth_gaps_are_ordered():
    g = poisson_kth_gaps(PoissonExperiment(300, 20, seed=3), kmax=4)
    assert np.all(np.diff(g, axis=1) >= 0)


@given(st.integers(2, 400), st.floats(0, 50))
def test_survival_k1_closed_form(N, t):
    s = t / N**2
    ref = max(0.0, 1 - (N - 1) * s) ** N
    assert float(exact_survival(N, 1, t)) == pytest.approx(ref, abs=1e-12)


def test_survival_small_value():
    assert float(exact_survival(2, 1, 1)) == pytest.approx(0.5625)


@pytest.mark.parametrize("N,k", [(5, 2), (8, 3)])
def test_survival_against_monte_carlo(N, k):
    rng = np.random.default_rng(2024)
    pts = np.sort(rng.random((200_000, N)), axis=1)
    kth = np.sort(np.diff(pts, axis=1), axis=1)[:, k - 1] * N * N
    for t in (0.5, 1.5, 3.0):
        assert float(exact_survival(N, k, t)) == pytest.approx(np.mean(kth > t), abs=0.005)


def test_survival_approaches_gamma_limit():
    for k in (1, 2):
        for t in (0.3, 1.0, 2.5):
            assert float(exact_survival(10_000, k, t)) == pytest.approx(stats.gamma(k).sf(t), abs=1e-3)


def test_exact_median():
    assert exact_median(10_000, 1) == pytest.approx(math.log(2), rel=1e-3)
    m = exact_median(50, 2)
    assert float(exact_survival(50, 2, m)) == pytest.approx(0.5, abs=1e-10)


def test_poisson_summary():
    res = poisson_min_gap(PoissonExperiment(1000, 400, seed=5))
    assert res.ks_exponential() < 0.1
    assert res.ecdf(res.values[-1]) == 1.0
    d = res.to_dict()
    assert set(d["quantiles"]) == {"0.1", "0.25", "0.5", "0.75", "0.9"}


def test_devroye_rows():
    rows = devroye_frequencies(4, 9, trials=30, seed=1)
    assert [r["N"] for r in rows] == [2**j for j in range(4, 10)]
    for name in ("dev1", "dev1a", "dev2", "dev3"):
        ever = [r[name + "_ever"] for r in rows]
        assert ever == sorted(ever)
        assert all(r[name] <= r[name + "_ever"] for r in rows)


def test_billiard_report_small():
    rep = billiard_vs_poisson_report("sqrt:2", [100, 1000], trials=50, seed=9)
    assert [r["N"] for r in rep["rows"]] == [100, 1000]
    assert rep["rows"][0]["billiard_scaled_min"].startswith("0.714267493")
    prop = rep["propagation"]
    assert prop["gap_is_4_delta"] and prop["delta2_le_4delta"]
    assert prop["N_prime"] > prop["rank_lower"] >= 1
