"""Tests for the closed-form laws, bounds and asymptotics."""

import math

import numpy as np
import pytest
from scipy import stats as sps

from dynet.analytics import (
    FinitePmf,
    MixingQuery,
    binomial_crossing_point,
    binomial_pmf,
    first_transmission_profile,
    first_transmission_time_asymptotic,
    first_transmission_time_exact,
    full_infection_lower_bound,
    hitting_bound_finite,
    hitting_bound_instant,
    hitting_bound_instant_harmonic,
    mixing_time_asymptotic,
    mixing_time_numeric,
    tv,
    tv_binomial,
    worst_case_on_probability,
)
from dynet.core_model import EdgeParams


# --- pmf machinery ---------------------------------------------------------

def test_finite_pmf_validation():
    with pytest.raises(ValueError):
        FinitePmf([0, 1], [0.4, 0.4])
    with pytest.raises(ValueError):
        FinitePmf([0, 1], [1.2, -0.2])
    with pytest.raises(ValueError):
        FinitePmf([0, 0], [0.5, 0.5])
    with pytest.raises(ValueError):
        FinitePmf([0, 1, 2], [0.5, 0.5])


def test_pmf_factories_normalized():
    assert FinitePmf.bernoulli(0.3).mass.sum() == pytest.approx(1.0)
    assert FinitePmf.binomial(11, 0.4).mass.sum() == pytest.approx(1.0)
    po = FinitePmf.poisson(100.0)
    assert po.mass.sum() == pytest.approx(1.0)
    assert FinitePmf.poisson(0.0).as_dict() == {0: 1.0}


def test_binomial_pmf_matches_scipy():
    for k, p in ((1, 0.5), (10, 0.3), (200, 0.01), (50, 0.97)):
        ref = sps.binom.pmf(np.arange(k + 1), k, p)
        assert np.allclose(binomial_pmf(k, p), ref, rtol=1e-11, atol=1e-300)


def test_tv_examples():
    a = FinitePmf.bernoulli(0.2)
    assert tv(a, a) == 0.0
    assert tv(a, FinitePmf.bernoulli(0.9)) == pytest.approx(0.7)
    disjoint = FinitePmf([2, 3], [0.5, 0.5])
    assert tv(a, disjoint) == pytest.approx(1.0)
    assert tv(a, FinitePmf.bernoulli(0.9)) == tv(FinitePmf.bernoulli(0.9), a)


def test_tv_binomial_special_cases():
    assert tv_binomial(10, 0.4, 0.4) == 0.0
    assert tv_binomial(10, 0.0, 1.0) == 1.0
    assert tv_binomial(10, 0.0, 0.3) == pytest.approx(1.0 - 0.7 ** 10)
    assert tv_binomial(10, 0.25, 1.0) == pytest.approx(1.0 - 0.25 ** 10)
    with pytest.raises(ValueError):
        tv_binomial(0, 0.2, 0.3)
    with pytest.raises(ValueError):
        tv_binomial(5, -0.1, 0.3)


def test_tv_binomial_direct_vs_finite_pmf():
    for k, p, q in ((7, 0.2, 0.5), (40, 0.45, 0.55), (3, 0.05, 0.9)):
        ref = tv(FinitePmf.binomial(k, p), FinitePmf.binomial(k, q))
        assert tv_binomial(k, p, q) == pytest.approx(ref, abs=1e-12)


def test_tv_binomial_large_k_crossing_path():
    # just above the direct-summation limit the incomplete-beta route kicks
    # in; it must agree with the explicit half-L1 sum
    k = 100_001
    for p, q in ((0.3, 0.31), (0.2, 0.5)):
        direct = 0.5 * float(np.abs(binomial_pmf(k, p) - binomial_pmf(k, q)).sum())
        assert tv_binomial(k, p, q) == pytest.approx(direct, abs=1e-10)


def test_crossing_point_describes_pmf_dominance():
    for k in (5, 17, 40):
        for lo, hi in ((0.2, 0.5), (0.3, 0.8), (0.05, 0.6)):
            a = binomial_crossing_point(lo, hi)
            assert a == pytest.approx(binomial_crossing_point(hi, lo))
            dom = set(np.nonzero(binomial_pmf(k, lo) >= binomial_pmf(k, hi))[0])
            assert dom == set(range(0, math.floor(k * a) + 1))
    with pytest.raises(ValueError):
        binomial_crossing_point(0.3, 0.3)
    with pytest.raises(ValueError):
        binomial_crossing_point(0.0, 0.3)


# --- mixing times ----------------------------------------------------------

def test_worst_case_curve_is_started_on_law():
    par = EdgeParams(0.6, 1.4)
    for t in (0.0, 0.3, 2.0):
        assert worst_case_on_probability(par.stationary_p, par, t) == \
            pytest.approx(par.stationary_p
                          + (1 - par.stationary_p) * math.exp(-2.0 * t))


def test_mixing_numeric_single_edge_closed_form():
    # k = 1: TV(Bernoulli(p(t)), Bernoulli(p)) = (1-p) e^{-rt}, so the
    # quarter-level time is log(4(1-p))/r exactly
    par = EdgeParams(0.5, 1.5)
    p, rate = par.stationary_p, par.total_rate
    expected = math.log((1 - p) / 0.25) / rate
    got = mixing_time_numeric(MixingQuery(1, par))
    assert got == pytest.approx(expected, rel=1e-8)


def test_mixing_numeric_monotone_in_k():
    par = EdgeParams(0.5, 1.5)
    t1 = mixing_time_numeric(MixingQuery(1, par))
    t100 = mixing_time_numeric(MixingQuery(100, par))
    assert t100 > t1


def test_mixing_numeric_rejects_slow_worst_case():
    with pytest.raises(ValueError):
        mixing_time_numeric(MixingQuery(10, EdgeParams(2.0, 1.0)))


def test_mixing_query_validation():
    with pytest.raises(ValueError):
        MixingQuery(0, EdgeParams(1.0, 1.0))
    with pytest.raises(ValueError):
        MixingQuery(5, EdgeParams(1.0, 1.0), level=1.5)


def test_mixing_asymptotic_formulas():
    # constant p: log k / (2 (lam+mu)) with lam+mu = alpha/(p(1-p))
    p, alpha = 0.3, 1.0
    rate = alpha / (p * (1 - p))
    assert mixing_time_asymptotic(1000, p, alpha) == \
        pytest.approx(math.log(1000) / (2 * rate))
    assert mixing_time_asymptotic(1000, 0.0, 1.0, regime="sparse", c=2.0) == \
        pytest.approx(2.0 * math.log(1000) / 1000.0)
    with pytest.raises(ValueError):
        mixing_time_asymptotic(1, 0.3, 1.0)
    with pytest.raises(ValueError):
        mixing_time_asymptotic(100, 0.3, 1.0, regime="sparse")
    with pytest.raises(ValueError):
        mixing_time_asymptotic(100, 0.3, 1.0, regime="weird")


# --- hitting-time bounds ---------------------------------------------------

def test_hitting_bound_instant_exact_below_simplified():
    for n in (10, 100, 1000):
        for k in (2, n // 2, n):
            exact, simplified = hitting_bound_instant(n, k, 0.7)
            assert 0 < exact <= simplified


def test_hitting_bound_harmonic_identity():
    for n in (5, 17, 211):
        for k in (2, n // 2, n):
            exact, _ = hitting_bound_instant(n, k, 1.3)
            harm = hitting_bound_instant_harmonic(n, k, 1.3)
            assert abs(exact - harm) <= 1e-12 * max(1.0, exact)


def test_hitting_bound_instant_full_graph_form():
    n, lam = 500, 2.0
    _, simplified = hitting_bound_instant(n, n, lam)
    assert simplified == pytest.approx(2 * (1 + math.log(n - 1)) / (lam * n))
    with pytest.raises(ValueError):
        hitting_bound_instant(10, 1, 1.0)
    with pytest.raises(ValueError):
        hitting_bound_instant(10, 5, 0.0)


def test_hitting_bound_finite_full_graph_is_n_free():
    for n in (50, 500):
        riemann, integral = hitting_bound_finite(n, n, 1.0, 1.0)
        assert integral == pytest.approx(math.sqrt(math.pi ** 3 / 2.0))
        assert riemann < integral
    with pytest.raises(ValueError):
        hitting_bound_finite(10, 5, -1.0, 1.0)


def test_full_infection_lower_bound():
    assert full_infection_lower_bound(1000, 1.0, 1.0) == \
        pytest.approx(math.sqrt(2 * math.log(1000) / 1000.0))
    assert full_infection_lower_bound(1000, math.inf, 2.0) == \
        pytest.approx(math.log(1000) / 2000.0)
    with pytest.raises(ValueError):
        full_infection_lower_bound(1, 1.0, 1.0)
    with pytest.raises(ValueError):
        full_infection_lower_bound(100, 0.0, 1.0)


# --- first transmission ----------------------------------------------------

def test_first_transmission_single_neighbor_closed_form():
    # N = 1 solves by hand: t0 = (lam + mu + beta) / (lam beta)
    for lam, mu, beta in ((1.0, 1.0, 1.0), (0.4, 2.0, 1.5), (2.0, 0.0, 0.3)):
        t0 = first_transmission_time_exact(1, EdgeParams(lam, mu), beta)
        assert t0 == pytest.approx((lam + mu + beta) / (lam * beta), rel=1e-12)


def test_first_transmission_matches_dense_solve():
    N, lam, mu, beta = 300, 0.7, 1.9, 1.1
    t = first_transmission_profile(N, EdgeParams(lam, mu), beta)
    k = np.arange(N + 1, dtype=float)
    mat = (np.diag((N - k) * lam + k * mu + k * beta)
           + np.diag(-(N - k[:-1]) * lam, 1)
           + np.diag(-k[1:] * mu, -1))
    ref = np.linalg.solve(mat, np.ones(N + 1))
    assert np.allclose(t, ref, rtol=1e-9)


def test_first_transmission_profile_decreasing():
    t = first_transmission_profile(200, EdgeParams(1.0, 1.0), 1.0)
    assert (np.diff(t) < 0).all()


def test_first_transmission_asymptotic_mu_free():
    # the sqrt(pi/(2 beta lam N)) limit has no mu in it; the exact solve
    # agrees within half a percent at N = 1e5 across a mu sweep
    ref = first_transmission_time_asymptotic(100_000, 1.0, 1.0)
    for mu in (0.0, 1.0, 3.0):
        t0 = first_transmission_time_exact(100_000, EdgeParams(1.0, mu), 1.0)
        assert abs(t0 / ref - 1.0) <= 0.01


def test_first_transmission_validation():
    with pytest.raises(ValueError):
        first_transmission_profile(0, EdgeParams(1.0, 1.0), 1.0)
    with pytest.raises(ValueError):
        first_transmission_profile(5, EdgeParams(0.0, 1.0), 1.0)
    with pytest.raises(ValueError):
        first_transmission_profile(
            5, EdgeParams(1.0, 0.0, instant_removal=True), 1.0)
    with pytest.raises(ValueError):
        first_transmission_time_asymptotic(0, 1.0, 1.0)
