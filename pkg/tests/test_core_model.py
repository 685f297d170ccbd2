"""Tests for the telegraph-edge parameter algebra and graph snapshots."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynet.core_model import (
    DegenerateParametersError,
    EdgeParams,
    GraphSnapshot,
    derive_rates,
    derive_stationary,
    edge_on_probability,
    pair_count,
    pair_index,
    pairs_from_indices,
    sample_edge_trajectory,
    sample_stationary_graph,
)


def test_stationary_identities():
    par = EdgeParams(1.3, 0.7)
    assert par.total_rate == 2.0
    assert par.stationary_p == pytest.approx(0.65)
    assert par.cycle_rate == pytest.approx(1.3 * 0.7 / 2.0)
    # alpha = p (1 - p) (lam + mu) ties the two parameterizations together
    assert par.cycle_rate == pytest.approx(
        par.stationary_p * (1 - par.stationary_p) * par.total_rate)
    assert par.expected_degree(11) == pytest.approx(10 * 0.65)


@pytest.mark.parametrize("lam,mu", [(1.0, 1.0), (0.3, 2.0), (5.0, 0.01)])
def test_rate_round_trip(lam, mu):
    par = EdgeParams(lam, mu)
    back = derive_rates(*derive_stationary(par))
    assert back.lam == pytest.approx(lam, rel=1e-12)
    assert back.mu == pytest.approx(mu, rel=1e-12)


def test_from_stationary_rejects_boundary_p():
    with pytest.raises(DegenerateParametersError):
        EdgeParams.from_stationary(0.0, 1.0)
    with pytest.raises(DegenerateParametersError):
        EdgeParams.from_stationary(1.0, 1.0)
    with pytest.raises(ValueError):
        EdgeParams.from_stationary(0.5, -1.0)
    with pytest.raises(ValueError):
        EdgeParams.from_stationary(0.5, math.inf)


def test_params_validation():
    with pytest.raises(ValueError):
        EdgeParams(-1.0, 1.0)
    with pytest.raises(ValueError):
        EdgeParams(1.0, math.nan)
    with pytest.raises(ValueError):
        EdgeParams(1.0, math.inf)
    with pytest.raises(ValueError):
        EdgeParams(1.0, 0.5, instant_removal=True)


def test_instant_removal_params():
    par = EdgeParams(2.0, 0.0, instant_removal=True)
    assert par.stationary_p == 0.0
    assert par.cycle_rate == 2.0


def test_frozen_rates_have_no_stationary_law():
    par = EdgeParams(0.0, 0.0)
    with pytest.raises(DegenerateParametersError):
        par.stationary_p
    with pytest.raises(DegenerateParametersError):
        par.cycle_rate


def test_edge_on_probability_basics():
    par = EdgeParams(1.3, 0.7)
    p = par.stationary_p
    assert edge_on_probability(True, 0.0, par) == 1.0
    assert edge_on_probability(False, 0.0, par) == 0.0
    assert edge_on_probability(True, 200.0, par) == pytest.approx(p)
    t = 0.37
    assert edge_on_probability(False, t, par) == pytest.approx(
        p - p * math.exp(-2.0 * t), rel=1e-12)
    with pytest.raises(ValueError):
        edge_on_probability(True, -0.1, par)
    # frozen chain stays put; instant removal is gone for any t > 0
    assert edge_on_probability(True, 5.0, EdgeParams(0.0, 0.0)) == 1.0
    inst = EdgeParams(1.0, 0.0, instant_removal=True)
    assert edge_on_probability(True, 0.0, inst) == 1.0
    assert edge_on_probability(True, 1e-9, inst) == 0.0


@settings(max_examples=60, deadline=None)
@given(lam=st.floats(0.01, 5.0), mu=st.floats(0.01, 5.0),
       s=st.floats(0.0, 5.0), t=st.floats(0.0, 5.0),
       on0=st.booleans())
def test_edge_on_probability_semigroup(lam, mu, s, t, on0):
    # Chapman-Kolmogorov over the two-state chain
    par = EdgeParams(lam, mu)
    ps = edge_on_probability(on0, s, par)
    lhs = edge_on_probability(on0, s + t, par)
    rhs = (ps * edge_on_probability(True, t, par)
           + (1.0 - ps) * edge_on_probability(False, t, par))
    assert lhs == pytest.approx(rhs, abs=1e-12)
    assert 0.0 <= lhs <= 1.0


@pytest.mark.parametrize("n", [2, 3, 7, 50])
def test_pair_index_round_trip(n):
    idx = np.arange(pair_count(n))
    ij = pairs_from_indices(idx, n)
    assert (ij[:, 0] < ij[:, 1]).all()
    assert (pair_index(ij[:, 0], ij[:, 1], n) == idx).all()
    # lexicographic order of rows
    assert (np.diff(ij[:, 0]) >= 0).all()


def test_pair_index_scalar_matches_array():
    n = 9
    for i in range(n):
        for j in range(i + 1, n):
            flat = pair_index(i, j, n)
            back = pairs_from_indices(np.array([flat]), n)
            assert tuple(back[0]) == (i, j)


def test_snapshot_validation():
    with pytest.raises(ValueError):
        GraphSnapshot(3, np.array([[0, 1], [0, 1]]))
    with pytest.raises(ValueError):
        GraphSnapshot(3, np.array([[0, 3]]))
    with pytest.raises(ValueError):
        GraphSnapshot(3, np.array([[1, 0]]))
    with pytest.raises(ValueError):
        GraphSnapshot(-1, np.empty((0, 2)))


def test_snapshot_helpers():
    full = GraphSnapshot.complete(6)
    assert full.num_edges == pair_count(6)
    assert (full.degrees() == 5).all()
    assert GraphSnapshot.empty(6).num_edges == 0

    g = GraphSnapshot.from_pairs(5, [(3, 1), (0, 4)])
    assert g.edge_set() == {(1, 3), (0, 4)}
    assert g.has_edge(1, 3) and g.has_edge(3, 1)
    assert not g.has_edge(0, 1) and not g.has_edge(2, 2)
    assert g.degrees().sum() == 2 * g.num_edges

    ind = g.flat_indicator()
    back = pairs_from_indices(np.flatnonzero(ind), 5)
    assert {tuple(r) for r in back} == g.edge_set()


def test_sample_stationary_graph():
    assert sample_stationary_graph(20, 0.0, rng=0).num_edges == 0
    assert sample_stationary_graph(20, 1.0, rng=0).num_edges == pair_count(20)
    g = sample_stationary_graph(60, 0.35, rng=np.random.default_rng(7))
    mean = 0.35 * pair_count(60)
    sd = math.sqrt(pair_count(60) * 0.35 * 0.65)
    assert abs(g.num_edges - mean) <= 4 * sd
    with pytest.raises(ValueError):
        sample_stationary_graph(10, 1.2)


def test_edge_trajectory_freezes():
    assert sample_edge_trajectory(False, 10.0, EdgeParams(0.0, 1.0), rng=0).size == 0
    assert sample_edge_trajectory(True, 10.0, EdgeParams(1.0, 0.0), rng=0).size == 0


def test_edge_trajectory_shape_and_occupation():
    par = EdgeParams(1.3, 0.7)
    horizon = 2000.0
    tog = sample_edge_trajectory(False, horizon, par,
                                 rng=np.random.default_rng(13))
    assert tog.size > 0
    assert (np.diff(tog) > 0).all()
    assert tog[-1] <= horizon
    # odd-indexed intervals are the on periods when starting off
    cuts = np.concatenate([[0.0], tog, [horizon]])
    frac_on = np.diff(cuts)[1::2].sum() / horizon
    assert abs(frac_on - par.stationary_p) <= 0.02


def test_edge_trajectory_validation():
    with pytest.raises(ValueError):
        sample_edge_trajectory(False, -1.0, EdgeParams(1.0, 1.0))
    with pytest.raises(ValueError):
        sample_edge_trajectory(False, math.inf, EdgeParams(1.0, 1.0))
    with pytest.raises(ValueError):
        sample_edge_trajectory(False, 1.0,
                               EdgeParams(1.0, 0.0, instant_removal=True))
