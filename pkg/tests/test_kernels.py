"""Backend dispatch and numba-vs-numpy parity for the hot kernels."""

import math

import numpy as np
import pytest

from dynet import kernels
from dynet.core_model import EdgeParams
from dynet.simulator import simulate_si
from dynet.turnover import ExponentialLifespan, simulate_pa_turnover


@pytest.fixture
def keep_backend():
    prev = kernels.active_backend()
    yield
    kernels.set_backend(prev)


def _tridiag(n, rng):
    lower = -rng.random(n)
    lower[0] = 0.0
    upper = -rng.random(n)
    upper[-1] = 0.0
    diag = 3.0 + rng.random(n)
    rhs = rng.random(n)
    return lower, diag, upper, rhs


def test_backend_switch_and_errors(keep_backend):
    kernels.set_backend("numpy")
    assert kernels.active_backend() == "numpy"
    kernels.set_backend("numba")
    assert kernels.active_backend() == "numba"
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")
    mod = kernels.backend_module("numba")
    for name in ("thomas_solve", "connectivity_sweep", "si_finite_run",
                 "pa_turnover_run"):
        assert hasattr(mod, name)


def test_thomas_matches_dense_solve(keep_backend):
    rng = np.random.default_rng(42)
    lower, diag, upper, rhs = _tridiag(300, rng)
    dense = (np.diag(diag) + np.diag(lower[1:], -1) + np.diag(upper[:-1], 1))
    ref = np.linalg.solve(dense, rhs)
    for backend in ("numpy", "numba"):
        kernels.set_backend(backend)
        got = kernels.thomas_solve(lower.copy(), diag.copy(),
                                   upper.copy(), rhs.copy())
        assert np.allclose(got, ref, rtol=1e-10, atol=1e-12)


def test_thomas_backend_parity(keep_backend):
    rng = np.random.default_rng(7)
    lower, diag, upper, rhs = _tridiag(200, rng)
    outs = {}
    for backend in ("numpy", "numba"):
        kernels.set_backend(backend)
        outs[backend] = kernels.thomas_solve(lower.copy(), diag.copy(),
                                             upper.copy(), rhs.copy())
    assert np.allclose(outs["numpy"], outs["numba"], rtol=1e-12, atol=0.0)


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_connectivity_sweep(backend, keep_backend):
    kernels.set_backend(backend)
    chain_u = np.array([0, 1, 2, 3], dtype=np.int64)
    chain_v = np.array([1, 2, 3, 4], dtype=np.int64)
    # a path on 5 nodes connects exactly at its 4th edge
    assert kernels.connectivity_sweep(5, chain_u, chain_v) == 4
    extra_u = np.array([0, 1, 0, 2, 3], dtype=np.int64)
    extra_v = np.array([1, 2, 4, 3, 4], dtype=np.int64)
    # edges after the connecting one must not move the answer
    assert kernels.connectivity_sweep(5, extra_u, extra_v) == 4
    assert kernels.connectivity_sweep(
        4, np.array([0, 1], dtype=np.int64),
        np.array([1, 2], dtype=np.int64)) == -1


def test_si_cross_backend_statistics(keep_backend):
    # different random streams, same distribution
    means = {}
    for backend in ("numpy", "numba"):
        kernels.set_backend(backend)
        gen = np.random.default_rng(100)
        taus = np.array([
            simulate_si(40, EdgeParams(1.0, 1.0), 1.0, rng=gen,
                        initial_p=0.0).hitting_time(40)
            for _ in range(300)])
        means[backend] = (taus.mean(), taus.std(ddof=1) / math.sqrt(300))
    z = ((means["numpy"][0] - means["numba"][0])
         / math.hypot(means["numpy"][1], means["numba"][1]))
    assert abs(z) <= 4.0


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_pa_runs_on_both_backends(backend, keep_backend):
    kernels.set_backend(backend)
    hist = simulate_pa_turnover(500, 2, ExponentialLifespan(), 10_000,
                                rng=np.random.default_rng(5))
    assert hist.total == 500
    assert min(hist.counts) >= 2
    assert abs(hist.mean_degree() - 4.0) <= 0.6


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_per_backend_determinism(backend, keep_backend):
    kernels.set_backend(backend)
    runs = []
    for _ in range(2):
        traj = simulate_si(30, EdgeParams(1.0, 1.0), 1.0,
                           rng=np.random.default_rng(3), initial_p=0.5)
        runs.append(traj.jumps)
    assert runs[0] == runs[1]
