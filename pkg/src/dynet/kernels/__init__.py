"""Hot numeric kernels with a numba fast path and a pure-NumPy fallback.

Backend selection: set ``DYNET_BACKEND=numpy`` to force the fallback,
``DYNET_BACKEND=numba`` to require the JIT backend (raises if numba is
not importable).  Unset, or ``auto``, prefers numba when available.
The two backends sample identical distributions but do not share random
streams, so per-trial outputs differ bit-for-bit across backends while
all statistics agree.
"""

from __future__ import annotations

import os

from . import _numpy
from ._numpy import (  # noqa: F401  (re-exported constants)
    HISTCAP,
    P_EXPONENTIAL,
    P_HAZARD,
    P_FIFO,
    P_TRUNC,
    PA_RESEEDED,
    PA_CAPACITY,
    PA_HAZARD_SCAN,
)

_active = None
_active_name = ""


def backend_module(name: str):
    """Return the backend module for ``name`` ("numba" or "numpy")."""
    if name == "numpy":
        return _numpy
    if name == "numba":
        from . import _numba
        return _numba
    raise ValueError(f"unknown backend {name!r}; expected 'numba' or 'numpy'")


def set_backend(name: str) -> None:
    """Switch the active kernel backend at runtime (mainly for tests)."""
    global _active, _active_name
    _active = backend_module(name)
    _active_name = name


def active_backend() -> str:
    return _active_name


def _init_from_env() -> None:
    req = os.environ.get("DYNET_BACKEND", "auto").strip().lower() or "auto"
    if req in ("numba", "numpy"):
        set_backend(req)
        return
    if req != "auto":
        raise ValueError(
            f"DYNET_BACKEND={req!r} not recognized; use 'numba', 'numpy' or 'auto'")
    try:
        set_backend("numba")
    except ImportError:
        set_backend("numpy")


_init_from_env()


def thomas_solve(lower, diag, upper, rhs):
    return _active.thomas_solve(lower, diag, upper, rhs)


def connectivity_sweep(n, us, vs):
    return _active.connectivity_sweep(n, us, vs)


def si_finite_run(n, lam, mu, beta, p0, seeds, target, horizon, seed,
                  init_states, use_init):
    return _active.si_finite_run(n, lam, mu, beta, p0, seeds, target,
                                 horizon, seed, init_states, use_init)


def pa_turnover_run(n, m, steps, policy, h0, t0_steps, h1, max_age_steps,
                    honest, avg_snapshots, seed, rec_cap):
    return _active.pa_turnover_run(n, m, steps, policy, h0, t0_steps, h1,
                                   max_age_steps, honest, avg_snapshots,
                                   seed, rec_cap)
