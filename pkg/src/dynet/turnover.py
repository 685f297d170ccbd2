"""Network models with node turnover.

Two families live here.  The birth-death Erdos-Renyi model keeps a
Poisson(n)-sized population: nodes arrive at rate n, live Exp(1), and
while alive their pairwise edges follow the telegraph dynamics, starting
off at pair formation and vanishing with either endpoint.  The
preferential-attachment model keeps exactly n nodes in discrete time:
each step removes one node under a lifespan policy and adds one that
wires m preferential links.  The removal policy shapes the stationary
degree law through the node-age survival function S: a node of age t has
degree about m e^{t/(2n)}, so Pr[K = k] = (2/k) S(2n log(k/m)) on
k >= m.  Constant hazard gives the 2m^2/k^3 cubic tail, FIFO removal
gives 2/k truncated at m sqrt(e), and a piecewise hazard or an age cap
tunes the tail exponent to a chosen gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from . import kernels
from .core_model import EdgeParams, GraphSnapshot, RngLike, as_generator

__all__ = [
    "LifespanPolicy", "ExponentialLifespan", "FifoLifespan", "HazardGamma",
    "HazardCalibration", "calibrate_hazard", "DegreeHistogram",
    "TurnoverTrajectory", "simulate_turnover_er", "simulate_pa_turnover",
    "effective_edge_probability", "effective_edge_probability_min_age",
    "predicted_degree_density", "density_from_survival",
]


# ---------------------------------------------------------------------------
# Lifespan policies
# ---------------------------------------------------------------------------

class LifespanPolicy:
    """Node-removal policy for the preferential-attachment model."""
    __slots__ = ()


@dataclass(frozen=True)
class ExponentialLifespan(LifespanPolicy):
    """Uniformly random victim each step: geometric lifespan, mean n steps."""


@dataclass(frozen=True)
class FifoLifespan(LifespanPolicy):
    """Deterministically remove the oldest node: every lifespan is n steps."""


@dataclass(frozen=True)
class HazardCalibration:
    """Piecewise-constant removal hazard, or an age cap, tuned for mean n.

    ``mode`` is "piecewise" (hazard h0 before the breakpoint t0, h1 after)
    or "truncation" (constant hazard h1 with a hard maximum age).  Ages
    and rates are in simulation steps; h1 = (gamma-1)/(2n) fixes the
    degree-tail exponent at gamma, and the remaining freedom is spent
    making the mean lifespan exactly n so removals balance arrivals.
    """

    h0: float
    t0: float
    h1: float
    n: int
    mode: str
    max_age: float
    note: str

    def hazard(self, t):
        t = np.asarray(t, dtype=float)
        if self.mode == "truncation":
            h = np.where(t < self.max_age, self.h1, np.inf)
        else:
            h = np.where(t < self.t0, self.h0, self.h1)
        return float(h) if h.ndim == 0 else h

    def survival(self, t):
        """Pr[lifespan > t]."""
        t = np.asarray(t, dtype=float)
        if self.mode == "truncation":
            s = np.where(t < self.max_age, np.exp(-self.h1 * t), 0.0)
        else:
            s = np.exp(-self.h0 * np.minimum(t, self.t0)
                       - self.h1 * np.maximum(t - self.t0, 0.0))
        return float(s) if s.ndim == 0 else s

    def mean_lifespan(self) -> float:
        if self.mode == "truncation":
            return (1.0 - math.exp(-self.h1 * self.max_age)) / self.h1
        head = -math.expm1(-self.h0 * self.t0) / self.h0 if self.h0 > 0 else self.t0
        return head + math.exp(-self.h0 * self.t0) / self.h1

    def mean_lifespan_numeric(self) -> float:
        """Quadrature of the survival function, for auditing the solver."""
        if self.mode == "truncation":
            val, _ = quad(self.survival, 0.0, self.max_age, limit=200)
            return val
        upper = self.t0 + 60.0 / self.h1
        val, _ = quad(self.survival, 0.0, upper, points=[self.t0], limit=200)
        return val

    def realized_growth_rate(self) -> float:
        """Per-step degree growth rate g the removal loop settles into.

        Removing one node per step in proportion to its hazard couples
        age to attachment weight: the stationary total weight V solves
        V = m * integral of S(a) e^{g a} da together with g = m/V, which
        collapses to the single fixed point g * integral S e^{g a} = 1.
        Age-independent removal gives g = 1/(2n) (the value the plain
        density prediction assumes); age-biased removal shifts it, and
        with it every realized degree law.  Closed forms per mode.
        """
        def weighted(g):
            # g * integral_0^inf S(a) e^{g a} da, minus 1
            if self.mode == "truncation":
                d = g - self.h1
                if abs(d) < 1e-300:
                    return g * self.max_age - 1.0
                return g * math.expm1(d * self.max_age) / d - 1.0
            if g >= self.h1:
                return math.inf
            d = g - self.h0
            if abs(d) < 1e-300:
                head = self.t0
            else:
                head = math.expm1(d * self.t0) / d
            tail = math.exp(d * self.t0) / (self.h1 - g)
            return g * (head + tail) - 1.0

        hi = self.h1 * (1.0 - 1e-12) if self.mode == "piecewise" else 10.0 / self.n
        while weighted(hi) < 0.0:
            hi *= 2.0
        # xtol must be tiny too: the root is O(1/n) and the default
        # absolute tolerance 2e-12 would dominate the relative one
        return float(brentq(weighted, 1e-12 / self.n, hi,
                            rtol=8.9e-16, xtol=1e-24))

    def realized_tail_exponent(self) -> float:
        """Degree-density tail exponent the simulation actually produces.

        h1 / realized_growth_rate() + 1 for a piecewise hazard.  In
        truncation mode the degree law has a hard cap instead of a
        power tail, so the exponent is infinite.
        """
        if self.mode == "truncation":
            return math.inf
        return self.h1 / self.realized_growth_rate() + 1.0


@dataclass(frozen=True)
class HazardGamma(LifespanPolicy):
    """Age-dependent removal targeting a degree-tail exponent gamma."""

    gamma: float
    calibration: HazardCalibration


def calibrate_hazard(gamma: float, n: int) -> HazardGamma:
    """Build the removal policy whose degree tail decays like k^-gamma.

    The tail hazard is pinned at h1 = (gamma-1)/(2n).  For gamma > 3 that
    alone removes nodes too fast (mean lifespan 2n/(gamma-1) < n), so the
    young-age hazard is lowered to h0 = 1/(2n) and the breakpoint t0 is
    solved numerically for mean lifespan n.  For gamma < 3 the tail
    hazard is too slow and no breakpoint with h0 <= h1 can help, so the
    policy switches to truncation mode: constant hazard h1 plus a hard
    age cap 2n log(2/(3-gamma))/(gamma-1), which balances the mean
    exactly.  gamma = 3 returns the constant-hazard identity.
    """
    if not gamma > 1:
        raise ValueError("gamma must be > 1")
    if n < 2:
        raise ValueError("n must be >= 2")
    h1 = (gamma - 1.0) / (2.0 * n)
    if abs(gamma - 3.0) < 1e-12:
        cal = HazardCalibration(
            h0=1.0 / n, t0=0.0, h1=1.0 / n, n=n, mode="piecewise",
            max_age=math.inf,
            note="gamma = 3: constant hazard 1/n, no breakpoint needed")
        return HazardGamma(gamma=3.0, calibration=cal)
    if gamma > 3.0:
        h0 = 0.5 / n

        def mean_life(t0):
            return (-math.expm1(-h0 * t0) / h0
                    + math.exp(-h0 * t0) / h1)

        hi = float(n)
        while mean_life(hi) < n:
            hi *= 2.0
        t0 = brentq(lambda t: mean_life(t) - n, 0.0, hi, rtol=8.9e-16)
        cal = HazardCalibration(
            h0=h0, t0=float(t0), h1=h1, n=n, mode="piecewise",
            max_age=math.inf,
            note="young-age hazard lowered to 1/(2n) until the breakpoint "
                 "(the tail hazard alone would over-remove)")
    else:
        # mean with the pinned h0 exceeds n at every breakpoint, so no
        # piecewise solution exists; an age cap closes the balance instead
        max_age = 2.0 * n * math.log(2.0 / (3.0 - gamma)) / (gamma - 1.0)
        cal = HazardCalibration(
            h0=h1, t0=0.0, h1=h1, n=n, mode="truncation", max_age=max_age,
            note="gamma < 3: tail hazard under-removes and no young-age "
                 "boost within the piecewise family balances the mean; "
                 "lifespans are capped at the age where the survival mass "
                 "(3-gamma)/2 would remain")
    rel = abs(cal.mean_lifespan_numeric() - n) / n
    if rel > 1e-6:
        raise RuntimeError(
            f"hazard calibration failed its mean-lifespan audit: rel err {rel:.2e}")
    return HazardGamma(gamma=float(gamma), calibration=cal)


# ---------------------------------------------------------------------------
# Predicted degree laws
# ---------------------------------------------------------------------------

def density_from_survival(k, m: int, n: int, survival) -> np.ndarray:
    """Generic degree density (2/k) S(2n log(k/m)) for k >= m, else 0.

    ``survival`` maps a node age (in steps) to Pr[lifespan > age].  The
    density follows from ages: a node of age t has degree ~ m e^{t/(2n)},
    and the stationary age density at t is S(t)/n.
    """
    k_arr = np.asarray(k, dtype=float)
    out = np.zeros_like(k_arr)
    ok = k_arr >= m
    kk = k_arr[ok]
    out[ok] = (2.0 / kk) * np.asarray(survival(2.0 * n * np.log(kk / m)))
    return float(out) if out.ndim == 0 else out


def predicted_degree_density(k, m: int, n: int, policy: LifespanPolicy):
    """Stationary degree density Pr[K = k] predicted for a removal policy.

    Exponential removal gives 2 m^2 / k^3 on k >= m; FIFO gives 2/k on
    [m, m sqrt(e)); a calibrated hazard policy gives the generic
    survival composition with a k^-gamma tail.  k < m returns 0.
    """
    if isinstance(policy, ExponentialLifespan):
        k_arr = np.asarray(k, dtype=float)
        out = np.where(k_arr >= m, 2.0 * m * m / np.maximum(k_arr, 1.0) ** 3, 0.0)
        return float(out) if out.ndim == 0 else out
    if isinstance(policy, FifoLifespan):
        k_arr = np.asarray(k, dtype=float)
        out = np.where((k_arr >= m) & (k_arr < m * math.sqrt(math.e)),
                       2.0 / np.maximum(k_arr, 1.0), 0.0)
        return float(out) if out.ndim == 0 else out
    if isinstance(policy, HazardGamma):
        if policy.calibration.n != n:
            raise ValueError(
                f"policy calibrated for n = {policy.calibration.n}, got n = {n}")
        return density_from_survival(k, m, n, policy.calibration.survival)
    raise TypeError(f"unknown policy {policy!r}")


# ---------------------------------------------------------------------------
# Degree histogram
# ---------------------------------------------------------------------------

@dataclass
class DegreeHistogram:
    """Degree counts of one network snapshot (or a snapshot average).

    ``counts`` maps degree to node count; counts are floats when the
    histogram averages several snapshots.  ``flags`` records unusual
    events during the run ("reseeded" after the graph lost all its
    attachment weight, "record-capacity" or "hazard-scan" for internal
    fallbacks).
    """

    counts: dict
    total: float
    m: int
    flags: tuple = ()

    @classmethod
    def from_degrees(cls, degrees, m: int, flags=()):
        ks, cs = np.unique(np.asarray(degrees, dtype=np.int64), return_counts=True)
        counts = {int(a): int(b) for a, b in zip(ks, cs)}
        return cls(counts=counts, total=float(sum(counts.values())), m=m,
                   flags=tuple(flags))

    def as_arrays(self):
        ks = np.array(sorted(self.counts), dtype=np.int64)
        cs = np.array([self.counts[int(a)] for a in ks], dtype=float)
        return ks, cs

    def mean_degree(self) -> float:
        ks, cs = self.as_arrays()
        return float((ks * cs).sum() / self.total)

    def ccdf(self, k: int) -> float:
        """Empirical Pr[K >= k]."""
        ks, cs = self.as_arrays()
        return float(cs[ks >= k].sum() / self.total)

    def fraction_in(self, lo: int, hi: int) -> float:
        """Fraction of nodes with lo <= degree <= hi."""
        ks, cs = self.as_arrays()
        return float(cs[(ks >= lo) & (ks <= hi)].sum() / self.total)

    def to_csv(self, path, *, n: int | None = None,
               policy: LifespanPolicy | None = None) -> None:
        """Write degree,count,predicted_density rows (density blank if no policy)."""
        ks, cs = self.as_arrays()
        if policy is not None and n is not None:
            dens = predicted_degree_density(ks, self.m, n, policy)
        else:
            dens = None
        with open(path, "w") as fh:
            fh.write("degree,count,predicted_density\n")
            for idx, (a, b) in enumerate(zip(ks, cs)):
                d = "" if dens is None else repr(float(dens[idx]))
                c = int(b) if float(b).is_integer() else float(b)
                fh.write(f"{int(a)},{c},{d}\n")


# ---------------------------------------------------------------------------
# Preferential attachment with turnover
# ---------------------------------------------------------------------------

_PA_FLAG_NAMES = (
    (kernels.PA_RESEEDED, "reseeded"),
    (kernels.PA_CAPACITY, "record-capacity"),
    (kernels.PA_HAZARD_SCAN, "hazard-scan"),
)


def simulate_pa_turnover(n: int, m: int, policy: LifespanPolicy, steps: int,
                         rng: RngLike = None, *, accounting: str = "attachment",
                         avg_snapshots: int = 0) -> DegreeHistogram:
    """Discrete preferential attachment with one removal per addition.

    Each step evicts a node under ``policy`` and adds a node with m links
    to distinct targets drawn proportionally to attachment weight.  The
    ``accounting`` mode fixes what that weight (and the reported degree)
    means: "attachment" keeps every unit of weight a node earned while
    alive even if the partner has since died, which is the regime with
    clean power-law predictions; "live_edges" counts only edges whose
    both endpoints are currently alive.  ``avg_snapshots`` > 0 averages
    that many histograms over the last tenth of the run instead of
    reporting the single final snapshot.

    steps should comfortably exceed n (10n or more) so the initial
    population has fully turned over.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if n <= m + 1:
        raise ValueError("n must exceed m + 1")
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if accounting not in ("attachment", "live_edges"):
        raise ValueError("accounting must be 'attachment' or 'live_edges'")
    pol_code, h0, t0_steps, h1, max_age_steps = _policy_kernel_args(policy, n)
    gen = as_generator(rng)
    seed = int(gen.integers(1, 2**31 - 1))
    rec_cap = max(4096, 4 * m * n)
    degrees, hist, snaps, status = kernels.pa_turnover_run(
        n, m, steps, pol_code, h0, t0_steps, h1, max_age_steps,
        accounting == "live_edges", int(avg_snapshots), seed, rec_cap)
    flags = tuple(name for bit, name in _PA_FLAG_NAMES if status & bit)
    if avg_snapshots > 0 and snaps > 0:
        ks = np.flatnonzero(hist)
        counts = {int(a): float(hist[a]) / snaps for a in ks}
        return DegreeHistogram(counts=counts, total=float(hist.sum()) / snaps,
                               m=m, flags=flags)
    return DegreeHistogram.from_degrees(degrees, m, flags=flags)


def _policy_kernel_args(policy: LifespanPolicy, n: int):
    if isinstance(policy, ExponentialLifespan):
        return kernels.P_EXPONENTIAL, 0.0, 0, 0.0, 0
    if isinstance(policy, FifoLifespan):
        return kernels.P_FIFO, 0.0, 0, 0.0, 0
    if isinstance(policy, HazardGamma):
        cal = policy.calibration
        if cal.n != n:
            raise ValueError(
                f"policy calibrated for n = {cal.n}, got n = {n}")
        if cal.mode == "truncation":
            return (kernels.P_TRUNC, cal.h1, 0, cal.h1,
                    int(round(cal.max_age)))
        return (kernels.P_HAZARD, cal.h0, int(round(cal.t0)), cal.h1, 0)
    raise TypeError(f"unknown policy {policy!r}")


# ---------------------------------------------------------------------------
# Birth-death Erdos-Renyi
# ---------------------------------------------------------------------------

def effective_edge_probability(p: float, params: EdgeParams) -> float:
    """Steady-state edge frequency under turnover, unit-exponential pair age.

    Evaluates p (1 - 1/(lam + mu + 1)): the on-probability of a telegraph
    edge started off and run for an Exp(1)-distributed age, averaged over
    that age.  See ``effective_edge_probability_min_age`` for the variant
    where the pair age is the minimum of the two endpoints' ages.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    r = params.lam + params.mu
    if math.isinf(r):
        return p
    return p * (1.0 - 1.0 / (r + 1.0))


def effective_edge_probability_min_age(p: float, params: EdgeParams) -> float:
    """Steady-state edge frequency with pair age = min of two Exp(1) ages.

    Two alive nodes have independent unit-exponential ages, so the pair
    has interacted for T = min(age_a, age_b) ~ Exp(2), giving edge
    probability p (1 - E e^{-(lam+mu) T}) = p (1 - 2/(lam + mu + 2)).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    r = params.lam + params.mu
    if math.isinf(r):
        return p
    return p * (1.0 - 2.0 / (r + 2.0))


@dataclass
class TurnoverTrajectory:
    """Sampled path of the birth-death network.

    ``samples`` holds (time, alive count, on-edge count) at the sample
    grid; ``final`` is the graph among nodes alive at the end of the run
    (relabeled 0..N-1 in birth-record order) and ``final_ages`` their
    ages at that moment.
    """

    samples: list
    final: GraphSnapshot
    final_ages: np.ndarray

    def times(self) -> np.ndarray:
        return np.array([s[0] for s in self.samples])

    def population(self) -> np.ndarray:
        return np.array([s[1] for s in self.samples], dtype=np.int64)

    def edge_counts(self) -> np.ndarray:
        return np.array([s[2] for s in self.samples], dtype=np.int64)

    def edge_frequencies(self) -> np.ndarray:
        """Per-sample fraction of alive pairs whose edge is on (N >= 2 only)."""
        ns = self.population().astype(float)
        es = self.edge_counts().astype(float)
        ok = ns >= 2
        return es[ok] / (ns[ok] * (ns[ok] - 1.0) / 2.0)

    def mean_edge_frequency(self) -> float:
        f = self.edge_frequencies()
        if f.size == 0:
            raise ValueError("no sample had two alive nodes")
        return float(f.mean())


def simulate_turnover_er(n: int, params: EdgeParams, horizon: float,
                         rng: RngLike = None, *, sample_every: float | None = None,
                         audit: bool = False) -> TurnoverTrajectory:
    """Birth-death population with telegraph edges among alive nodes.

    Nodes arrive at rate n and live Exp(1); the run starts in the
    stationary regime (Poisson(n) population, Exp(1) ages).  A pair's
    edge process starts off when the younger endpoint is born and is
    destroyed with either endpoint, so a pair of age T is on with
    probability p(1 - e^{-(lam+mu)T}).  Edge states are realized exactly
    at the sample grid (the telegraph chain is Markov, so sampling at
    the grid gives the exact joint law there); between grid points only
    births and deaths are processed.

    ``sample_every`` defaults to horizon/512.  ``audit`` re-checks the
    both-endpoints-alive invariant for every tracked pair at every
    sample (slow; for tests).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if horizon <= 0:
        raise ValueError("horizon must be > 0")
    gen = as_generator(rng)
    if sample_every is None:
        sample_every = horizon / 512.0
    if sample_every <= 0:
        raise ValueError("sample_every must be > 0")
    grid = np.arange(0.0, horizon, sample_every)
    grid = np.append(grid, horizon)

    # population: stationary start plus Poisson-rate arrivals
    n0 = int(gen.poisson(n))
    birth = np.concatenate([-gen.exponential(1.0, n0),
                            np.sort(gen.uniform(0.0, horizon,
                                                int(gen.poisson(n * horizon))))])
    death = np.empty_like(birth)
    death[:n0] = gen.exponential(1.0, n0)
    death[n0:] = birth[n0:] + gen.exponential(1.0, birth.size - n0)

    if params.lam == 0.0 or params.instant_removal:
        # no edge can be on at a fixed sample time; population only
        return _turnover_no_edges(n0, birth, death, grid, horizon)
    return _turnover_with_edges(n0, birth, death, grid, horizon, params,
                                gen, audit)


def _alive_at(birth, death, t):
    return (birth <= t) & (death > t)


def _turnover_no_edges(n0, birth, death, grid, horizon):
    bs = np.sort(birth)
    ds = np.sort(death)
    ns = (np.searchsorted(bs, grid, side="right")
          - np.searchsorted(ds, grid, side="right"))
    samples = [(float(t), int(k), 0) for t, k in zip(grid, ns)]
    alive = np.flatnonzero(_alive_at(birth, death, horizon))
    final = GraphSnapshot.empty(alive.size)
    return TurnoverTrajectory(samples=samples, final=final,
                              final_ages=horizon - birth[alive])


def _turnover_with_edges(n0, birth, death, grid, horizon, params, gen, audit):
    p = params.stationary_p
    r = params.total_rate
    total = birth.size

    cap = 4096
    pu = np.zeros(cap, dtype=np.int64)
    pv = np.zeros(cap, dtype=np.int64)
    state = np.zeros(cap, dtype=bool)
    last_t = np.zeros(cap, dtype=float)
    active = np.zeros(cap, dtype=bool)
    nxt = 0

    def grow(need):
        nonlocal cap, pu, pv, state, last_t, active
        newcap = cap
        while newcap < need:
            newcap *= 2

        def bigger(a):
            b = np.zeros(newcap, dtype=a.dtype)
            b[:cap] = a
            return b

        pu, pv, state, last_t, active = (
            bigger(pu), bigger(pv), bigger(state), bigger(last_t), bigger(active))
        cap = newcap

    alive = {}          # node id -> True, insertion ordered
    node_slots = {}     # node id -> list of pair slots (may contain stale)

    def add_pairs(w, others, starts):
        nonlocal nxt
        k = others.size
        if k == 0:
            alive[w] = True
            node_slots[w] = []
            return
        if nxt + k > cap:
            grow(nxt + k)
        sl = np.arange(nxt, nxt + k)
        pu[sl] = others
        pv[sl] = w
        state[sl] = False
        last_t[sl] = starts
        active[sl] = True
        nxt += k
        slist = list(range(sl[0], sl[0] + k))
        node_slots[w] = slist
        for u, s in zip(others.tolist(), slist):
            node_slots[u].append(s)
        alive[w] = True

    # initial population pairs date back to the younger endpoint's birth,
    # so the first grid evolution lands them exactly in the stationary law
    for w in range(n0):
        alive[w] = True
        node_slots[w] = []
    if n0 >= 2:
        iu, iv = np.triu_indices(n0, 1)
        if nxt + iu.size > cap:
            grow(nxt + iu.size)
        sl = np.arange(iu.size)
        pu[sl] = iu
        pv[sl] = iv
        state[sl] = False
        last_t[sl] = np.maximum(birth[iu], birth[iv])
        active[sl] = True
        nxt = iu.size
        for a, b, s in zip(iu.tolist(), iv.tolist(), sl.tolist()):
            node_slots[a].append(s)
            node_slots[b].append(s)

    # merged event sweep: births (0), deaths (1), samples (2)
    ev_t = np.concatenate([birth[n0:], death, grid])
    ev_kind = np.concatenate([
        np.zeros(total - n0, dtype=np.int64),
        np.ones(total, dtype=np.int64),
        np.full(grid.size, 2, dtype=np.int64)])
    ev_node = np.concatenate([
        np.arange(n0, total), np.arange(total),
        np.zeros(grid.size, dtype=np.int64)])
    inside = ev_t <= horizon
    ev_t, ev_kind, ev_node = ev_t[inside], ev_kind[inside], ev_node[inside]
    order = np.lexsort((ev_node, ev_kind, ev_t))

    samples = []
    for pos in order:
        t = float(ev_t[pos])
        kind = int(ev_kind[pos])
        w = int(ev_node[pos])
        if kind == 0:          # birth
            others = np.fromiter(alive.keys(), dtype=np.int64,
                                 count=len(alive))
            add_pairs(w, others, t)
        elif kind == 1:        # death: incident edges vanish with the node
            slots = node_slots.pop(w, None)
            if slots is None:
                continue       # died beyond horizon bookkeeping
            if slots:
                active[np.array(slots, dtype=np.int64)] = False
            alive.pop(w, None)
        else:                  # sample: evolve every tracked pair to t
            idx = np.flatnonzero(active[:nxt])
            if idx.size:
                dt = t - last_t[idx]
                p_on = p + (state[idx].astype(float) - p) * np.exp(-r * dt)
                state[idx] = gen.random(idx.size) < p_on
                last_t[idx] = t
                on = int(state[idx].sum())
            else:
                on = 0
            if audit:
                for s in idx.tolist():
                    assert int(pu[s]) in alive and int(pv[s]) in alive, \
                        "dangling pair slot"
            samples.append((t, len(alive), on))
            # compact dead slots once they dominate the table.  Active
            # slots keep their relative order, so the per-sample random
            # draws land on the same pairs and replay is unchanged.
            if nxt > 50_000 and nxt > 4 * idx.size:
                k = idx.size
                pu[:k] = pu[idx]
                pv[:k] = pv[idx]
                state[:k] = state[idx]
                last_t[:k] = last_t[idx]
                active[:k] = True
                active[k:nxt] = False
                nxt = k
                node_slots = {w: [] for w in alive}
                for s, (a, b) in enumerate(zip(pu[:k].tolist(),
                                               pv[:k].tolist())):
                    node_slots[a].append(s)
                    node_slots[b].append(s)

    # final snapshot from the horizon sample state
    ids = np.array(sorted(alive.keys()), dtype=np.int64)
    relabel = {int(a): i for i, a in enumerate(ids)}
    idx = np.flatnonzero(active[:nxt] & state[:nxt])
    edges = {(min(relabel[int(pu[s])], relabel[int(pv[s])]),
              max(relabel[int(pu[s])], relabel[int(pv[s])]))
             for s in idx.tolist()}
    final = GraphSnapshot.from_pairs(ids.size, edges)
    return TurnoverTrajectory(samples=samples, final=final,
                              final_ages=horizon - birth[ids])
