"""Event-driven simulation of the dynamic edge process and SI contagion.

The dynamic graph G(n, lam, mu) is n(n-1)/2 independent telegraph edges;
:func:`simulate_dynamic_graph` composes their toggle trajectories into one
time-ordered event stream.  SI contagion rides on top: a susceptible node
becomes permanently infected at rate beta per currently-on edge to an
infected neighbor.  Finite-beta runs use a lazy active-pair scheme (see
``kernels``): susceptible-susceptible edges are never simulated, each
infected-susceptible pair instead samples its exact transmission delay in
closed form.  The beta = inf limit infects whole components and reduces
to connectivity tracking.

Trial-level randomness is a numpy Generator (or a seed for one); runs are
deterministic given the seed and bit-identical on replay within a kernel
backend.
"""

from __future__ import annotations

import heapq
import json
import math
import os
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core_model import (
    DegenerateParametersError,
    EdgeParams,
    GraphSnapshot,
    RngLike,
    as_generator,
    pair_count,
    pair_index,
    pairs_from_indices,
    sample_edge_trajectory,
    sample_stationary_graph,
)

EDGE_ON = "edge_on"
EDGE_OFF = "edge_off"
INFECT = "infect"

DEFAULT_MAX_N = 5000


class ResourceCapError(RuntimeError):
    """Raised when a requested simulation exceeds the node-count cap."""


def max_nodes_cap() -> int:
    """Node-count resource cap; override with the DYNET_MAX_N env var."""
    raw = os.environ.get("DYNET_MAX_N", "")
    return int(raw) if raw.strip() else DEFAULT_MAX_N


def _check_cap(n: int) -> None:
    cap = max_nodes_cap()
    if n > cap:
        raise ResourceCapError(
            f"n = {n} exceeds the resource cap {cap} "
            f"({pair_count(n)} edge clocks); raise DYNET_MAX_N if intended")


# ---------------------------------------------------------------------------
# Trajectory types
# ---------------------------------------------------------------------------

@dataclass
class EventTrajectory:
    """Time-ordered edge events of one dynamic-graph run."""

    n: int
    initial: GraphSnapshot
    horizon: float
    events: list  # (t, kind, i, j); kind in {EDGE_ON, EDGE_OFF}

    def snapshot_at(self, t: float) -> GraphSnapshot:
        """Graph state at time t, replaying events up to and including t."""
        if t < 0 or t > self.horizon:
            raise ValueError("t outside [0, horizon]")
        on = self.initial.edge_set()
        for (et, kind, i, j) in self.events:
            if et > t:
                break
            if kind == EDGE_ON:
                on.add((i, j))
            else:
                on.discard((i, j))
        return GraphSnapshot.from_pairs(self.n, on)

    def validate(self) -> None:
        """Check event-stream consistency; raises on violation."""
        on = self.initial.edge_set()
        last = 0.0
        for (et, kind, i, j) in self.events:
            if et < last:
                raise ValueError("timestamps must be nondecreasing")
            last = et
            if not (0 <= i < j < self.n):
                raise ValueError(f"bad endpoints ({i}, {j})")
            if kind == EDGE_ON:
                if (i, j) in on:
                    raise ValueError(f"EdgeOn on present edge ({i}, {j})")
                on.add((i, j))
            elif kind == EDGE_OFF:
                if (i, j) not in on:
                    raise ValueError(f"EdgeOff on absent edge ({i}, {j})")
                on.remove((i, j))
            else:
                raise ValueError(f"unknown kind {kind!r}")

    def to_jsonl(self, path) -> None:
        with open(path, "w") as fh:
            for (t, kind, i, j) in self.events:
                fh.write(json.dumps(
                    {"t": t, "kind": kind, "i": int(i), "j": int(j)}) + "\n")


@dataclass
class SiTrajectory:
    """Infection history of one SI run.

    ``jumps`` starts at (0, number of seeds) and appends one entry per
    infection instant (a beta = inf component absorption can raise X by
    more than 1).  ``infections`` lists (time, node) for every node,
    seeds included at time 0.  ``hitting[k]`` is the first time X >= k;
    absent keys were never reached.
    """

    n: int
    jumps: list          # (t, X after jump)
    infections: list     # (t, node)
    hitting: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.hitting:
            self.hitting = _hitting_from_jumps(self.jumps)

    def hitting_time(self, k: int):
        return hitting_time(self, k)

    def final_count(self) -> int:
        return self.jumps[-1][1] if self.jumps else 0

    def to_jsonl(self, path) -> None:
        """Write infection events (the SI run does not track edge events)."""
        with open(path, "w") as fh:
            for (t, node) in self.infections:
                fh.write(json.dumps(
                    {"t": t, "kind": INFECT, "i": int(node), "j": None}) + "\n")


def _hitting_from_jumps(jumps) -> dict:
    hit = {}
    prev = 0
    for (t, x) in jumps:
        for k in range(prev + 1, x + 1):
            hit[k] = t
        prev = max(prev, x)
    return hit


def hitting_time(traj: SiTrajectory, k: int):
    """First time the infected count reaches k, or None if never."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return traj.hitting.get(k)


# ---------------------------------------------------------------------------
# Dynamic graph simulation
# ---------------------------------------------------------------------------

def simulate_dynamic_graph(n: int, params: EdgeParams, initial: GraphSnapshot,
                           horizon: float, rng: RngLike = None) -> EventTrajectory:
    """Run all n(n-1)/2 telegraph edges jointly over [0, horizon].

    Each pair's toggle times are drawn independently with the marginal
    law of ``core_model.sample_edge_trajectory``; the merged stream is
    ordered by (time, pair) so replay is deterministic.
    """
    if initial.n != n:
        raise ValueError("initial.n must equal n")
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    _check_cap(n)
    gen = as_generator(rng)
    ind = initial.flat_indicator()
    m = pair_count(n)
    all_times = []
    all_pairs = []
    all_kinds = []
    for idx in range(m):
        toggles = sample_edge_trajectory(bool(ind[idx]), horizon, params, gen)
        if len(toggles) == 0:
            continue
        kinds = np.empty(len(toggles), dtype=np.uint8)
        kinds[0::2] = 0 if ind[idx] else 1  # first toggle leaves the initial state
        kinds[1::2] = 1 if ind[idx] else 0
        all_times.append(toggles)
        all_pairs.append(np.full(len(toggles), idx, dtype=np.int64))
        all_kinds.append(kinds)
    if all_times:
        times = np.concatenate(all_times)
        pairs = np.concatenate(all_pairs)
        kinds = np.concatenate(all_kinds)
        order = np.lexsort((pairs, times))
        ij = pairs_from_indices(pairs[order], n)
        events = [
            (float(t), EDGE_ON if k else EDGE_OFF, int(i), int(j))
            for t, k, (i, j) in zip(times[order], kinds[order], ij)
        ]
    else:
        events = []
    return EventTrajectory(n=n, initial=initial, horizon=horizon, events=events)


# ---------------------------------------------------------------------------
# SI contagion
# ---------------------------------------------------------------------------

def _normalize_seeds(n: int, seeds) -> np.ndarray:
    arr = np.unique(np.asarray(list(seeds), dtype=np.int64))
    if arr.size == 0:
        raise ValueError("seeds must be nonempty")
    if arr.min() < 0 or arr.max() >= n:
        raise ValueError("seed node out of range")
    return arr


def _resolve_initial(n, params, initial, initial_p):
    """Return (p0, init_states, use_init) for the SI kernels."""
    if initial is not None and initial_p is not None:
        raise ValueError("give either an initial snapshot or initial_p, not both")
    if initial is not None:
        if initial.n != n:
            raise ValueError("initial.n must equal n")
        return 0.0, initial.flat_indicator(), True
    if initial_p is not None:
        if not 0.0 <= initial_p <= 1.0:
            raise ValueError("initial_p must be in [0, 1]")
        return float(initial_p), np.zeros(0, dtype=np.uint8), False
    # default: stationary start; degenerate rates have no stationary law
    return params.stationary_p, np.zeros(0, dtype=np.uint8), False


def simulate_si(n: int, params: EdgeParams, beta: float, seeds=(0,), *,
                horizon: float = math.inf, target: int | None = None,
                rng: RngLike = None, initial: GraphSnapshot | None = None,
                initial_p: float | None = None) -> SiTrajectory:
    """SI contagion on the dynamic graph.

    ``beta`` may be ``math.inf``: infection then absorbs entire connected
    components the instant they touch an infected node.  The initial
    graph defaults to a stationary G(n, p) draw; pass ``initial`` (an
    explicit snapshot) or ``initial_p`` (independent Bernoulli edges) to
    override, which is also how the static-graph case lam = mu = 0 gets
    its edge probability.  Stops at ``target`` infections (default: n)
    or at ``horizon``, whichever comes first; unreached targets simply
    leave ``hitting`` entries absent.
    """
    _check_cap(n)
    seeds_arr = _normalize_seeds(n, seeds)
    if target is None:
        target = n
    if not 1 <= target <= n:
        raise ValueError("target must be in [1, n]")
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    gen = as_generator(rng)
    if math.isinf(beta):
        return _simulate_si_beta_inf(n, params, seeds_arr, target, horizon,
                                     gen, initial, initial_p)
    if beta <= 0:
        raise ValueError("beta must be > 0 or math.inf")
    if params.instant_removal:
        raise ValueError(
            "instant-removal edges never transmit at finite beta; "
            "use beta = math.inf for the instant-transmission limit")
    p0, init_states, use_init = _resolve_initial(n, params, initial, initial_p)
    seed = int(gen.integers(1, 2**31 - 1))
    times, counts, order, cnt = kernels.si_finite_run(
        n, params.lam, params.mu, beta, p0, seeds_arr, target, horizon,
        seed, init_states, use_init)
    jumps = [(0.0, int(seeds_arr.size))]
    infections = [(0.0, int(s)) for s in seeds_arr]
    for i in range(cnt):
        jumps.append((float(times[i]), int(counts[i])))
        infections.append((float(times[i]), int(order[i])))
    return SiTrajectory(n=n, jumps=jumps, infections=infections)


def simulate_si_alpha_inf(n: int, p: float, beta: float, seeds=(0,), *,
                          horizon: float = math.inf, target: int | None = None,
                          rng: RngLike = None) -> SiTrajectory:
    """SI in the infinitely-fast-edge limit: a pure-birth count process.

    When edges re-randomize instantly, each infected-susceptible pair
    transmits at effective rate beta*p, so from m infected the next
    infection arrives after Exp(beta p m (n-m)); no edge state exists.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError("p must be in (0, 1]")
    if beta <= 0:
        raise ValueError("beta must be > 0")
    seeds_arr = _normalize_seeds(n, seeds)
    if target is None:
        target = n
    if not 1 <= target <= n:
        raise ValueError("target must be in [1, n]")
    gen = as_generator(rng)
    m0 = int(seeds_arr.size)
    ms = np.arange(m0, min(target, n), dtype=np.float64)
    jumps = [(0.0, m0)]
    infections = [(0.0, int(s)) for s in seeds_arr]
    if ms.size:
        rates = beta * p * ms * (n - ms)
        waits = gen.exponential(1.0 / rates)
        t_arr = np.cumsum(waits)
        # nodes infected in index order among non-seeds, for replayable output
        others = np.setdiff1d(np.arange(n, dtype=np.int64), seeds_arr)
        x = m0
        for k, t in enumerate(t_arr):
            if t > horizon:
                break
            x += 1
            jumps.append((float(t), x))
            infections.append((float(t), int(others[k])))
    return SiTrajectory(n=n, jumps=jumps, infections=infections)


def _simulate_si_beta_inf(n, params, seeds_arr, target, horizon, gen,
                          initial, initial_p):
    if params.instant_removal:
        # edges flash on and vanish; each flash between the infected set and
        # outside transmits instantly: pure birth at rate lam*k*(n-k)
        x = int(seeds_arr.size)
        jumps = [(0.0, x)]
        infections = [(0.0, int(s)) for s in seeds_arr]
        others = np.setdiff1d(np.arange(n, dtype=np.int64), seeds_arr)
        t = 0.0
        k = 0
        while x < target:
            rate = params.lam * x * (n - x)
            if rate <= 0:
                break
            t += gen.exponential(1.0 / rate)
            if t > horizon:
                break
            x += 1
            jumps.append((float(t), x))
            infections.append((float(t), int(others[k])))
            k += 1
        return SiTrajectory(n=n, jumps=jumps, infections=infections)
    p0, init_states, use_init = _resolve_initial(n, params, initial, initial_p)
    if use_init:
        initial_graph = GraphSnapshot(n, pairs_from_indices(
            np.flatnonzero(init_states), n))
    else:
        initial_graph = sample_stationary_graph(n, p0, gen)
    if params.mu == 0.0:
        return _si_beta_inf_additive(n, params.lam, initial_graph, seeds_arr,
                                     target, horizon, gen)
    return _si_beta_inf_toggling(n, params, initial_graph, seeds_arr,
                                 target, horizon, gen)


def _si_beta_inf_additive(n, lam, initial_graph, seeds_arr, target, horizon, gen):
    """beta = inf, mu = 0: edges only appear; union-find sweep, no event loop.

    Each off pair gets one Exp(lam) appearance time.  Sweeping the smallest
    ~n log n of them in order almost always finishes; if not, the sweep is
    redone from scratch over a 4x larger prefix (cheap, and keeps every
    escalation level exactly equivalent to a full sort).
    """
    off_idx = np.flatnonzero(initial_graph.flat_indicator() == 0)
    if lam > 0 and off_idx.size:
        times = gen.exponential(1.0 / lam, off_idx.size)
    else:
        times = np.zeros(0)
        off_idx = off_idx[:0]

    def sweep(k_take):
        """Run the whole infection process using only the k_take earliest pairs."""
        uf = _UnionFind(n)
        for (i, j) in initial_graph.edges:
            uf.union(int(i), int(j))
        infected = np.zeros(n, dtype=bool)
        jumps = [(0.0, int(seeds_arr.size))]
        infections = [(0.0, int(s)) for s in seeds_arr]
        x = int(seeds_arr.size)
        is_seed = np.zeros(n, dtype=bool)
        is_seed[seeds_arr] = True
        roots = {uf.find(int(s)) for s in seeds_arr}
        extra = [v for v in range(n) if uf.find(v) in roots and not is_seed[v]]
        for s in seeds_arr:
            infected[s] = True
        for v in extra:
            infected[v] = True
            infections.append((0.0, int(v)))
        if extra:
            x += len(extra)
            jumps.append((0.0, x))
        if x >= target or times.size == 0:
            return True, jumps, infections
        if k_take >= off_idx.size:
            sel = np.argsort(times, kind="stable")
        else:
            part = np.argpartition(times, k_take)[:k_take]
            sel = part[np.argsort(times[part], kind="stable")]
        ij = pairs_from_indices(off_idx[sel], n)
        for (t, (i, j)) in zip(times[sel], ij):
            if t > horizon:
                return True, jumps, infections
            i, j = int(i), int(j)
            if uf.find(i) == uf.find(j):
                continue
            inf_i, inf_j = bool(infected[i]), bool(infected[j])
            root = uf.union(i, j)
            if inf_i == inf_j:
                continue  # merge of two susceptible comps, or redundant
            newly = [v for v in range(n)
                     if not infected[v] and uf.find(v) == root]
            for v in newly:
                infected[v] = True
                infections.append((float(t), v))
            x += len(newly)
            jumps.append((float(t), x))
            if x >= target:
                return True, jumps, infections
        return False, jumps, infections

    k_take = min(off_idx.size, int(1.3 * n * max(math.log(n), 1.0)) + 64)
    while True:
        done, jumps, infections = sweep(k_take)
        if done or k_take >= off_idx.size:
            return SiTrajectory(n=n, jumps=jumps, infections=infections)
        k_take = min(off_idx.size, k_take * 4)


class _UnionFind:
    __slots__ = ("parent", "rank")

    def __init__(self, n):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, a):
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return ra


def _si_beta_inf_toggling(n, params, initial_graph, seeds_arr, target,
                          horizon, gen):
    """beta = inf with mu > 0: full edge dynamics, BFS absorption."""
    if n > 2000:
        raise ResourceCapError(
            "beta=inf with mu>0 tracks every pair clock; capped at n <= 2000")
    lam, mu = params.lam, params.mu
    m = pair_count(n)
    ind = initial_graph.flat_indicator().astype(bool)
    adj = [set() for _ in range(n)]
    for (i, j) in initial_graph.edges:
        adj[int(i)].add(int(j))
        adj[int(j)].add(int(i))
    infected = np.zeros(n, dtype=bool)
    jumps = [(0.0, int(seeds_arr.size))]
    infections = [(0.0, int(s)) for s in seeds_arr]

    def absorb(t, frontier):
        newly = []
        dq = deque(frontier)
        while dq:
            u = dq.popleft()
            if infected[u]:
                continue
            infected[u] = True
            newly.append(u)
            for w in adj[u]:
                if not infected[w]:
                    dq.append(w)
        return newly

    for s in seeds_arr:
        infected[s] = True
    first = absorb(0.0, [w for s in seeds_arr for w in adj[s] if not infected[w]])
    x = int(seeds_arr.size) + len(first)
    if first:
        jumps.append((0.0, x))
        for v in first:
            infections.append((0.0, int(v)))

    # per-pair next toggle events (pairs with rate 0 never fire)
    ij_all = pairs_from_indices(np.arange(m, dtype=np.int64), n)
    rates = np.where(ind, mu, lam)
    live = np.flatnonzero(rates > 0)
    waits = gen.exponential(1.0 / rates[live]) if live.size else np.zeros(0)
    heap = [(float(w), int(idx)) for w, idx in zip(waits, live)]
    heapq.heapify(heap)
    while heap and x < target:
        t, idx = heapq.heappop(heap)
        if t > horizon:
            break
        i, j = int(ij_all[idx, 0]), int(ij_all[idx, 1])
        if ind[idx]:
            ind[idx] = False
            adj[i].discard(j)
            adj[j].discard(i)
            nxt = lam
        else:
            ind[idx] = True
            adj[i].add(j)
            adj[j].add(i)
            nxt = mu
            if infected[i] != infected[j]:
                newly = absorb(t, [j if infected[i] else i])
                x += len(newly)
                jumps.append((float(t), x))
                for v in newly:
                    infections.append((float(t), int(v)))
        if nxt > 0:
            heapq.heappush(heap, (t + float(gen.exponential(1.0 / nxt)), idx))
    return SiTrajectory(n=n, jumps=jumps, infections=infections)


# ---------------------------------------------------------------------------
# Connectivity time
# ---------------------------------------------------------------------------

def connectivity_time(n: int, lam: float, rng: RngLike = None) -> float:
    """First time an initially empty growing graph becomes connected.

    Each pair appears after an independent Exp(lam) wait; the smallest
    ~n log n candidates are partitioned out, sorted, and swept with
    union-find until one component remains (escalating the candidate set
    in the rare case it does not suffice).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if lam <= 0:
        raise ValueError("lam must be > 0")
    _check_cap(n)
    gen = as_generator(rng)
    m = pair_count(n)
    times = gen.exponential(1.0 / lam, m)
    k_take = min(m, int(1.3 * n * max(math.log(n), 1.0)) + 64)
    while True:
        if k_take >= m:
            sel = np.argsort(times, kind="stable")
        else:
            part = np.argpartition(times, k_take)[:k_take]
            sel = part[np.argsort(times[part], kind="stable")]
        ij = pairs_from_indices(sel, n)
        cnt = kernels.connectivity_sweep(
            n, np.ascontiguousarray(ij[:, 0]), np.ascontiguousarray(ij[:, 1]))
        if cnt > 0:
            return float(times[sel[cnt - 1]])
        if k_take >= m:  # disconnected even with every pair: impossible for n >= 2
            raise RuntimeError("sweep failed to connect the complete pair set")
        k_take = min(m, k_take * 4)
