"""Pure NumPy / Python implementations of the hot kernels.

This is the fallback backend.  Input/output contracts match the numba
twins in ``_numba`` exactly; the code is vectorized where numpy helps and
uses plain Python loops where the algorithm is inherently sequential.
Random streams are not bit-compatible across backends (each backend owns
its generator); the sampled distributions are identical.
"""

from __future__ import annotations

import math

import numpy as np

HISTCAP = 8192

# lifespan policy codes shared with the numba backend
P_EXPONENTIAL = 0
P_HAZARD = 1
P_FIFO = 2
P_TRUNC = 3

# status bits returned by pa_turnover_run
PA_RESEEDED = 1
PA_CAPACITY = 2
PA_HAZARD_SCAN = 4


def thomas_solve(lower, diag, upper, rhs):
    """Solve a tridiagonal system by forward elimination / back substitution.

    ``lower[i]`` multiplies x[i-1] in row i (lower[0] unused), ``upper[i]``
    multiplies x[i+1] (upper[-1] unused).
    """
    n = len(diag)
    cp = np.empty(n)
    dp = np.empty(n)
    cp[0] = upper[0] / diag[0]
    dp[0] = rhs[0] / diag[0]
    for i in range(1, n):
        den = diag[i] - lower[i] * cp[i - 1]
        cp[i] = upper[i] / den
        dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / den
    x = np.empty(n)
    x[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


def connectivity_sweep(n, us, vs):
    """Union edges in the given order until one component remains.

    Returns the number of edges consumed to reach a single component, or
    -1 if the stream is exhausted first.
    """
    parent = np.arange(n, dtype=np.int64)
    comps = n
    for k in range(len(us)):
        a = us[k]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        b = vs[k]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a != b:
            parent[a] = b
            comps -= 1
            if comps == 1:
                return k + 1
    return -1


def si_finite_run(n, lam, mu, beta, p0, seeds, target, horizon, seed,
                  init_states, use_init):
    """One SI trial on the dynamic graph with finite transmission rate beta.

    Susceptible-susceptible edges are never inspected: when a node becomes
    infected at time t, each of its susceptible partners gets a
    transmission delay drawn from the exact law of "first accumulated
    Exp(beta) ring while the edge is on", conditioned on the edge history
    being unobserved since time 0.  The number of on-visits before
    transmission is Geometric(beta/(mu+beta)); on-time is a Gamma sum of
    Exp(mu+beta) visits and off-time a Gamma sum of Exp(lam) waits.

    Returns (times, counts, order, cnt): the first ``cnt`` entries are
    the infection jump times, the infected count after each jump, and
    the node infected at that jump.
    """
    rng = np.random.default_rng(seed)
    rate = lam + mu
    p = lam / rate if rate > 0 else p0
    pabs = beta / (mu + beta)
    infected = np.zeros(n, dtype=bool)
    infected[seeds] = True
    best = np.full(n, np.inf)
    times = np.zeros(n + 1)
    counts = np.zeros(n + 1, dtype=np.int64)
    order = np.full(n + 1, -1, dtype=np.int64)
    cnt = 0
    x = len(seeds)
    sus = np.flatnonzero(~infected)

    def activate(v, t):
        if len(sus) == 0:
            return
        decay = math.exp(-rate * t) if rate > 0 else 1.0
        if use_init:
            lo = np.minimum(v, sus)
            hi = np.maximum(v, sus)
            s0 = init_states[lo * (2 * n - lo - 1) // 2 + (hi - lo - 1)].astype(np.float64)
            q = p + (s0 - p) * decay
        else:
            q = p + (p0 - p) * decay
        on = rng.random(len(sus)) < q
        g = rng.geometric(pabs, len(sus))
        tau = rng.gamma(g, 1.0 / (mu + beta))
        noff = g - on
        if lam > 0.0:
            tau = tau + rng.gamma(noff, 1.0 / lam)
        else:
            tau = np.where(noff > 0, np.inf, tau)
        best[sus] = np.minimum(best[sus], t + tau)

    for v in np.sort(np.asarray(seeds)):
        activate(int(v), 0.0)
    while x < target and len(sus):
        k = int(np.argmin(best[sus]))
        t = best[sus][k]
        if not np.isfinite(t) or t > horizon:
            break
        w = int(sus[k])
        infected[w] = True
        best[w] = np.inf
        x += 1
        times[cnt] = t
        counts[cnt] = x
        order[cnt] = w
        cnt += 1
        sus = np.delete(sus, k)
        if x < target:
            activate(w, t)
    return times, counts, order, cnt


def pa_turnover_run(n, m, steps, policy, h0, t0_steps, h1, max_age_steps,
                    honest, avg_snapshots, seed, rec_cap):
    """Discrete node-turnover preferential attachment.

    Each step removes one node under the lifespan policy and adds a fresh
    node wired to m distinct preferential targets.  Attachment mass is an
    append-only list of link records (a, gen_a, b, gen_b); a slot's
    generation counter is bumped on removal, invalidating its old
    records.  With ``honest`` set, a record carries weight only while both
    endpoints are alive (live edges); otherwise each alive endpoint keeps
    the unit of attachment weight it earned even after the partner died.

    Returns (degrees, hist, snaps, status).  ``degrees`` is the final
    per-slot live degree (or attachment weight), ``hist`` an optional
    degree histogram accumulated over ``avg_snapshots`` snapshots in the
    last tenth of the run, and ``status`` carries PA_* bit flags.
    """
    rng = np.random.default_rng(seed)
    gen = np.zeros(n, dtype=np.int64)
    birth = np.arange(n, dtype=np.int64) - n  # seed ages staggered, slot 0 oldest
    ra = np.zeros(rec_cap, dtype=np.int64)
    rga = np.zeros(rec_cap, dtype=np.int64)
    rb = np.zeros(rec_cap, dtype=np.int64)
    rgb = np.zeros(rec_cap, dtype=np.int64)
    nrec = 0
    qcap = steps + n + 8
    q_slot = np.zeros(qcap, dtype=np.int64)
    q_birth = np.zeros(qcap, dtype=np.int64)
    q_head = 0
    q_tail = 0
    status = 0
    hist = np.zeros(HISTCAP, dtype=np.int64)
    snaps = 0
    chosen = np.full(m, -1, dtype=np.int64)
    hmax = max(h0, h1)

    def add_record(u, v):
        nonlocal nrec, status
        if nrec >= rec_cap:
            status |= PA_CAPACITY
            return False
        ra[nrec] = u
        rga[nrec] = gen[u]
        rb[nrec] = v
        rgb[nrec] = gen[v]
        nrec += 1
        return True

    def compact():
        nonlocal nrec
        aa = rga[:nrec] == gen[ra[:nrec]]
        bb = rgb[:nrec] == gen[rb[:nrec]]
        keep = (aa & bb) if honest else (aa | bb)
        k = int(keep.sum())
        ra[:k] = ra[:nrec][keep]
        rga[:k] = rga[:nrec][keep]
        rb[:k] = rb[:nrec][keep]
        rgb[:k] = rgb[:nrec][keep]
        nrec = k

    def live_weights():
        aa = rga[:nrec] == gen[ra[:nrec]]
        bb = rgb[:nrec] == gen[rb[:nrec]]
        d = np.zeros(n, dtype=np.int64)
        if honest:
            both = aa & bb
            np.add.at(d, ra[:nrec][both], 1)
            np.add.at(d, rb[:nrec][both], 1)
        else:
            np.add.at(d, ra[:nrec][aa], 1)
            np.add.at(d, rb[:nrec][bb], 1)
        return d

    def oldest_head():
        nonlocal q_head
        while q_birth[q_head] != birth[q_slot[q_head]]:
            q_head += 1
        return int(q_slot[q_head])

    def pick_target(newslot, k):
        for _ in range(4096):
            if nrec == 0:
                break
            r = int(rng.integers(nrec))
            if honest and not (rga[r] == gen[ra[r]] and rgb[r] == gen[rb[r]]):
                continue
            if rng.random() < 0.5:
                x, gx = int(ra[r]), rga[r]
            else:
                x, gx = int(rb[r]), rgb[r]
            if not honest and gx != gen[x]:
                continue
            if x == newslot or (chosen[:k] == x).any():
                continue
            return x
        return -1

    def pick_target_exact(newslot, k):
        w = live_weights()
        w[newslot] = 0
        w[chosen[:k]] = 0
        tot = int(w.sum())
        if tot == 0:
            return -1
        u = int(rng.integers(tot))
        return int(np.searchsorted(np.cumsum(w), u, side="right"))

    def reseed_clique(newslot):
        nonlocal status
        status |= PA_RESEEDED
        picked = []
        while len(picked) < m:
            x = int(rng.integers(n))
            if x != newslot and x not in picked:
                picked.append(x)
        nodes = [newslot] + picked
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                add_record(nodes[i], nodes[j])

    # seed graph: clique on the first m+1 slots, then preferential growth
    c = m + 1
    for i in range(c):
        for j in range(i + 1, c):
            add_record(i, j)
    for s in range(c, n):
        for k in range(m):
            x = pick_target(s, k)
            if x < 0:
                x = pick_target_exact(s, k)
            chosen[k] = x
        for k in range(m):
            add_record(s, int(chosen[k]))
    for s in range(n):
        q_slot[q_tail] = s
        q_birth[q_tail] = birth[s]
        q_tail += 1

    if avg_snapshots > 0:
        snap_start = steps - max(steps // 10, 1)
        snap_stride = max(1, (steps - snap_start) // avg_snapshots)
    else:
        snap_start = steps
        snap_stride = 1

    for t in range(steps):
        if policy == P_FIFO:
            victim = oldest_head()
            q_head += 1
        elif policy == P_EXPONENTIAL:
            victim = int(rng.integers(n))
        elif policy == P_TRUNC:
            old = oldest_head()
            if t - birth[old] >= max_age_steps:
                victim = old
                q_head += 1
            else:
                victim = int(rng.integers(n))
        else:  # P_HAZARD: piecewise-constant hazard of age
            victim = -1
            for _ in range(4096):
                r = int(rng.integers(n))
                h = h0 if (t - birth[r]) < t0_steps else h1
                if rng.random() * hmax < h:
                    victim = r
                    break
            if victim < 0:
                status |= PA_HAZARD_SCAN
                hs = np.where((t - birth) < t0_steps, h0, h1)
                u = rng.random() * hs.sum()
                victim = min(int(np.searchsorted(np.cumsum(hs), u, side="right")), n - 1)
        gen[victim] += 1
        birth[victim] = t
        q_slot[q_tail] = victim
        q_birth[q_tail] = t
        q_tail += 1

        normal = True
        for k in range(m):
            x = pick_target(victim, k)
            if x < 0:
                x = pick_target_exact(victim, k)
            if x < 0:
                reseed_clique(victim)
                normal = False
                break
            chosen[k] = x
        if normal:
            for k in range(m):
                add_record(victim, int(chosen[k]))
        if status & PA_CAPACITY:
            break

        if nrec > rec_cap - (3 * m + 8) or (t + 1) % n == 0:
            compact()
        if t >= snap_start and (t - snap_start) % snap_stride == 0 and snaps < avg_snapshots:
            d = np.minimum(live_weights(), HISTCAP - 1)
            hist += np.bincount(d, minlength=HISTCAP)
            snaps += 1

    return live_weights(), hist, snaps, status
