"""Numba-compiled implementations of the hot kernels.

Contracts are identical to ``_numpy``; see that module for the algorithm
documentation.  First call pays JIT compilation (cached on disk).
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from ._numpy import (
    HISTCAP,
    P_EXPONENTIAL,
    P_HAZARD,
    P_FIFO,
    P_TRUNC,
    PA_RESEEDED,
    PA_CAPACITY,
    PA_HAZARD_SCAN,
)


@njit(cache=True)
def thomas_solve(lower, diag, upper, rhs):
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


@njit(cache=True)
def connectivity_sweep(n, us, vs):
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


@njit(cache=True)
def _si_activate(v, t, n, lam, mu, beta, p0, init_states, use_init, best, infected):
    rate = lam + mu
    p = lam / rate if rate > 0.0 else p0
    pabs = beta / (mu + beta)
    decay = math.exp(-rate * t) if rate > 0.0 else 1.0
    for w in range(n):
        if infected[w] == 1 or w == v:
            continue
        if best[w] <= t:
            # any fresh delay lands strictly after t, so this pair cannot win
            continue
        if use_init:
            i = v if v < w else w
            j = w if v < w else v
            s0 = 1.0 if init_states[i * (2 * n - i - 1) // 2 + (j - i - 1)] == 1 else 0.0
            q = p + (s0 - p) * decay
        else:
            q = p + (p0 - p) * decay
        on = np.random.random() < q
        if pabs >= 1.0:
            g = 1
        else:
            g = np.random.geometric(pabs)
        tau = np.random.gamma(float(g), 1.0 / (mu + beta))
        noff = g - (1 if on else 0)
        if noff > 0:
            if lam > 0.0:
                tau += np.random.gamma(float(noff), 1.0 / lam)
            else:
                tau = np.inf
        cand = t + tau
        if cand < best[w]:
            best[w] = cand


@njit(cache=True)
def si_finite_run(n, lam, mu, beta, p0, seeds, target, horizon, seed,
                  init_states, use_init):
    np.random.seed(seed)
    infected = np.zeros(n, dtype=np.uint8)
    best = np.full(n, np.inf)
    for idx in range(len(seeds)):
        infected[seeds[idx]] = 1
    times = np.zeros(n + 1)
    counts = np.zeros(n + 1, dtype=np.int64)
    order = np.full(n + 1, -1, dtype=np.int64)
    cnt = 0
    x = len(seeds)
    sseeds = np.sort(seeds)
    for idx in range(len(sseeds)):
        _si_activate(sseeds[idx], 0.0, n, lam, mu, beta, p0,
                     init_states, use_init, best, infected)
    while x < target:
        w = -1
        bt = np.inf
        for u in range(n):
            if infected[u] == 0 and best[u] < bt:
                bt = best[u]
                w = u
        if w < 0 or bt > horizon:
            break
        infected[w] = 1
        best[w] = np.inf
        x += 1
        times[cnt] = bt
        counts[cnt] = x
        order[cnt] = w
        cnt += 1
        if x < target:
            _si_activate(w, bt, n, lam, mu, beta, p0,
                         init_states, use_init, best, infected)
    return times, counts, order, cnt


@njit(cache=True)
def _pa_compact(ra, rga, rb, rgb, nrec, gen, honest):
    k = 0
    for r in range(nrec):
        aa = rga[r] == gen[ra[r]]
        bb = rgb[r] == gen[rb[r]]
        keep = (aa and bb) if honest else (aa or bb)
        if keep:
            ra[k] = ra[r]
            rga[k] = rga[r]
            rb[k] = rb[r]
            rgb[k] = rgb[r]
            k += 1
    return k


@njit(cache=True)
def _pa_weights(ra, rga, rb, rgb, nrec, gen, honest, n):
    d = np.zeros(n, dtype=np.int64)
    for r in range(nrec):
        aa = rga[r] == gen[ra[r]]
        bb = rgb[r] == gen[rb[r]]
        if honest:
            if aa and bb:
                d[ra[r]] += 1
                d[rb[r]] += 1
        else:
            if aa:
                d[ra[r]] += 1
            if bb:
                d[rb[r]] += 1
    return d


@njit(cache=True)
def _pa_pick(ra, rga, rb, rgb, nrec, gen, honest, newslot, chosen, k):
    for _ in range(4096):
        if nrec == 0:
            return -1
        r = np.random.randint(0, nrec)
        if honest and not (rga[r] == gen[ra[r]] and rgb[r] == gen[rb[r]]):
            continue
        if np.random.random() < 0.5:
            x = ra[r]
            gx = rga[r]
        else:
            x = rb[r]
            gx = rgb[r]
        if (not honest) and gx != gen[x]:
            continue
        if x == newslot:
            continue
        dup = False
        for i in range(k):
            if chosen[i] == x:
                dup = True
                break
        if dup:
            continue
        return x
    return -1


@njit(cache=True)
def _pa_pick_exact(ra, rga, rb, rgb, nrec, gen, honest, newslot, chosen, k, n):
    w = _pa_weights(ra, rga, rb, rgb, nrec, gen, honest, n)
    w[newslot] = 0
    for i in range(k):
        w[chosen[i]] = 0
    tot = 0
    for s in range(n):
        tot += w[s]
    if tot == 0:
        return -1
    u = np.random.randint(0, tot)
    acc = 0
    for s in range(n):
        acc += w[s]
        if u < acc:
            return s
    return n - 1


@njit(cache=True)
def pa_turnover_run(n, m, steps, policy, h0, t0_steps, h1, max_age_steps,
                    honest, avg_snapshots, seed, rec_cap):
    np.random.seed(seed)
    gen = np.zeros(n, dtype=np.int64)
    birth = np.empty(n, dtype=np.int64)
    for s in range(n):
        birth[s] = s - n
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
    hmax = h0 if h0 > h1 else h1

    c = m + 1
    for i in range(c):
        for j in range(i + 1, c):
            ra[nrec] = i
            rga[nrec] = 0
            rb[nrec] = j
            rgb[nrec] = 0
            nrec += 1
    for s in range(c, n):
        for k in range(m):
            x = _pa_pick(ra, rga, rb, rgb, nrec, gen, honest, s, chosen, k)
            if x < 0:
                x = _pa_pick_exact(ra, rga, rb, rgb, nrec, gen, honest, s, chosen, k, n)
            chosen[k] = x
        for k in range(m):
            ra[nrec] = s
            rga[nrec] = gen[s]
            rb[nrec] = chosen[k]
            rgb[nrec] = gen[chosen[k]]
            nrec += 1
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
            while q_birth[q_head] != birth[q_slot[q_head]]:
                q_head += 1
            victim = q_slot[q_head]
            q_head += 1
        elif policy == P_EXPONENTIAL:
            victim = np.random.randint(0, n)
        elif policy == P_TRUNC:
            while q_birth[q_head] != birth[q_slot[q_head]]:
                q_head += 1
            old = q_slot[q_head]
            if t - birth[old] >= max_age_steps:
                victim = old
                q_head += 1
            else:
                victim = np.random.randint(0, n)
        else:
            victim = -1
            for _ in range(4096):
                r = np.random.randint(0, n)
                h = h0 if (t - birth[r]) < t0_steps else h1
                if np.random.random() * hmax < h:
                    victim = r
                    break
            if victim < 0:
                status |= PA_HAZARD_SCAN
                tot = 0.0
                for s2 in range(n):
                    tot += h0 if (t - birth[s2]) < t0_steps else h1
                u = np.random.random() * tot
                acc = 0.0
                victim = n - 1
                for s2 in range(n):
                    acc += h0 if (t - birth[s2]) < t0_steps else h1
                    if u < acc:
                        victim = s2
                        break
        gen[victim] += 1
        birth[victim] = t
        q_slot[q_tail] = victim
        q_birth[q_tail] = t
        q_tail += 1

        normal = True
        for k in range(m):
            x = _pa_pick(ra, rga, rb, rgb, nrec, gen, honest, victim, chosen, k)
            if x < 0:
                x = _pa_pick_exact(ra, rga, rb, rgb, nrec, gen, honest, victim, chosen, k, n)
            if x < 0:
                normal = False
                break
            chosen[k] = x
        if normal:
            if nrec + m > rec_cap:
                status |= PA_CAPACITY
                break
            for k in range(m):
                ra[nrec] = victim
                rga[nrec] = gen[victim]
                rb[nrec] = chosen[k]
                rgb[nrec] = gen[chosen[k]]
                nrec += 1
        else:
            # attachment mass extinct: reseed a small clique and flag it
            status |= PA_RESEEDED
            for k in range(m):
                while True:
                    xx = np.random.randint(0, n)
                    ok = xx != victim
                    if ok:
                        for i in range(k):
                            if chosen[i] == xx:
                                ok = False
                                break
                    if ok:
                        chosen[k] = xx
                        break
            nodes = np.empty(m + 1, dtype=np.int64)
            nodes[0] = victim
            for k in range(m):
                nodes[k + 1] = chosen[k]
            for i in range(m + 1):
                for j in range(i + 1, m + 1):
                    if nrec < rec_cap:
                        ra[nrec] = nodes[i]
                        rga[nrec] = gen[nodes[i]]
                        rb[nrec] = nodes[j]
                        rgb[nrec] = gen[nodes[j]]
                        nrec += 1
                    else:
                        status |= PA_CAPACITY

        if nrec > rec_cap - (3 * m + 8) or (t + 1) % n == 0:
            nrec = _pa_compact(ra, rga, rb, rgb, nrec, gen, honest)
        if t >= snap_start and (t - snap_start) % snap_stride == 0 and snaps < avg_snapshots:
            d = _pa_weights(ra, rga, rb, rgb, nrec, gen, honest, n)
            for s2 in range(n):
                dv = d[s2]
                if dv > HISTCAP - 1:
                    dv = HISTCAP - 1
                hist[dv] += 1
            snaps += 1

    deg = _pa_weights(ra, rga, rb, rgb, nrec, gen, honest, n)
    return deg, hist, snaps, status
