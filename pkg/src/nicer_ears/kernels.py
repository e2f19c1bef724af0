"""Bitmask kernels for the desk-scale exact searches.

Each kernel has a loop implementation (``*_loops``, compiled by numba into
``*_jit``) and a vectorized numpy implementation (``*_numpy``).  The public
name is bound to one of them by :mod:`nicer_ears._accel`.  Both variants
return identical results; the test-suite checks this.

Vertex and edge sets are int64 bitmasks, so graphs here have at most 62
vertices and 62 edges.
"""

from __future__ import annotations

import itertools

import numpy as np

from ._accel import njit, select

INF = np.int64(1) << np.int64(40)


# ---------------------------------------------------------------------------
# helpers for the numpy paths


def popcount_array(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64)
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return ((x * np.uint64(0x0101010101010101)) >> np.uint64(56)).astype(np.int64)


def lowbit_index_array(x: np.ndarray) -> np.ndarray:
    """Index of the lowest set bit (-1 where x == 0)."""
    low = x & -x
    out = np.full(x.shape, -1, dtype=np.int64)
    nz = low != 0
    out[nz] = np.log2(low[nz].astype(np.float64)).round().astype(np.int64)
    return out


def component_counts_numpy(masks: np.ndarray, eu: np.ndarray, ev: np.ndarray, n: int) -> np.ndarray:
    """Number of components of (V, {e : bit e of mask}) for every mask."""
    L = masks.shape[0]
    labels = np.tile(np.arange(n, dtype=np.int64), (L, 1))
    sel = [((masks >> np.int64(e)) & 1) == 1 for e in range(eu.shape[0])]
    changed = True
    while changed:
        changed = False
        for e in range(eu.shape[0]):
            u, v = eu[e], ev[e]
            lu, lv = labels[:, u], labels[:, v]
            upd = sel[e] & (lu != lv)
            if upd.any():
                mn = np.minimum(lu, lv)
                labels[upd, u] = mn[upd]
                labels[upd, v] = mn[upd]
                changed = True
    return (labels == np.arange(n, dtype=np.int64)).sum(axis=1)


def _submasks_desc(comp: int) -> np.ndarray:
    subs = np.zeros(1, dtype=np.int64)
    c = comp
    while c:
        low = c & -c
        subs = np.concatenate([subs, subs | low])
        c ^= low
    return np.sort(subs[1:])[::-1]


# ---------------------------------------------------------------------------
# Hamiltonian path endpoint table


def _ham_reach_loops(adj):
    """reach[S, a] = set of b such that G[S] has a Hamiltonian a-b path."""
    n = adj.shape[0]
    N = 1 << n
    reach = np.zeros((N, n), dtype=np.int64)
    for S in range(1, N):
        for a in range(n):
            if ((S >> a) & 1) == 0:
                continue
            if S == (1 << a):
                reach[S, a] = 1 << a
                continue
            r = 0
            for b in range(n):
                if b != a and ((S >> b) & 1) == 1:
                    if (reach[S ^ (1 << b), a] & adj[b]) != 0:
                        r |= 1 << b
            reach[S, a] = r
    return reach


def _ham_reach_numpy(adj):
    adj = np.asarray(adj, dtype=np.int64)
    n = adj.shape[0]
    N = 1 << n
    masks = np.arange(N, dtype=np.int64)
    pc = popcount_array(masks)
    reach = np.zeros((N, n), dtype=np.int64)
    for a in range(n):
        reach[1 << a, a] = 1 << a
    for k in range(2, n + 1):
        layer = masks[pc == k]
        for a in range(n):
            la = layer[((layer >> a) & 1) == 1]
            r = np.zeros(la.shape[0], dtype=np.int64)
            for b in range(n):
                if b == a:
                    continue
                hit = (((la >> b) & 1) == 1) & ((reach[la ^ (1 << b), a] & adj[b]) != 0)
                r |= np.where(hit, np.int64(1 << b), np.int64(0))
            reach[la, a] = r
    return reach


# ---------------------------------------------------------------------------
# minimum even-ear DP over attached vertex sets


def _ear_dp_loops(adj, par2, reach):
    """DP over H = vertices already attached.

    best[H] is the least number of further even ears needed to finish an open
    ear-decomposition from H, choice[H] = (I, a, b) is an optimal next ear:
    internal vertex set I traversed by a Hamiltonian a-b path of G[I].
    first = (cost, C, a, b) describes an optimal first circuit on vertex set C
    rooted at its lowest vertex r, traversed r, a, ..., b, r.
    """
    n = adj.shape[0]
    N = 1 << n
    full = N - 1
    inf = np.int64(1) << np.int64(40)
    best = np.full(N, inf, dtype=np.int64)
    choice = np.full((N, 3), -1, dtype=np.int64)
    best[full] = 0
    nh = np.zeros(n, dtype=np.int64)
    nhc = np.zeros(n, dtype=np.int64)
    okx = np.zeros(n, dtype=np.int64)
    for H in range(full - 1, 0, -1):
        comp = full & ~H
        okm = 0
        for v in range(n):
            x = adj[v] & H
            nh[v] = x
            c = 0
            while x:
                x &= x - 1
                c += 1
            nhc[v] = c
            if c > 0:
                okm |= 1 << v
        for x in range(n):
            if (H >> x) & 1:
                msk = 0
                for v in range(n):
                    if (nh[v] & ~(1 << x)) != 0:
                        msk |= 1 << v
                okx[x] = msk
        bv = inf
        bI = -1
        ba = -1
        bb = -1
        I = comp
        while I > 0:
            rest = best[H | I]
            if rest < inf:
                cnt = 0
                y = I
                while y:
                    y &= y - 1
                    cnt += 1
                c = rest + (cnt & 1)
                if c < bv:
                    for a in range(n):
                        if ((I >> a) & 1) == 0 or nhc[a] == 0:
                            continue
                        if cnt == 1:
                            if nhc[a] >= 2:
                                bv = c
                                bI = I
                                ba = a
                                bb = a
                                break
                            continue
                        rb = reach[I, a] & ~(1 << a)
                        if nhc[a] >= 2:
                            cand = rb & okm
                        else:
                            xa = nh[a]
                            xi = 0
                            while ((xa >> xi) & 1) == 0:
                                xi += 1
                            cand = rb & okx[xi]
                        if cand != 0:
                            bi = 0
                            while ((cand >> bi) & 1) == 0:
                                bi += 1
                            bv = c
                            bI = I
                            ba = a
                            bb = bi
                            break
            I = (I - 1) & comp
        best[H] = bv
        choice[H, 0] = bI
        choice[H, 1] = ba
        choice[H, 2] = bb
    first = np.full(4, -1, dtype=np.int64)
    first[0] = inf
    for C in range(3, N):
        cnt = 0
        y = C
        while y:
            y &= y - 1
            cnt += 1
        if cnt < 2:
            continue
        rest = best[C]
        if rest >= inf:
            continue
        c = rest + (1 - (cnt & 1))
        if c >= first[0]:
            continue
        r = 0
        while ((C >> r) & 1) == 0:
            r += 1
        Cr = C & ~(1 << r)
        if cnt == 2:
            a = 0
            while ((Cr >> a) & 1) == 0:
                a += 1
            if (par2[r] >> a) & 1:
                first[0] = c
                first[1] = C
                first[2] = a
                first[3] = a
            continue
        for a in range(n):
            if ((Cr >> a) & 1) == 0 or ((adj[r] >> a) & 1) == 0:
                continue
            cand = reach[Cr, a] & adj[r] & ~(1 << a)
            if cand != 0:
                bi = 0
                while ((cand >> bi) & 1) == 0:
                    bi += 1
                first[0] = c
                first[1] = C
                first[2] = a
                first[3] = bi
                break
    return best, choice, first


def _ear_dp_numpy(adj, par2, reach):
    adj = np.asarray(adj, dtype=np.int64)
    n = adj.shape[0]
    N = 1 << n
    full = N - 1
    inf = INF
    pc_all = popcount_array(np.arange(N, dtype=np.int64))
    best = np.full(N, inf, dtype=np.int64)
    choice = np.full((N, 3), -1, dtype=np.int64)
    best[full] = 0
    for H in range(full - 1, 0, -1):
        comp = full & ~H
        nh = adj & H
        nhc = popcount_array(nh)
        okm = int(np.sum(np.where(nhc > 0, np.int64(1) << np.arange(n, dtype=np.int64), 0)))
        subs = _submasks_desc(comp)
        rest = best[H | subs]
        cnt = pc_all[subs]
        cost = np.where(rest < inf, rest + (cnt & 1), inf)
        fa = np.full(subs.shape[0], -1, dtype=np.int64)
        fb = np.full(subs.shape[0], -1, dtype=np.int64)
        single = cnt == 1
        for a in range(n):
            if ((comp >> a) & 1) == 0 or nhc[a] == 0:
                continue
            has = (((subs >> a) & 1) == 1) & (fa < 0)
            if not has.any():
                continue
            rb = reach[subs, a] & ~np.int64(1 << a)
            if nhc[a] >= 2:
                cand = rb & okm
                ok_single = True
            else:
                xi = int(nh[a]).bit_length() - 1
                okx = int(np.sum(np.where((nh & ~np.int64(1 << xi)) != 0, np.int64(1) << np.arange(n, dtype=np.int64), 0)))
                cand = rb & okx
                ok_single = False
            feas_multi = has & ~single & (cand != 0)
            feas_single = has & single & ok_single
            fa[feas_multi | feas_single] = a
            fb[feas_single] = a
            fb[feas_multi] = lowbit_index_array(cand[feas_multi])
        cost = np.where(fa >= 0, cost, inf)
        if cost.shape[0]:
            k = int(np.argmin(cost))
            if cost[k] < inf:
                best[H] = cost[k]
                choice[H] = (subs[k], fa[k], fb[k])
    first = np.full(4, -1, dtype=np.int64)
    first[0] = inf
    Cs = np.arange(3, N, dtype=np.int64)
    Cs = Cs[(pc_all[Cs] >= 2) & (best[Cs] < inf)]
    costs = best[Cs] + (1 - (pc_all[Cs] & 1))
    order = np.argsort(costs, kind="stable")
    for idx in order:
        C = int(Cs[idx])
        c = int(costs[idx])
        r = (C & -C).bit_length() - 1
        Cr = C & ~(1 << r)
        if pc_all[C] == 2:
            a = Cr.bit_length() - 1
            if (int(par2[r]) >> a) & 1:
                first[:] = (c, C, a, a)
                break
            continue
        found = False
        for a in range(n):
            if ((Cr >> a) & 1) == 0 or ((int(adj[r]) >> a) & 1) == 0:
                continue
            cand = int(reach[Cr, a]) & int(adj[r]) & ~(1 << a)
            if cand:
                first[:] = (c, C, a, (cand & -cand).bit_length() - 1)
                found = True
                break
        if found:
            break
    return best, choice, first


# ---------------------------------------------------------------------------
# perfect matching table over all subsets


def _matching_table_loops(dist):
    """g[S] = minimum perfect matching weight on S (even |S|), INF otherwise."""
    k = dist.shape[0]
    N = 1 << k
    inf = np.int64(1) << np.int64(40)
    g = np.full(N, inf, dtype=np.int64)
    g[0] = 0
    for S in range(1, N):
        c = 0
        y = S
        while y:
            y &= y - 1
            c += 1
        if c & 1:
            continue
        i = 0
        while ((S >> i) & 1) == 0:
            i += 1
        rest = S & ~(1 << i)
        bv = inf
        for j in range(i + 1, k):
            if (rest >> j) & 1:
                v = dist[i, j] + g[rest & ~(1 << j)]
                if v < bv:
                    bv = v
        g[S] = bv
    return g


def _matching_table_numpy(dist):
    dist = np.asarray(dist, dtype=np.int64)
    k = dist.shape[0]
    N = 1 << k
    masks = np.arange(N, dtype=np.int64)
    pc = popcount_array(masks)
    g = np.full(N, INF, dtype=np.int64)
    g[0] = 0
    for c in range(2, k + 1, 2):
        layer = masks[pc == c]
        i = lowbit_index_array(layer)
        rest = layer & ~(np.int64(1) << i)
        bv = np.full(layer.shape[0], INF, dtype=np.int64)
        for j in range(k):
            sel = (((rest >> j) & 1) == 1)
            if not sel.any():
                continue
            cand = dist[i[sel], j] + g[rest[sel] & ~np.int64(1 << j)]
            bv[sel] = np.minimum(bv[sel], cand)
        g[layer] = np.minimum(bv, INF)
    return g


# ---------------------------------------------------------------------------
# connected T-join: minimum |J| + 2 (components(J) - 1) over the T-join coset


def _coset_min_loops(eu, ev, n, j0, basis):
    d = basis.shape[0]
    inf = np.int64(1) << np.int64(40)
    parent = np.empty(n, dtype=np.int64)
    best = inf
    best_mask = np.int64(-1)
    cur = j0
    total = np.int64(1) << np.int64(d)
    i = np.int64(0)
    while i < total:
        if i > 0:
            t = 0
            x = i
            while (x & 1) == 0:
                x >>= 1
                t += 1
            cur ^= basis[t]
        cnt = 0
        y = cur
        while y:
            y &= y - 1
            cnt += 1
        if cnt < best:
            for v in range(n):
                parent[v] = v
            comps = n
            y = cur
            e = 0
            while y:
                if y & 1:
                    a = eu[e]
                    while parent[a] != a:
                        parent[a] = parent[parent[a]]
                        a = parent[a]
                    b = ev[e]
                    while parent[b] != b:
                        parent[b] = parent[parent[b]]
                        b = parent[b]
                    if a != b:
                        parent[a] = b
                        comps -= 1
                y >>= 1
                e += 1
            cost = cnt + 2 * (comps - 1)
            if cost < best:
                best = cost
                best_mask = cur
                if best == n - 1:
                    break
        i += 1
    return best, best_mask


def _coset_min_numpy(eu, ev, n, j0, basis, chunk_bits=14):
    eu = np.asarray(eu, dtype=np.int64)
    ev = np.asarray(ev, dtype=np.int64)
    basis = np.asarray(basis, dtype=np.int64)
    d = basis.shape[0]
    lo = min(d, chunk_bits)
    low = np.zeros(1, dtype=np.int64)
    for t in range(lo):
        low = np.concatenate([low, low ^ basis[t]])
    # visit the coset in the Gray-code order of the loop kernel so ties resolve alike:
    # gray(hi * 2^lo + j) = (gray(hi) << lo) ^ ((hi & 1) << (lo - 1)) ^ gray(j)
    j = np.arange(1 << lo, dtype=np.int64)
    low = low[j ^ (j >> 1)]
    best, best_mask = int(INF), -1
    for hi in range(1 << (d - lo)):
        base = int(j0)
        gh = hi ^ (hi >> 1)
        for t in range(d - lo):
            if (gh >> t) & 1:
                base ^= int(basis[lo + t])
        if hi & 1:
            base ^= int(basis[lo - 1])
        elems = low ^ np.int64(base)
        cnt = popcount_array(elems)
        keep = cnt < best
        if not keep.any():
            continue
        elems, cnt = elems[keep], cnt[keep]
        cost = cnt + 2 * (component_counts_numpy(elems, eu, ev, n) - 1)
        k = int(np.argmin(cost))
        if cost[k] < best:
            best, best_mask = int(cost[k]), int(elems[k])
    return np.int64(best), np.int64(best_mask)


# ---------------------------------------------------------------------------
# smallest 2-edge-connected spanning edge subset


def _min_2ec_subset_loops(eu, ev, n, k_lo):
    m = eu.shape[0]
    parent = np.empty(n, dtype=np.int64)
    for k in range(k_lo, m + 1):
        S = (np.int64(1) << np.int64(k)) - 1
        limit = np.int64(1) << np.int64(m)
        while S < limit:
            ok = True
            deg = np.zeros(n, dtype=np.int64)
            for e in range(m):
                if (S >> e) & 1:
                    deg[eu[e]] += 1
                    deg[ev[e]] += 1
            for v in range(n):
                if deg[v] < 2:
                    ok = False
                    break
            if ok:
                # every edge of S must lie in a cycle of S and S must be connected
                for skip in range(-1, m):
                    if skip >= 0 and ((S >> skip) & 1) == 0:
                        continue
                    for v in range(n):
                        parent[v] = v
                    comps = n
                    for e in range(m):
                        if e == skip or ((S >> e) & 1) == 0:
                            continue
                        a = eu[e]
                        while parent[a] != a:
                            a = parent[a]
                        b = ev[e]
                        while parent[b] != b:
                            b = parent[b]
                        if a != b:
                            parent[a] = b
                            comps -= 1
                    if comps != 1:
                        ok = False
                        break
            if ok:
                return S
            c = S & -S
            r = S + c
            S = (((r ^ S) >> 2) // c) | r
    return np.int64(-1)


def _min_2ec_subset_numpy(eu, ev, n, k_lo):
    eu = np.asarray(eu, dtype=np.int64)
    ev = np.asarray(ev, dtype=np.int64)
    m = eu.shape[0]
    inc = np.zeros(n, dtype=np.int64)
    for e in range(m):
        inc[eu[e]] |= np.int64(1) << np.int64(e)
        inc[ev[e]] |= np.int64(1) << np.int64(e)
    for k in range(k_lo, m + 1):
        combos = np.array(
            [sum(1 << e for e in c) for c in itertools.combinations(range(m), k)], dtype=np.int64
        )
        # Gosper's hack visits k-subsets in increasing numeric order
        combos.sort()
        ok = np.ones(combos.shape[0], dtype=bool)
        for v in range(n):
            ok &= popcount_array(combos & inc[v]) >= 2
        cand = combos[ok]
        if cand.shape[0] == 0:
            continue
        good = component_counts_numpy(cand, eu, ev, n) == 1
        for e in range(m):
            bit = np.int64(1) << np.int64(e)
            has = good & ((cand & bit) != 0)
            if has.any():
                good[has] = component_counts_numpy(cand[has] ^ bit, eu, ev, n) == 1
        if good.any():
            return np.int64(cand[np.argmax(good)])
    return np.int64(-1)


# ---------------------------------------------------------------------------
# removable pairing: every pair-respecting S inside R keeps the graph connected


def _pairing_violation_loops(eu, ev, n, pa, pb, singles):
    """First legal S (as an edge bitmask) whose removal disconnects G, or -1."""
    m = eu.shape[0]
    p = pa.shape[0]
    s = singles.shape[0]
    parent = np.empty(n, dtype=np.int64)
    digits = np.zeros(p + s, dtype=np.int64)
    full = (np.int64(1) << np.int64(m)) - 1
    while True:
        S = np.int64(0)
        for i in range(p):
            if digits[i] == 1:
                S |= np.int64(1) << pa[i]
            elif digits[i] == 2:
                S |= np.int64(1) << pb[i]
        for i in range(s):
            if digits[p + i] == 1:
                S |= np.int64(1) << singles[i]
        keep = full & ~S
        for v in range(n):
            parent[v] = v
        comps = n
        for e in range(m):
            if (keep >> e) & 1:
                a = eu[e]
                while parent[a] != a:
                    a = parent[a]
                b = ev[e]
                while parent[b] != b:
                    b = parent[b]
                if a != b:
                    parent[a] = b
                    comps -= 1
        if comps != 1:
            return S
        # mixed-radix increment: radix 3 for pairs, 2 for singles
        i = 0
        while i < p + s:
            radix = 3 if i < p else 2
            digits[i] += 1
            if digits[i] < radix:
                break
            digits[i] = 0
            i += 1
        if i == p + s:
            return np.int64(-1)


def _pairing_violation_numpy(eu, ev, n, pa, pb, singles):
    eu = np.asarray(eu, dtype=np.int64)
    ev = np.asarray(ev, dtype=np.int64)
    m = eu.shape[0]
    options = [(0, 1 << int(a), 1 << int(b)) for a, b in zip(pa, pb)]
    options += [(0, 1 << int(e)) for e in singles]
    # same enumeration order as the loop kernel (first digit fastest)
    masks = np.array([sum(c) for c in itertools.product(*reversed(options))], dtype=np.int64)
    full = (1 << m) - 1
    comps = component_counts_numpy(np.int64(full) & ~masks, eu, ev, n)
    bad = np.nonzero(comps != 1)[0]
    return np.int64(masks[bad[0]]) if bad.shape[0] else np.int64(-1)


# ---------------------------------------------------------------------------

_ham_reach_jit = njit(_ham_reach_loops)
_ear_dp_jit = njit(_ear_dp_loops)
_matching_table_jit = njit(_matching_table_loops)
_coset_min_jit = njit(_coset_min_loops)
_min_2ec_subset_jit = njit(_min_2ec_subset_loops)
_pairing_violation_jit = njit(_pairing_violation_loops)

ham_reach = select(_ham_reach_jit, _ham_reach_numpy)
ear_dp = select(_ear_dp_jit, _ear_dp_numpy)
matching_table = select(_matching_table_jit, _matching_table_numpy)
coset_min = select(_coset_min_jit, _coset_min_numpy)
min_2ec_subset = select(_min_2ec_subset_jit, _min_2ec_subset_numpy)
pairing_violation = select(_pairing_violation_jit, _pairing_violation_numpy)

VARIANTS = {
    "ham_reach": (_ham_reach_jit, _ham_reach_numpy),
    "ear_dp": (_ear_dp_jit, _ear_dp_numpy),
    "matching_table": (_matching_table_jit, _matching_table_numpy),
    "coset_min": (_coset_min_jit, _coset_min_numpy),
    "min_2ec_subset": (_min_2ec_subset_jit, _min_2ec_subset_numpy),
    "pairing_violation": (_pairing_violation_jit, _pairing_violation_numpy),
}
