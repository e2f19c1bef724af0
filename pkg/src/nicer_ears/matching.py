"""Exact weighted matching and the T-join reductions built on it.

The matching solver is the primal-dual blossom method in its O(n^3) form
(Edmonds, Gabow, Galil).  All arithmetic is on Python integers; edge weights
enter the slack as ``2 * w`` so that every dual variable stays integral.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import GraphError, InfeasibleError, check
from .graph import Multigraph, SolutionMultiset, UnionFind, components, odd_vertices
from .pairing import RemovablePairing

__all__ = [
    "max_weight_matching",
    "min_weight_perfect_matching",
    "WeightedJoinProblem",
    "TJoinResult",
    "min_t_join",
    "tau",
    "constrained_odd_join",
    "OddJoinResult",
]


class _BlossomSolver:
    """State of one maximum-weight matching computation.

    Vertices are ``0..n-1``; blossoms get ids ``n..2n-1``.  An edge ``k`` has
    two endpoint slots ``2k`` and ``2k+1`` so that ``slot ^ 1`` is the far end.
    ``label`` is 0 (free), 1 (S), 2 (T); bit 4 marks blossoms during a scan.
    """

    def __init__(self, n: int, edges: Sequence[tuple[int, int, int]], maxcardinality: bool):
        self.n = n
        self.edges = list(edges)
        self.maxcard = maxcardinality
        m = len(self.edges)
        self.endpoint = [self.edges[p // 2][p % 2] for p in range(2 * m)]
        self.neighbend: list[list[int]] = [[] for _ in range(n)]
        for k, (i, j, _w) in enumerate(self.edges):
            self.neighbend[i].append(2 * k + 1)
            self.neighbend[j].append(2 * k)
        maxw = max([0] + [w for _, _, w in self.edges])
        self.mate = [-1] * n
        self.label = [0] * (2 * n)
        self.labelend = [-1] * (2 * n)
        self.inblossom = list(range(n))
        self.parent = [-1] * (2 * n)
        self.childs: list[list[int] | None] = [None] * (2 * n)
        self.base = list(range(n)) + [-1] * n
        self.endps: list[list[int] | None] = [None] * (2 * n)
        self.bestedge = [-1] * (2 * n)
        self.bestedges: list[list[int] | None] = [None] * (2 * n)
        self.unused = list(range(n, 2 * n))
        self.dual = [maxw] * n + [0] * n
        self.allow = [False] * m
        self.queue: list[int] = []

    def slack(self, k: int) -> int:
        i, j, w = self.edges[k]
        return self.dual[i] + self.dual[j] - 2 * w

    def leaves(self, b: int):
        if b < self.n:
            yield b
            return
        stack = [b]
        while stack:
            t = stack.pop()
            if t < self.n:
                yield t
            else:
                stack.extend(reversed(self.childs[t]))

    def assign_label(self, w: int, t: int, p: int) -> None:
        while True:
            b = self.inblossom[w]
            self.label[w] = self.label[b] = t
            self.labelend[w] = self.labelend[b] = p
            self.bestedge[w] = self.bestedge[b] = -1
            if t == 1:
                self.queue.extend(self.leaves(b))
                return
            base = self.base[b]
            mb = self.mate[base]
            w, t, p = self.endpoint[mb], 1, mb ^ 1

    def scan_blossom(self, v: int, w: int) -> int:
        """Trace back from v and w; return the common base or -1 for an augmenting path."""
        path = []
        base = -1
        while v != -1 or w != -1:
            b = self.inblossom[v]
            if self.label[b] & 4:
                base = self.base[b]
                break
            path.append(b)
            self.label[b] = 5
            if self.labelend[b] == -1:
                v = -1
            else:
                v = self.endpoint[self.labelend[b]]
                b = self.inblossom[v]
                v = self.endpoint[self.labelend[b]]
            if w != -1:
                v, w = w, v
        for b in path:
            self.label[b] = 1
        return base

    def add_blossom(self, base: int, k: int) -> None:
        v, w, _ = self.edges[k]
        ib = self.inblossom
        bb, bv, bw = ib[base], ib[v], ib[w]
        b = self.unused.pop()
        self.base[b] = base
        self.parent[b] = -1
        self.parent[bb] = b
        path: list[int] = []
        endps: list[int] = []
        self.childs[b], self.endps[b] = path, endps
        while bv != bb:
            self.parent[bv] = b
            path.append(bv)
            endps.append(self.labelend[bv])
            v = self.endpoint[self.labelend[bv]]
            bv = ib[v]
        path.append(bb)
        path.reverse()
        endps.reverse()
        endps.append(2 * k)
        while bw != bb:
            self.parent[bw] = b
            path.append(bw)
            endps.append(self.labelend[bw] ^ 1)
            w = self.endpoint[self.labelend[bw]]
            bw = ib[w]
        self.label[b] = 1
        self.labelend[b] = self.labelend[bb]
        self.dual[b] = 0
        for x in list(self.leaves(b)):
            if self.label[ib[x]] == 2:
                self.queue.append(x)
            ib[x] = b
        best_to = [-1] * (2 * self.n)
        for sub in path:
            if self.bestedges[sub] is None:
                lists = [[p // 2 for p in self.neighbend[x]] for x in self.leaves(sub)]
            else:
                lists = [self.bestedges[sub]]
            for lst in lists:
                for kk in lst:
                    i, j, _ = self.edges[kk]
                    if ib[j] == b:
                        i, j = j, i
                    bj = ib[j]
                    if bj != b and self.label[bj] == 1 and (
                        best_to[bj] == -1 or self.slack(kk) < self.slack(best_to[bj])
                    ):
                        best_to[bj] = kk
            self.bestedges[sub] = None
            self.bestedge[sub] = -1
        self.bestedges[b] = [kk for kk in best_to if kk != -1]
        self.bestedge[b] = -1
        for kk in self.bestedges[b]:
            if self.bestedge[b] == -1 or self.slack(kk) < self.slack(self.bestedge[b]):
                self.bestedge[b] = kk

    def expand_blossom(self, b: int, endstage: bool) -> None:
        n = self.n
        for s in self.childs[b]:
            self.parent[s] = -1
            if s < n:
                self.inblossom[s] = s
            elif endstage and self.dual[s] == 0:
                self.expand_blossom(s, endstage)
            else:
                for x in self.leaves(s):
                    self.inblossom[x] = s
        if not endstage and self.label[b] == 2:
            childs, endps = self.childs[b], self.endps[b]
            entry = self.inblossom[self.endpoint[self.labelend[b] ^ 1]]
            j = childs.index(entry)
            if j & 1:
                j -= len(childs)
                jstep, trick = 1, 0
            else:
                jstep, trick = -1, 1
            p = self.labelend[b]
            while j != 0:
                self.label[self.endpoint[p ^ 1]] = 0
                self.label[self.endpoint[endps[j - trick] ^ trick ^ 1]] = 0
                self.assign_label(self.endpoint[p ^ 1], 2, p)
                self.allow[endps[j - trick] // 2] = True
                j += jstep
                p = endps[j - trick] ^ trick
                self.allow[p // 2] = True
                j += jstep
            bv = childs[j]
            self.label[self.endpoint[p ^ 1]] = self.label[bv] = 2
            self.labelend[self.endpoint[p ^ 1]] = self.labelend[bv] = p
            self.bestedge[bv] = -1
            j += jstep
            while childs[j] != entry:
                bv = childs[j]
                if self.label[bv] == 1:
                    j += jstep
                    continue
                hit = -1
                for x in self.leaves(bv):
                    if self.label[x] != 0:
                        hit = x
                        break
                if hit != -1:
                    self.label[hit] = 0
                    self.label[self.endpoint[self.mate[self.base[bv]]]] = 0
                    self.assign_label(hit, 2, self.labelend[hit])
                j += jstep
        self.label[b] = self.labelend[b] = -1
        self.childs[b] = self.endps[b] = None
        self.base[b] = -1
        self.bestedges[b] = None
        self.bestedge[b] = -1
        self.unused.append(b)

    def augment_blossom(self, b: int, v: int) -> None:
        t = v
        while self.parent[t] != b:
            t = self.parent[t]
        if t >= self.n:
            self.augment_blossom(t, v)
        childs, endps = self.childs[b], self.endps[b]
        i = j = childs.index(t)
        if i & 1:
            j -= len(childs)
            jstep, trick = 1, 0
        else:
            jstep, trick = -1, 1
        while j != 0:
            j += jstep
            t = childs[j]
            p = endps[j - trick] ^ trick
            if t >= self.n:
                self.augment_blossom(t, self.endpoint[p])
            j += jstep
            t = childs[j]
            if t >= self.n:
                self.augment_blossom(t, self.endpoint[p ^ 1])
            self.mate[self.endpoint[p]] = p ^ 1
            self.mate[self.endpoint[p ^ 1]] = p
        self.childs[b] = childs[i:] + childs[:i]
        self.endps[b] = endps[i:] + endps[:i]
        self.base[b] = self.base[self.childs[b][0]]

    def augment_matching(self, k: int) -> None:
        v, w, _ = self.edges[k]
        for s, p in ((v, 2 * k + 1), (w, 2 * k)):
            while True:
                bs = self.inblossom[s]
                if bs >= self.n:
                    self.augment_blossom(bs, s)
                self.mate[s] = p
                if self.labelend[bs] == -1:
                    break
                t = self.endpoint[self.labelend[bs]]
                bt = self.inblossom[t]
                s = self.endpoint[self.labelend[bt]]
                j = self.endpoint[self.labelend[bt] ^ 1]
                if bt >= self.n:
                    self.augment_blossom(bt, j)
                self.mate[j] = self.labelend[bt]
                p = self.labelend[bt] ^ 1

    def _stage(self) -> bool:
        """One augmentation stage; False when no augmenting path exists."""
        n = self.n
        ib, label = self.inblossom, self.label
        while True:
            while self.queue:
                v = self.queue.pop()
                for p in self.neighbend[v]:
                    k = p // 2
                    w = self.endpoint[p]
                    if ib[v] == ib[w]:
                        continue
                    kslack = 0
                    if not self.allow[k]:
                        kslack = self.slack(k)
                        if kslack <= 0:
                            self.allow[k] = True
                    if self.allow[k]:
                        if label[ib[w]] == 0:
                            self.assign_label(w, 2, p ^ 1)
                        elif label[ib[w]] == 1:
                            base = self.scan_blossom(v, w)
                            if base >= 0:
                                self.add_blossom(base, k)
                            else:
                                self.augment_matching(k)
                                return True
                        elif label[w] == 0:
                            label[w] = 2
                            self.labelend[w] = p ^ 1
                    elif label[ib[w]] == 1:
                        b = ib[v]
                        if self.bestedge[b] == -1 or kslack < self.slack(self.bestedge[b]):
                            self.bestedge[b] = k
                    elif label[w] == 0:
                        if self.bestedge[w] == -1 or kslack < self.slack(self.bestedge[w]):
                            self.bestedge[w] = k
            # dual adjustment
            dtype, delta, dedge, dblossom = -1, 0, -1, -1
            if not self.maxcard:
                dtype, delta = 1, min(self.dual[:n])
            for v in range(n):
                if label[ib[v]] == 0 and self.bestedge[v] != -1:
                    d = self.slack(self.bestedge[v])
                    if dtype == -1 or d < delta:
                        dtype, delta, dedge = 2, d, self.bestedge[v]
            for b in range(2 * n):
                if self.parent[b] == -1 and label[b] == 1 and self.bestedge[b] != -1:
                    ks = self.slack(self.bestedge[b])
                    check(ks % 2 == 0, "odd slack between S-blossoms")
                    d = ks // 2
                    if dtype == -1 or d < delta:
                        dtype, delta, dedge = 3, d, self.bestedge[b]
            for b in range(n, 2 * n):
                if self.base[b] >= 0 and self.parent[b] == -1 and label[b] == 2 and (
                    dtype == -1 or self.dual[b] < delta
                ):
                    dtype, delta, dblossom = 4, self.dual[b], b
            if dtype == -1:
                dtype, delta = 1, max(0, min(self.dual[:n]))
            for v in range(n):
                if label[ib[v]] == 1:
                    self.dual[v] -= delta
                elif label[ib[v]] == 2:
                    self.dual[v] += delta
            for b in range(n, 2 * n):
                if self.base[b] >= 0 and self.parent[b] == -1:
                    if label[b] == 1:
                        self.dual[b] += delta
                    elif label[b] == 2:
                        self.dual[b] -= delta
            if dtype == 1:
                return False
            if dtype == 2:
                self.allow[dedge] = True
                i, j, _ = self.edges[dedge]
                if label[ib[i]] == 0:
                    i = j
                self.queue.append(i)
            elif dtype == 3:
                self.allow[dedge] = True
                self.queue.append(self.edges[dedge][0])
            else:
                self.expand_blossom(dblossom, False)

    def solve(self) -> list[int]:
        n = self.n
        if not self.edges:
            return [-1] * n
        for _ in range(n):
            self.label[:] = [0] * (2 * n)
            self.bestedge[:] = [-1] * (2 * n)
            self.bestedges[n:] = [None] * n
            self.allow[:] = [False] * len(self.edges)
            self.queue[:] = []
            for v in range(n):
                if self.mate[v] == -1 and self.label[self.inblossom[v]] == 0:
                    self.assign_label(v, 1, -1)
            if not self._stage():
                break
            for b in range(n, 2 * n):
                if self.parent[b] == -1 and self.base[b] >= 0 and self.label[b] == 1 and self.dual[b] == 0:
                    self.expand_blossom(b, True)
        return [self.endpoint[p] if p >= 0 else -1 for p in self.mate]


def max_weight_matching(
    n: int, edges: Iterable[tuple[int, int, int]], maxcardinality: bool = False
) -> list[int]:
    """Maximum-weight matching on vertices ``0..n-1``; returns the mate array.

    With ``maxcardinality`` the matching has maximum cardinality first and
    maximum weight among those.  Weights must be integers.
    """
    edges = [(int(i), int(j), int(w)) for i, j, w in edges]
    for i, j, w in edges:
        if i == j or not (0 <= i < n and 0 <= j < n):
            raise GraphError(f"bad matching edge ({i}, {j})")
    return _BlossomSolver(n, edges, maxcardinality).solve()


def min_weight_perfect_matching(weight: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    """Minimum-weight perfect matching of the complete graph given by a weight matrix.

    ``weight[i][j]`` must be a finite integer for every pair.  Pairs are
    returned as ``(i, j)`` with ``i < j`` in increasing order of ``i``.
    """
    k = len(weight)
    if k % 2:
        raise GraphError(f"perfect matching needs an even vertex count, got {k}")
    if k == 0:
        return []
    big = max(int(weight[i][j]) for i in range(k) for j in range(k) if i != j) + 1
    edges = [(i, j, big - int(weight[i][j])) for i in range(k) for j in range(i + 1, k)]
    mate = max_weight_matching(k, edges, maxcardinality=True)
    check(all(x >= 0 for x in mate), "complete graph matching is not perfect")
    return [(i, mate[i]) for i in range(k) if i < mate[i]]


# ---------------------------------------------------------------------------
# T-joins


@dataclass(frozen=True, eq=False)
class WeightedJoinProblem:
    host: Multigraph
    T: frozenset[int]
    weight: tuple[int, ...] | None = None  # None means all ones

    def weights(self) -> list[int]:
        return [1] * self.host.m if self.weight is None else list(self.weight)


@dataclass(frozen=True, eq=False)
class TJoinResult:
    solution: SolutionMultiset
    weight: int

    @property
    def edges(self) -> list[int]:
        return self.solution.support()


def _shortest_paths(g: Multigraph, src: int, w: Sequence[int], allowed: Sequence[bool]) -> tuple[list[int], list[int]]:
    """Distances and predecessor edges from ``src`` (nonnegative integer weights)."""
    inf = float("inf")
    dist: list = [inf] * g.n
    pred = [-1] * g.n
    dist[src] = 0
    if all(w[e] == 1 for e in range(g.m) if allowed[e]):
        dq = deque([src])
        while dq:
            v = dq.popleft()
            for e in g.incident(v):
                if not allowed[e]:
                    continue
                x = g.other(e, v)
                if dist[x] == inf:
                    dist[x] = dist[v] + 1
                    pred[x] = e
                    dq.append(x)
        return dist, pred
    heap = [(0, src)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist[v]:
            continue
        for e in g.incident(v):
            if not allowed[e]:
                continue
            x = g.other(e, v)
            nd = d + w[e]
            if nd < dist[x]:
                dist[x] = nd
                pred[x] = e
                heapq.heappush(heap, (nd, x))
    return dist, pred


def min_t_join(
    problem: WeightedJoinProblem | Multigraph,
    T: Iterable[int] | None = None,
    weight: Sequence[int] | None = None,
    allowed: Iterable[int] | None = None,
) -> TJoinResult:
    """Minimum-weight T-join.

    Accepts either a :class:`WeightedJoinProblem` or ``(graph, T, weight)``.
    ``allowed`` restricts the join to a subset of edge-ids (a spanning edge
    subgraph view without re-indexing).  Negative weights are handled by
    flipping: with N the negative edges, solve for ``T ^ odd(N)`` under
    absolute weights and return ``N ^ result``.
    """
    if isinstance(problem, WeightedJoinProblem):
        g, Tset, w = problem.host, frozenset(problem.T), problem.weights()
    else:
        g = problem
        Tset = frozenset(T or ())
        w = [1] * g.m if weight is None else [int(x) for x in weight]
    if len(w) != g.m:
        raise GraphError("weight vector length differs from edge count")
    if len(Tset) % 2:
        raise InfeasibleError(f"|T| = {len(Tset)} is odd")
    ok = [False] * g.m
    for e in (range(g.m) if allowed is None else allowed):
        ok[e] = True
    active = [(g.edges[e]) for e in range(g.m) if ok[e]]
    for comp in components(g.n, active):
        if len(Tset.intersection(comp)) % 2:
            raise InfeasibleError("T has odd intersection with a connected component")
    neg = [e for e in range(g.m) if ok[e] and w[e] < 0]
    target = set(Tset) ^ set(odd_vertices(g, neg))
    wabs = [abs(x) for x in w]
    chosen = set(neg)
    if target:
        terms = sorted(target)
        paths = {}
        for t in terms:
            paths[t] = _shortest_paths(g, t, wabs, ok)
        uf = UnionFind(g.n)
        for u, v in active:
            uf.union(u, v)
        groups: dict[int, list[int]] = {}
        for t in terms:
            groups.setdefault(uf.find(t), []).append(t)
        for grp in groups.values():
            mat = [[paths[a][0][b] if a != b else 0 for b in grp] for a in grp]
            for i, j in min_weight_perfect_matching(mat):
                a, b = grp[i], grp[j]
                pred = paths[a][1]
                x = b
                while x != a:
                    e = pred[x]
                    chosen ^= {e}
                    x = g.other(e, x)
    sol = SolutionMultiset.from_edges(g, sorted(chosen))
    total = sum(w[e] for e in chosen)
    check(sol.odd_vertices() == Tset, "T-join parity check failed")
    return TJoinResult(sol, total)


def tau(g: Multigraph, T: Iterable[int]) -> int:
    """Minimum cardinality of a T-join."""
    return min_t_join(g, T).weight


# ---------------------------------------------------------------------------
# odd join with at most one edge from each pair


@dataclass(frozen=True, eq=False)
class OddJoinResult:
    edges: tuple[int, ...]
    weight: int
    auxiliary_n: int
    auxiliary_m: int


def constrained_odd_join(g: Multigraph, pairing: RemovablePairing, check_bound: bool = True) -> OddJoinResult:
    """Minimum odd join F (T = odd-degree vertices of g) using at most one edge of each pair.

    Weights are -1 on R and +1 elsewhere.  Each pair {vw, vw'} is replaced by
    a new vertex p with edges vp (weight 0), pw, pw' (the pair weights); the
    three edges at p get an extra M = |E(G')| + 1 so that any optimal join uses
    exactly one of them.
    """
    pairing.validate(g)
    R = set(pairing.R)
    in_pair: dict[int, int] = {}
    for idx, (e1, e2) in enumerate(pairing.pairs):
        in_pair[e1] = idx
        in_pair[e2] = idx
    aux_edges: list[tuple[int, int]] = []
    aux_w: list[int] = []
    back: list[int] = []  # auxiliary edge -> original edge-id or -1
    for e, (u, v) in enumerate(g.edges):
        if e in in_pair:
            continue
        aux_edges.append((u, v))
        aux_w.append(-1 if e in R else 1)
        back.append(e)
    big_start = len(aux_edges)
    n_aux = g.n
    for e1, e2 in pairing.pairs:
        v = pairing.shared_vertex(g, (e1, e2))
        p = n_aux
        n_aux += 1
        aux_edges.append((v, p))
        aux_w.append(0)
        back.append(-1)
        for e in (e1, e2):
            aux_edges.append((p, g.other(e, v)))
            aux_w.append(-1 if e in R else 1)
            back.append(e)
    big = len(aux_edges) + 1
    for i in range(big_start, len(aux_edges)):
        aux_w[i] += big
    aux = Multigraph(n_aux, tuple(aux_edges))
    T_aux = odd_vertices(aux, range(aux.m))
    res = min_t_join(aux, T_aux, aux_w)
    F = sorted(back[i] for i in res.edges if back[i] >= 0)
    for e1, e2 in pairing.pairs:
        check(not (e1 in F and e2 in F), "odd join uses both edges of a pair")
    Fw = sum(-1 if e in R else 1 for e in F)
    check(odd_vertices(g, F) == odd_vertices(g, range(g.m)), "constrained join is not an odd join")
    if check_bound:
        check(3 * Fw <= g.m - 2 * len(R), f"odd join weight {Fw} exceeds (|E| - 2|R|)/3 = ({g.m} - {2 * len(R)})/3")
    return OddJoinResult(tuple(F), Fw, aux.n, aux.m)
