"""Ear-decompositions: construction, minimum even ears, nice rewriting, ear induction."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import CapabilityError, GraphError, InternalError, check
from .graph import Multigraph, SolutionMultiset, blocks, connectivity_report

__all__ = [
    "Ear",
    "EarDecomposition",
    "Eardrum",
    "EvenEarResult",
    "EarReduction",
    "open_ear_decomposition",
    "min_even_ear_decomposition",
    "frank_phi",
    "phi_lower_bound",
    "even_ear_decomposition",
    "make_nice",
    "eardrum_of",
    "ear_reduction_step",
    "reduce_ear",
    "decomposition_from_paths",
]


@dataclass(frozen=True)
class Ear:
    """A path (open) or circuit (closed) given by its vertex sequence and edge-ids.

    ``vertices`` has one more entry than ``edges``; a closed ear starts and
    ends at its single endpoint.
    """

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.vertices) != len(self.edges) + 1 or not self.edges:
            raise GraphError("an ear needs k >= 1 edges and k + 1 vertex entries")

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def closed(self) -> bool:
        return self.vertices[0] == self.vertices[-1]

    @property
    def kind(self) -> str:
        return "closed" if self.closed else "open"

    @property
    def endpoints(self) -> tuple[int, ...]:
        if self.closed:
            return (self.vertices[0],)
        return (self.vertices[0], self.vertices[-1])

    @property
    def inner(self) -> tuple[int, ...]:
        return self.vertices[1:-1]

    @property
    def trivial(self) -> bool:
        return self.length == 1

    @property
    def short(self) -> bool:
        return self.length in (2, 3)

    @property
    def even(self) -> bool:
        return self.length % 2 == 0

    @property
    def phi(self) -> int:
        return 1 if self.even else 0

    def clean(self, T: Iterable[int]) -> bool:
        return self.short and not set(self.inner) & set(T)

    def gamma(self, T: Iterable[int]) -> int:
        return 1 if self.clean(T) else 0

    def reversed(self) -> "Ear":
        return Ear(self.vertices[::-1], self.edges[::-1])

    def oriented_from(self, v: int) -> "Ear":
        if self.vertices[0] == v:
            return self
        if self.vertices[-1] == v:
            return self.reversed()
        raise InternalError(f"{v} is not an endpoint of ear {self.vertices}")

    def rotated_to(self, v: int, pos: int) -> "Ear":
        """Orientation of an open ear in which ``v`` sits at index ``pos``."""
        if self.vertices[pos] == v:
            return self
        r = self.reversed()
        if r.vertices[pos] == v:
            return r
        raise InternalError(f"cannot place {v} at position {pos} of {self.vertices}")


@dataclass(frozen=True, eq=False)
class EarDecomposition:
    """Ordered ears P_1..P_k of ``host``; P_0 is the single vertex ``root``."""

    host: Multigraph
    ears: tuple[Ear, ...]
    root: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "ears", tuple(self.ears))
        self.validate()

    def validate(self) -> None:
        g = self.host
        covered = {self.root}
        used = [False] * g.m
        for idx, ear in enumerate(self.ears):
            ends = set(ear.endpoints)
            if not ends <= covered:
                raise GraphError(f"ear {idx} has an endpoint outside earlier ears")
            if idx == 0 and not (ear.closed and ear.vertices[0] == self.root):
                raise GraphError("the first ear must be a circuit through the root")
            inner = ear.inner
            if len(set(inner)) != len(inner) or set(inner) & covered:
                raise GraphError(f"ear {idx} revisits a vertex")
            for pos, e in enumerate(ear.edges):
                if not 0 <= e < g.m or used[e]:
                    raise GraphError(f"ear {idx} reuses or misnames edge {e}")
                used[e] = True
                if set(g.edges[e]) != {ear.vertices[pos], ear.vertices[pos + 1]}:
                    raise GraphError(f"edge {e} does not join consecutive vertices of ear {idx}")
            covered.update(inner)
        if not all(used):
            raise GraphError("some edge lies in no ear")
        if len(covered) != g.n:
            raise GraphError("some vertex lies in no ear")
        check(len(self.ears) == g.m - g.n + 1, "ear count differs from m - n + 1")

    # statistics -----------------------------------------------------------

    @property
    def k(self) -> int:
        return len(self.ears)

    @cached_property
    def even_count(self) -> int:
        return sum(e.phi for e in self.ears)

    @cached_property
    def owner(self) -> dict[int, int]:
        """Vertex -> index of the ear having it as an internal vertex (root absent)."""
        out = {}
        for i, ear in enumerate(self.ears):
            for v in ear.inner:
                out[v] = i
        return out

    @cached_property
    def attached(self) -> tuple[tuple[int, ...], ...]:
        """For each ear, the nontrivial ears attached to it (in order)."""
        att: list[list[int]] = [[] for _ in self.ears]
        for j, ear in enumerate(self.ears):
            if ear.trivial:
                continue
            for x in set(ear.endpoints):
                i = self.owner.get(x)
                if i is not None and j not in att[i]:
                    att[i].append(j)
        return tuple(tuple(sorted(a)) for a in att)

    @cached_property
    def pendant(self) -> frozenset[int]:
        return frozenset(i for i, e in enumerate(self.ears) if not e.trivial and not self.attached[i])

    @property
    def pi(self) -> int:
        return len(self.pendant)

    @property
    def pi2(self) -> int:
        return sum(1 for i in self.pendant if self.ears[i].length == 2)

    @property
    def pi3(self) -> int:
        return sum(1 for i in self.pendant if self.ears[i].length == 3)

    @property
    def is_open(self) -> bool:
        return all(not e.closed for e in self.ears[1:])

    def nontrivial(self) -> list[int]:
        return [i for i, e in enumerate(self.ears) if not e.trivial]

    def short_ears(self) -> list[int]:
        return [i for i, e in enumerate(self.ears) if e.short]

    def nice_violations(self, phi: int | None = None) -> list[str]:
        out = []
        if phi is not None and self.even_count != phi:
            out.append(f"(i) {self.even_count} even ears, phi = {phi}")
        for i in self.short_ears():
            if i not in self.pendant:
                out.append(f"(ii) short ear {i} is not pendant")
        owner = {v: i for i in self.short_ears() for v in self.ears[i].inner}
        for e, (u, v) in enumerate(self.host.edges):
            if u in owner and v in owner and owner[u] != owner[v]:
                out.append(f"(iii) edge {e} joins short ears {owner[u]} and {owner[v]}")
        return out

    def is_nice(self, phi: int | None = None) -> bool:
        return not self.nice_violations(phi)

    def dump(self, T: Iterable[int] = ()) -> str:
        T = frozenset(T)
        lines = []
        for i, ear in enumerate(self.ears):
            flags = []
            if ear.trivial:
                flags.append("trivial")
            if ear.short:
                flags.append("short")
            if i in self.pendant:
                flags.append("pendant")
            if ear.even:
                flags.append("even")
            if ear.clean(T):
                flags.append("clean")
            ids = ",".join(str(e) for e in ear.edges)
            lines.append(f"ear {i} kind={ear.kind} edges={ids} flags={'|'.join(flags) or '-'}")
        return "\n".join(lines)


def _pick_edges(g: Multigraph, path: Sequence[int], used: set[int]) -> tuple[int, ...]:
    """Lowest unused edge-id between each pair of consecutive vertices."""
    out = []
    for a, b in zip(path, path[1:]):
        cands = [e for e in g.incident(a) if e not in used and g.other(e, a) == b]
        if not cands:
            raise InternalError(f"no unused edge between {a} and {b}")
        e = min(cands)
        used.add(e)
        out.append(e)
    return tuple(out)


def decomposition_from_paths(
    g: Multigraph, paths: Sequence[Sequence[int]], root: int | None = None
) -> EarDecomposition:
    """Build a decomposition from vertex paths of the nontrivial ears.

    Edge-ids are assigned greedily (lowest unused id); every edge not used by
    a path becomes a 1-ear, in edge-id order.
    """
    used: set[int] = set()
    ears = [Ear(tuple(p), _pick_edges(g, p, used)) for p in paths]
    ears += [Ear(g.edges[e], (e,)) for e in range(g.m) if e not in used]
    if root is None:
        root = paths[0][0] if paths else 0
    return EarDecomposition(g, tuple(ears), root)


# ---------------------------------------------------------------------------
# open ear-decomposition (any)


def open_ear_decomposition(g: Multigraph) -> EarDecomposition:
    """Open ear-decomposition of a 2-vertex-connected multigraph."""
    if not connectivity_report(g).is_2VC:
        raise GraphError("open ear-decomposition needs a 2-vertex-connected graph")
    if g.m == 0:
        return EarDecomposition(g, (), 0)
    e0 = 0
    r, s = g.edges[e0]
    # first circuit: edge e0 plus a shortest s-r path avoiding e0
    prev = {s: -1}
    order = [s]
    for v in order:
        if v == r:
            break
        for e in g.incident(v):
            if e == e0:
                continue
            w = g.other(e, v)
            if w not in prev:
                prev[w] = e
                order.append(w)
    path_edges = []
    v = r
    while v != s:
        e = prev[v]
        path_edges.append(e)
        v = g.other(e, v)
    verts = [r]
    for e in path_edges:
        verts.append(g.other(e, verts[-1]))
    # verts runs r ... s; close with e0
    ears = [Ear(tuple(verts) + (r,), tuple(path_edges) + (e0,))]
    used = set(path_edges) | {e0}
    covered = set(verts)
    trivial = []
    while len(covered) < g.n:
        progress = False
        for e in range(g.m):
            if e in used:
                continue
            u, x = g.edges[e]
            if (u in covered) == (x in covered):
                continue
            if x in covered:
                u, x = x, u
            # search from x through uncovered vertices to a covered vertex other than u
            pred = {x: e}
            queue = [x]
            hit = -1
            for y in queue:
                for f in g.incident(y):
                    if f in used or f == pred[y]:
                        continue
                    z = g.other(f, y)
                    if z == u or z in pred:
                        continue
                    pred[z] = f
                    if z in covered:
                        hit = z
                        break
                    queue.append(z)
                if hit >= 0:
                    break
            check(hit >= 0, "2-vertex-connectivity violated during ear search")
            chain = []
            z = hit
            while z != x:
                f = pred[z]
                chain.append(f)
                z = g.other(f, z)
            chain.append(e)
            chain.reverse()
            pv = [u]
            for f in chain:
                pv.append(g.other(f, pv[-1]))
            ears.append(Ear(tuple(pv), tuple(chain)))
            used.update(chain)
            covered.update(pv)
            progress = True
            break
        check(progress, "no ear found")
    trivial = [Ear(g.edges[e], (e,)) for e in range(g.m) if e not in used]
    return EarDecomposition(g, tuple(ears + trivial), r)


# ---------------------------------------------------------------------------
# minimum number of even ears


@dataclass(frozen=True, eq=False)
class EvenEarResult:
    decomposition: EarDecomposition
    phi: int
    T: frozenset[int]  # a set with tau(G, T) = (n + phi - 1) / 2


def _ham_path(reach: np.ndarray, adj: np.ndarray, S: int, a: int, b: int) -> list[int]:
    seq = [b]
    cur, mask = b, S
    while mask != (1 << a):
        rest = mask ^ (1 << cur)
        cands = int(reach[rest, a]) & int(adj[cur])
        check(cands != 0, "Hamiltonian path reconstruction failed")
        c = (cands & -cands).bit_length() - 1
        seq.append(c)
        cur, mask = c, rest
    check(seq[-1] == a, "Hamiltonian path does not start at a")
    return seq[::-1]


def frank_phi(g: Multigraph) -> tuple[int, frozenset[int]]:
    """phi(G) = max over even T of 2 tau(G,T) - n + 1, by a subset matching table."""
    n = g.n
    dist = _bfs_distances(g)
    table = kernels.matching_table(dist)
    masks = np.arange(1 << n, dtype=np.int64)
    even = kernels.popcount_array(masks) % 2 == 0
    vals = np.where(even, table, -1)
    best = int(np.argmax(vals))
    T = frozenset(v for v in range(n) if (best >> v) & 1)
    return 2 * int(vals[best]) - n + 1, T


def _bfs_distances(g: Multigraph) -> np.ndarray:
    n = g.n
    big = int(kernels.INF) // 4
    dist = np.full((n, n), big, dtype=np.int64)
    adj = [g.neighbors(v) for v in range(n)]
    for s in range(n):
        dist[s, s] = 0
        frontier = [s]
        d = 0
        while frontier:
            d += 1
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if dist[s, w] == big:
                        dist[s, w] = d
                        nxt.append(w)
            frontier = nxt
    return dist


def _first_through(best, reach, adj, par2, v: int, n: int) -> tuple[int, int, int, int]:
    """Cheapest first circuit containing ``v`` (cost, C, a, b), traversed v, a, ..., b, v."""
    inf = int(kernels.INF)
    out = (inf, -1, -1, -1)
    for C in range(1 << n):
        if not (C >> v) & 1 or C == 1 << v:
            continue
        rest = int(best[C])
        size = bin(C).count("1")
        cost = rest + (1 - size % 2)
        if rest >= inf or cost >= out[0]:
            continue
        Cr = C & ~(1 << v)
        if size == 2:
            a = Cr.bit_length() - 1
            if (int(par2[v]) >> a) & 1:
                out = (cost, C, a, a)
            continue
        for a in range(n):
            if (Cr >> a) & 1 and (int(adj[v]) >> a) & 1:
                cand = int(reach[Cr, a]) & int(adj[v]) & ~(1 << a)
                if cand:
                    out = (cost, C, a, (cand & -cand).bit_length() - 1)
                    break
    return out


def min_even_ear_decomposition(g: Multigraph, max_n: int = 16, through: int | None = None) -> EvenEarResult:
    """Ear-decomposition with exactly phi(G) even ears (exact bitmask search).

    Open for 2-vertex-connected graphs.  A 2-edge-connected graph with cut
    vertices is handled block by block (every ear lies inside one block), so
    each later block starts with a closed ear at its attachment vertex.
    ``through`` forces the first circuit to contain that vertex; the result
    is still checked against the matching value of phi.
    """
    rep = connectivity_report(g)
    if not rep.is_2VC:
        if not rep.is_2EC:
            raise GraphError("minimum even ear-decomposition needs a 2-edge-connected graph")
        return _even_ears_by_block(g, max_n)
    n = g.n
    if n > max_n:
        raise CapabilityError(f"n = {n} exceeds the configured bound {max_n}")
    if n == 1:
        return EvenEarResult(EarDecomposition(g, (), 0), 0, frozenset())
    adj = g.adjacency_masks()
    mult = g.multiplicity_matrix()
    par2 = np.array([sum(1 << j for j in range(n) if mult[i, j] >= 2) for i in range(n)], dtype=np.int64)
    reach = kernels.ham_reach(adj)
    best, choice, first = kernels.ear_dp(adj, par2, reach)
    if through is not None:
        first = _first_through(best, reach, adj, par2, through, n)
    cost = int(first[0])
    check(cost < int(kernels.INF), "no open ear-decomposition found")
    C, a, b = int(first[1]), int(first[2]), int(first[3])
    r = (C & -C).bit_length() - 1 if through is None else through
    if bin(C).count("1") == 2:
        paths = [[r, a, r]]
    else:
        paths = [[r] + _ham_path(reach, adj, C & ~(1 << r), a, b) + [r]]
    H = C
    full = (1 << n) - 1
    while H != full:
        I, a, b = (int(x) for x in choice[H])
        check(I > 0, "ear DP has no continuation")
        inner = [a] if I == (1 << a) else _ham_path(reach, adj, I, a, b)
        xa = [x for x in range(n) if (int(adj[a]) & H) >> x & 1]
        yb = [y for y in range(n) if (int(adj[b]) & H) >> y & 1]
        x, y = next((x, y) for x in xa for y in yb if x != y)
        paths.append([x] + inner + [y])
        H |= I
    d = decomposition_from_paths(g, paths, root=r)
    phi, T = frank_phi(g)
    check(d.even_count == cost == phi, f"even-ear count {d.even_count} / DP {cost} / matching phi {phi} disagree")
    return EvenEarResult(d, phi, T)


def _even_ears_by_block(g: Multigraph, max_n: int) -> EvenEarResult:
    if g.n > max_n:
        raise CapabilityError(f"n = {g.n} exceeds the configured bound {max_n}")
    bt = blocks(g)
    pending = list(range(len(bt.blocks)))
    covered = {0}
    paths: list[list[int]] = []
    while pending:
        bi = next(i for i in pending if set(bt.view(i).vertex_map) & covered)
        pending.remove(bi)
        view = bt.view(bi)
        start = min(set(view.vertex_map) & covered)
        local = min_even_ear_decomposition(view.graph, max_n, through=view.vertex_map.index(start)).decomposition
        paths.extend([view.vertex_map[v] for v in ear.vertices] for ear in local.ears if not ear.trivial)
        covered.update(view.vertex_map)
    d = decomposition_from_paths(g, paths, root=0)
    phi, T = frank_phi(g)
    check(d.even_count == phi, f"block-wise even-ear count {d.even_count} differs from matching phi {phi}")
    return EvenEarResult(d, phi, T)


def phi_lower_bound(g: Multigraph, even_ears: int | None = None, T: Iterable[int] | None = None) -> tuple[int, frozenset[int]]:
    """A lower bound on phi(G) with the set T attaining it.

    Uses parity (n + phi - 1 is even) and 2 tau(G,T) - n + 1 for ``T`` when
    given, otherwise for the sets V - v when n is odd.  The scan stops as
    soon as ``even_ears`` is reached.
    """
    from .matching import tau

    n = g.n
    lower, arg = (0 if n % 2 else 1), frozenset()
    cands = [frozenset(T)] if T is not None else ([frozenset(range(n)) - {v} for v in range(n)] if n % 2 else [])
    for S in cands:
        if even_ears is not None and lower >= even_ears:
            break
        val = 2 * tau(g, S) - n + 1
        if val > lower:
            lower, arg = val, S
    return lower, arg


def even_ear_decomposition(
    g: Multigraph, paths: Sequence[Sequence[int]] | None = None, root: int | None = None, max_n: int = 16
) -> EvenEarResult:
    """Ear-decomposition with phi(G) even ears.

    Without ``paths`` this is the exact search (n <= ``max_n``).  With
    ``paths`` the given decomposition is used after its even-ear count is
    matched by ``phi_lower_bound``; otherwise ``CapabilityError``.
    """
    if paths is None:
        return min_even_ear_decomposition(g, max_n)
    d = decomposition_from_paths(g, paths, root=paths[0][0] if root is None else root)
    lower, T = phi_lower_bound(g, d.even_count)
    if lower != d.even_count:
        raise CapabilityError(f"phi bracketed in [{lower}, {d.even_count}] only")
    return EvenEarResult(d, lower, T)


# ---------------------------------------------------------------------------
# nice ear-decompositions


@dataclass(frozen=True, eq=False)
class Eardrum:
    """Cores (internal vertex tuples of clean ears) with back-references to their ears."""

    cores: tuple[tuple[int, ...], ...]
    ear_index: tuple[int, ...]

    @property
    def V_M(self) -> frozenset[int]:
        return frozenset(v for f in self.cores for v in f)

    def __len__(self) -> int:
        return len(self.cores)

    def validate(self, g: Multigraph, T: Iterable[int] = ()) -> None:
        owner = {v: i for i, f in enumerate(self.cores) for v in f}
        check(len(owner) == sum(len(f) for f in self.cores), "cores overlap")
        check(not (set(owner) & set(T)), "eardrum meets T")
        for u, v in g.edges:
            if u in owner and v in owner:
                check(owner[u] == owner[v], "edge between different cores")
        for f in self.cores:
            check(len(f) in (1, 2), "core of size other than 1 or 2")
            if len(f) == 2:
                check(bool(g.edges_between(*f)), "two-vertex core is not an edge")


def eardrum_of(d: EarDecomposition, T: Iterable[int]) -> Eardrum:
    T = frozenset(T)
    idx = tuple(i for i, e in enumerate(d.ears) if e.clean(T))
    return Eardrum(tuple(d.ears[i].inner for i in idx), idx)


def _reorder(ears: list[Ear], root: int) -> list[Ear]:
    covered = {root}
    rest = list(ears)
    out = []
    while rest:
        for i, ear in enumerate(rest):
            if set(ear.endpoints) <= covered:
                break
        else:
            raise InternalError("rewritten ears admit no valid order")
        out.append(rest.pop(i))
        covered.update(ear.vertices)
    return out


class _Work:
    """Mutable nontrivial-ear list plus 1-ear edge set used while rewriting."""

    def __init__(self, d: EarDecomposition):
        self.g = d.host
        self.root = d.root
        self.ears = [e for e in d.ears if not e.trivial]
        self.ones = {e.edges[0] for e in d.ears if e.trivial}

    def snapshot(self) -> EarDecomposition:
        ears = _reorder(self.ears, self.root)
        ones = [Ear(self.g.edges[e], (e,)) for e in sorted(self.ones)]
        return EarDecomposition(self.g, tuple(ears + ones), self.root)


def _rule_a(w: _Work, d: EarDecomposition) -> str | None:
    for i in range(len(w.ears)):
        P = w.ears[i]
        if P.length != 2 or not d.attached[i]:
            continue
        j = d.attached[i][0]
        Q = w.ears[j]
        check(not Q.closed, "closed ear attached to a 2-ear")
        p = P.inner[0]
        Q = Q.oriented_from(p)
        z = Q.vertices[-1]
        x, y = P.vertices[0], P.vertices[2]
        ex, ey = P.edges
        if z != x:
            R = Ear((x,) + Q.vertices, (ex,) + Q.edges)
            w.ones.add(ey)
        else:
            R = Ear((y,) + Q.vertices, (ey,) + Q.edges)
            w.ones.add(ex)
        w.ears[j] = R
        del w.ears[i]
        return "a"
    return None


def _rule_bcd(w: _Work, d: EarDecomposition) -> str | None:
    for i in range(len(w.ears)):
        P = w.ears[i]
        if P.length != 3 or not d.attached[i]:
            continue
        j = d.attached[i][0]
        Q = w.ears[j]
        check(not Q.closed, "closed ear attached to a 3-ear")
        x, u, v, y = P.vertices
        e0, e1, e2 = P.edges
        if set(Q.endpoints) == {u, v}:
            Q = Q.oriented_from(u)
            R = Ear((x,) + Q.vertices + (y,), (e0,) + Q.edges + (e2,))
            w.ones.add(e1)
            tag = "b"
        else:
            star = u if u in Q.endpoints else v
            Q = Q.oriented_from(star)
            if star == v:
                R = Ear((x, u) + Q.vertices, (e0, e1) + Q.edges)
                w.ones.add(e2)
            else:
                R = Ear((y, v) + Q.vertices, (e2, e1) + Q.edges)
                w.ones.add(e0)
            tag = "d" if R.closed else "c"
        w.ears[j] = R
        del w.ears[i]
        return tag
    return None


def _rule_efgh(w: _Work) -> str | None:
    g = w.g
    owner = {}
    for i, ear in enumerate(w.ears):
        if ear.short:
            for v in ear.inner:
                owner[v] = i
    cands = []
    for e in w.ones:
        a, b = g.edges[e]
        if a in owner and b in owner and owner[a] != owner[b]:
            i, j = owner[a], owner[b]
            la, lb = w.ears[i].length, w.ears[j].length
            kind = {(2, 2): 0, (2, 3): 1, (3, 2): 1, (3, 3): 2}[(la, lb)]
            cands.append((kind, min(i, j), max(i, j), e))
    if not cands:
        return None
    kind, i, j, e = min(cands)
    a, b = g.edges[e]
    if owner[a] != i:
        a, b = b, a
    P, Q = w.ears[i], w.ears[j]
    if kind == 1 and P.length == 3:
        P, Q, a, b = Q, P, b, a
    if kind == 0:
        options = [
            (xi, yi)
            for xi in (0, 1)
            for yi in (0, 1)
            if P.vertices[2 * xi] != Q.vertices[2 * yi]
        ]
        xi, yi = options[0]
        R = Ear(
            (P.vertices[2 * xi], a, b, Q.vertices[2 * yi]),
            (P.edges[xi], e, Q.edges[yi]),
        )
        w.ones.update((P.edges[1 - xi], Q.edges[1 - yi]))
        tag = "e"
    elif kind == 1:
        Qo = Q.rotated_to(b, 1)
        qa, q, q2, qb = Qo.vertices
        c0, c1, c2 = Qo.edges
        xi = 0 if P.vertices[0] != qb else 1
        R = Ear((P.vertices[2 * xi], a, q, q2, qb), (P.edges[xi], e, c1, c2))
        w.ones.update((P.edges[1 - xi], c0))
        tag = "f"
    else:
        Po = P.rotated_to(a, 2)
        Qo = Q.rotated_to(b, 2)
        R = Ear(
            (Po.vertices[0], Po.vertices[1], a, b, Qo.vertices[1], Qo.vertices[0]),
            (Po.edges[0], Po.edges[1], e, Qo.edges[1], Qo.edges[0]),
        )
        w.ones.update((Po.edges[2], Qo.edges[2]))
        tag = "h" if R.closed else "g"
    w.ones.discard(e)
    for idx in sorted((i, j), reverse=True):
        del w.ears[idx]
    w.ears.append(R)
    return tag


@dataclass(frozen=True, eq=False)
class NiceResult:
    decomposition: EarDecomposition
    eardrum: Eardrum
    steps: tuple[str, ...] = field(default=())


def make_nice(d: EarDecomposition, T: Iterable[int] = (), phi: int | None = None) -> NiceResult:
    """Rewrite an ear-decomposition until short ears are pendant and pairwise non-adjacent.

    Rules apply in phases: non-pendant 2-ears first (a), then non-pendant
    3-ears (b-d), then edges between short ears (e: 2-2, f: 2-3, g/h: 3-3),
    lowest ear index first.  Every step lowers the number of nontrivial ears
    and never raises the number of even ears.
    """
    T = frozenset(T)
    if phi is not None and d.even_count != phi:
        raise GraphError(f"input has {d.even_count} even ears, expected phi = {phi}")
    if not connectivity_report(d.host).is_2VC:
        raise GraphError("make_nice needs a 2-vertex-connected host")
    steps: list[str] = []
    cur = d
    w = _Work(cur)
    w.ears = [e for e in cur.ears if not e.trivial]
    while True:
        nontriv = len(w.ears)
        evens = cur.even_count
        # attachment data indexed by the current nontrivial list order
        cur = w.snapshot()
        w.ears = [e for e in cur.ears if not e.trivial]
        tag = _rule_a(w, cur) or _rule_bcd(w, cur) or _rule_efgh(w)
        if tag is None:
            break
        steps.append(tag)
        nxt = w.snapshot()
        check(len(w.ears) < nontriv, "rewrite did not reduce the nontrivial ears")
        check(nxt.even_count <= evens, "rewrite increased the even ears")
        check(len(steps) < d.host.n, "too many rewrite steps")
        cur = nxt
    violations = cur.nice_violations(phi)
    check(not violations, "result is not nice: " + "; ".join(violations))
    drum = eardrum_of(cur, T)
    drum.validate(cur.host, T)
    return NiceResult(cur, drum, tuple(steps))


# ---------------------------------------------------------------------------
# ear induction on a pendant ear


@dataclass(frozen=True, eq=False)
class EarReduction:
    """Output of one induction step on a pendant ear P.

    ``F`` completes any S-join of G - inn(P) to a T-join; ``F_prime`` (edge ->
    multiplicity) completes any connected S'-join of G - inn(P) to a
    connected T-join.
    """

    F: tuple[int, ...]
    S: frozenset[int]
    F_prime: dict[int, int]
    S_prime: frozenset[int]
    red: tuple[int, ...]
    blue: tuple[int, ...]

    @property
    def F_prime_size(self) -> int:
        return sum(self.F_prime.values())


def ear_reduction_step(d: EarDecomposition, index: int, T: Iterable[int]) -> EarReduction:
    """Induction step on a pendant ear of ``d``."""
    if index not in d.pendant:
        raise GraphError(f"ear {index} is not pendant")
    return reduce_ear(d.host, d.ears[index], T)


def reduce_ear(g: Multigraph, P: Ear, T: Iterable[int]) -> EarReduction:
    """Induction step on an ear whose inner vertices nothing later attaches to.

    The caller is responsible for that condition (for instance by peeling
    the nontrivial ears in reverse order).
    """
    T = frozenset(T)
    cuts = [pos for pos in range(1, P.length) if P.vertices[pos] in T]
    bounds = [0] + cuts + [P.length]
    segments = [P.edges[bounds[s] : bounds[s + 1]] for s in range(len(bounds) - 1)]
    col0 = [e for s, seg in enumerate(segments) if s % 2 == 0 for e in seg]
    col1 = [e for s, seg in enumerate(segments) if s % 2 == 1 for e in seg]
    red, blue = (col1, col0) if len(col1) <= len(col0) else (col0, col1)

    def odd(es):
        out: set[int] = set()
        for e in es:
            out ^= set(g.edges[e])
        return frozenset(out)

    S = T ^ odd(red)
    S_prime = T ^ odd(blue)
    if not red:
        Fp = {e: 1 for e in P.edges}
    else:
        Fp = {e: 1 for e in P.edges}
        for e in red:
            Fp[e] = 2
        Fp[min(red)] = 0
        Fp = {e: x for e, x in Fp.items() if x}
    inn = len(P.inner)
    F = tuple(sorted(red))
    check(2 * len(F) <= inn + P.phi, "ear induction (a) bound violated")
    check(2 * sum(Fp.values()) <= 3 * inn + P.phi + 2 * P.gamma(T) - 2, "ear induction (b) bound violated")
    return EarReduction(F, S, Fp, S_prime, tuple(sorted(red)), tuple(sorted(blue)))
