"""Loopless undirected multigraphs, solution multisets and block decomposition.

Edge identity is the edge-id, never the endpoint pair: parallel edges are
distinct objects everywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphError, InfeasibleError

__all__ = [
    "Multigraph",
    "GraphView",
    "SolutionMultiset",
    "Block",
    "BlockTree",
    "ConnectivityReport",
    "UnionFind",
    "components",
    "blocks",
    "connectivity_report",
    "is_connected",
    "is_two_edge_connected",
    "is_two_vertex_connected",
    "odd_vertices",
]


class UnionFind:
    """Union-find with path halving; ``union`` reports whether a merge happened."""

    __slots__ = ("parent", "count")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.count = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra < rb:
            ra, rb = rb, ra
        self.parent[ra] = rb
        self.count -= 1
        return True


@dataclass(frozen=True, eq=False)
class Multigraph:
    """Undirected loopless multigraph on vertices ``0..n-1``.

    ``edges[i]`` is the endpoint pair of the edge with id ``i``.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    _inc: tuple[tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GraphError("a graph needs at least one vertex")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(edges):
            if u == v:
                raise GraphError(f"edge {i} is a loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {i} = ({u}, {v}) has an endpoint out of range")
            inc[u].append(i)
            inc[v].append(i)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_inc", tuple(tuple(x) for x in inc))

    @property
    def m(self) -> int:
        return len(self.edges)

    def incident(self, v: int) -> tuple[int, ...]:
        return self._inc[v]

    def degree(self, v: int) -> int:
        return len(self._inc[v])

    def other(self, e: int, v: int) -> int:
        a, b = self.edges[e]
        if v == a:
            return b
        if v == b:
            return a
        raise GraphError(f"vertex {v} is not an endpoint of edge {e}")

    def neighbors(self, v: int) -> list[int]:
        """Distinct neighbours of ``v`` in increasing order."""
        return sorted({self.other(e, v) for e in self._inc[v]})

    def edges_between(self, u: int, v: int) -> list[int]:
        return [e for e in self._inc[u] if self.other(e, u) == v]

    def adjacency_masks(self) -> np.ndarray:
        """Bitmask of neighbours per vertex (simple adjacency), for ``n <= 62``."""
        if self.n > 62:
            raise GraphError("bitmask adjacency needs n <= 62")
        adj = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            adj[u] |= np.int64(1) << np.int64(v)
            adj[v] |= np.int64(1) << np.int64(u)
        return adj

    def multiplicity_matrix(self) -> np.ndarray:
        mult = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            mult[u, v] += 1
            mult[v, u] += 1
        return mult

    def induced_edges(self, vertices: Iterable[int]) -> list[int]:
        vs = set(vertices)
        return [i for i, (u, v) in enumerate(self.edges) if u in vs and v in vs]

    def view(self, edge_ids: Iterable[int] | None = None, vertices: Iterable[int] | None = None) -> "GraphView":
        """Index-mapped subgraph keeping a translation back to this graph.

        With only ``vertices`` given the view is the induced subgraph.  With
        only ``edge_ids`` the vertex set is the set of their endpoints.
        """
        if edge_ids is None:
            if vertices is None:
                vertices = range(self.n)
            vset = sorted(set(vertices))
            edge_ids = self.induced_edges(vset)
        else:
            edge_ids = list(edge_ids)
            vs = set(vertices) if vertices is not None else set()
            for e in edge_ids:
                vs.update(self.edges[e])
            vset = sorted(vs)
        local = {v: i for i, v in enumerate(vset)}
        sub = Multigraph(len(vset), tuple((local[self.edges[e][0]], local[self.edges[e][1]]) for e in edge_ids))
        return GraphView(self, sub, tuple(vset), tuple(edge_ids))

    def to_text(self, T: Iterable[int] | None = None, comment: str | None = None) -> str:
        """Serialize in the ``p/e/t`` instance format (1-indexed vertices)."""
        lines = []
        if comment:
            lines.extend(f"c {c}" for c in comment.splitlines())
        lines.append(f"p {self.n} {self.m}")
        lines.extend(f"e {u + 1} {v + 1}" for u, v in self.edges)
        if T is not None:
            lines.append("t " + " ".join(str(v + 1) for v in sorted(T)))
        return "\n".join(lines) + "\n"

    def __repr__(self) -> str:
        return f"Multigraph(n={self.n}, m={self.m})"


@dataclass(frozen=True, eq=False)
class GraphView:
    """Subgraph of ``host`` re-indexed as ``graph`` with maps back to the host."""

    host: Multigraph
    graph: Multigraph
    vertex_map: tuple[int, ...]
    edge_map: tuple[int, ...]

    def local_vertices(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.vertex_map)}

    def local_edges(self) -> dict[int, int]:
        return {e: i for i, e in enumerate(self.edge_map)}

    def to_local(self, vertices: Iterable[int]) -> frozenset[int]:
        loc = self.local_vertices()
        return frozenset(loc[v] for v in vertices if v in loc)

    def to_host(self, vertices: Iterable[int]) -> frozenset[int]:
        return frozenset(self.vertex_map[v] for v in vertices)

    def lift(self, sol: "SolutionMultiset") -> "SolutionMultiset":
        """Translate a solution on the view into one on the host."""
        mult = [0] * self.host.m
        for i, x in enumerate(sol.multiplicity):
            mult[self.edge_map[i]] += x
        return SolutionMultiset(self.host, tuple(mult))

    def lift_edges(self, edge_ids: Iterable[int]) -> list[int]:
        return [self.edge_map[e] for e in edge_ids]


@dataclass(frozen=True, eq=False)
class SolutionMultiset:
    """Multiplicity vector in {0,1,2} over the host's edge-ids."""

    host: Multigraph
    multiplicity: tuple[int, ...]

    def __post_init__(self) -> None:
        mult = tuple(int(x) for x in self.multiplicity)
        if len(mult) != self.host.m:
            raise GraphError("multiplicity vector length differs from edge count")
        if any(x < 0 or x > 2 for x in mult):
            raise GraphError("multiplicities must lie in {0, 1, 2}")
        object.__setattr__(self, "multiplicity", mult)

    @classmethod
    def empty(cls, host: Multigraph) -> "SolutionMultiset":
        return cls(host, (0,) * host.m)

    @classmethod
    def from_edges(cls, host: Multigraph, edge_ids: Iterable[int], mult: int = 1) -> "SolutionMultiset":
        x = [0] * host.m
        for e in edge_ids:
            x[e] += mult
        return cls(host, tuple(x))

    @classmethod
    def from_counts(cls, host: Multigraph, counts: dict[int, int] | Sequence[int]) -> "SolutionMultiset":
        if isinstance(counts, dict):
            x = [0] * host.m
            for e, c in counts.items():
                x[e] += c
            return cls(host, tuple(x))
        return cls(host, tuple(counts))

    @property
    def cardinality(self) -> int:
        return sum(self.multiplicity)

    def __len__(self) -> int:
        return self.cardinality

    def support(self) -> list[int]:
        return [e for e, x in enumerate(self.multiplicity) if x]

    def edge_list(self) -> list[int]:
        """Edge-ids repeated by multiplicity."""
        return [e for e, x in enumerate(self.multiplicity) for _ in range(x)]

    def degrees(self) -> list[int]:
        deg = [0] * self.host.n
        for e, x in enumerate(self.multiplicity):
            if x:
                u, v = self.host.edges[e]
                deg[u] += x
                deg[v] += x
        return deg

    def odd_vertices(self) -> frozenset[int]:
        return frozenset(v for v, d in enumerate(self.degrees()) if d % 2)

    def is_connected_spanning(self) -> bool:
        return is_connected(self.host.n, (self.host.edges[e] for e in self.support()))

    def __add__(self, other: "SolutionMultiset") -> "SolutionMultiset":
        if other.host is not self.host:
            raise GraphError("cannot add solutions on different hosts")
        return SolutionMultiset(self.host, tuple(a + b for a, b in zip(self.multiplicity, other.multiplicity)))

    def as_multigraph(self) -> GraphView:
        """The solution as a multigraph: each copy of an edge becomes its own edge."""
        ids = self.edge_list()
        sub = Multigraph(self.host.n, tuple(self.host.edges[e] for e in ids))
        return GraphView(self.host, sub, tuple(range(self.host.n)), tuple(ids))

    def __repr__(self) -> str:
        return f"SolutionMultiset(cardinality={self.cardinality}, support={len(self.support())})"


def odd_vertices(g: Multigraph, edge_ids: Iterable[int]) -> frozenset[int]:
    odd: set[int] = set()
    for e in edge_ids:
        for v in g.edges[e]:
            odd ^= {v}
    return frozenset(odd)


def components(n: int, edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    """Connected components as sorted vertex lists, ordered by smallest vertex."""
    uf = UnionFind(n)
    for u, v in edges:
        uf.union(u, v)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(uf.find(v), []).append(v)
    return sorted(groups.values())


def is_connected(n: int, edges: Iterable[tuple[int, int]]) -> bool:
    uf = UnionFind(n)
    for u, v in edges:
        uf.union(u, v)
        if uf.count == 1:
            return True
    return uf.count == 1


@dataclass(frozen=True)
class Block:
    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    @property
    def is_bridge(self) -> bool:
        return len(self.edges) == 1


@dataclass(frozen=True, eq=False)
class BlockTree:
    """Blocks (maximal 2-vertex-connected pieces and bridges) of a connected graph."""

    host: Multigraph
    blocks: tuple[Block, ...]
    cut_vertices: frozenset[int]
    edge_block: tuple[int, ...]
    # per block: cut vertex -> vertex set of the component of G - w containing the block
    sides: tuple[dict[int, frozenset[int]], ...] = field(repr=False)

    def split_T(self, T: Iterable[int]) -> list[frozenset[int]]:
        """Per-block terminal sets: each block receives the even choice at its cut vertices."""
        T = frozenset(T)
        out = []
        for b, side in zip(self.blocks, self.sides):
            tb = set(v for v in b.vertices if v in T and v not in side)
            for w, comp in side.items():
                if len(T & comp) % 2:
                    tb.add(w)
            out.append(frozenset(tb))
        return out

    def view(self, i: int) -> GraphView:
        b = self.blocks[i]
        return self.host.view(edge_ids=b.edges, vertices=b.vertices)


def _biconnected_edge_sets(g: Multigraph) -> list[tuple[list[int], list[int]]]:
    n = g.n
    disc = [-1] * n
    low = [0] * n
    t = 0
    out: list[tuple[list[int], list[int]]] = []
    for root in range(n):
        if disc[root] != -1:
            continue
        if not g.incident(root):
            disc[root] = t
            t += 1
            out.append(([root], []))
            continue
        disc[root] = low[root] = t
        t += 1
        stack = [(root, -1, iter(g.incident(root)))]
        estack: list[int] = []
        while stack:
            v, pe, it = stack[-1]
            pushed = False
            for e in it:
                if e == pe:
                    continue
                w = g.other(e, v)
                if disc[w] == -1:
                    estack.append(e)
                    disc[w] = low[w] = t
                    t += 1
                    stack.append((w, e, iter(g.incident(w))))
                    pushed = True
                    break
                if disc[w] < disc[v]:
                    estack.append(e)
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            if pushed:
                continue
            stack.pop()
            if stack:
                u = stack[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
                if low[v] >= disc[u]:
                    comp = []
                    while True:
                        f = estack.pop()
                        comp.append(f)
                        if f == pe:
                            break
                    verts = sorted({x for f in comp for x in g.edges[f]})
                    out.append((verts, sorted(comp)))
    return out


def blocks(g: Multigraph) -> BlockTree:
    """Block decomposition of a connected multigraph."""
    if not is_connected(g.n, g.edges):
        raise GraphError("block decomposition needs a connected graph")
    raw = _biconnected_edge_sets(g)
    raw.sort(key=lambda vb: (vb[1][0] if vb[1] else -1, vb[0]))
    blist = tuple(Block(tuple(v), tuple(e)) for v, e in raw)
    count = [0] * g.n
    for b in blist:
        for v in b.vertices:
            count[v] += 1
    cuts = frozenset(v for v in range(g.n) if count[v] > 1)
    edge_block = [0] * g.m
    for i, b in enumerate(blist):
        for e in b.edges:
            edge_block[e] = i
    sides = []
    for b in blist:
        side = {}
        for w in b.vertices:
            if w in cuts:
                side[w] = frozenset(_reach_avoiding(g, next(x for x in b.vertices if x != w), w))
        sides.append(side)
    return BlockTree(g, blist, cuts, tuple(edge_block), tuple(sides))


def _reach_avoiding(g: Multigraph, start: int, avoid: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for e in g.incident(v):
            w = g.other(e, v)
            if w != avoid and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


@dataclass(frozen=True)
class ConnectivityReport:
    components: tuple[tuple[int, ...], ...]
    bridges: tuple[int, ...]
    is_2EC: bool
    is_2VC: bool


def connectivity_report(g: Multigraph) -> ConnectivityReport:
    comps = components(g.n, g.edges)
    bridges: list[int] = []
    nblocks = 0
    for _verts, es in _biconnected_edge_sets(g):
        nblocks += 1
        if len(es) == 1:
            bridges.append(es[0])
    connected = len(comps) == 1
    two_ec = connected and not bridges
    # n = 2 with parallel edges counts as 2-vertex-connected
    two_vc = two_ec and nblocks == 1
    return ConnectivityReport(tuple(tuple(c) for c in comps), tuple(sorted(bridges)), two_ec, two_vc)


def is_two_edge_connected(g: Multigraph) -> bool:
    return connectivity_report(g).is_2EC


def is_two_vertex_connected(g: Multigraph) -> bool:
    return connectivity_report(g).is_2VC


def require_connected(g: Multigraph) -> None:
    if not is_connected(g.n, g.edges):
        raise GraphError("graph is not connected")


def check_even_T(g: Multigraph, T: Iterable[int]) -> frozenset[int]:
    T = frozenset(T)
    if len(T) % 2:
        raise InfeasibleError(f"|T| = {len(T)} is odd")
    if any(not (0 <= v < g.n) for v in T):
        raise GraphError("T contains a vertex out of range")
    return T
