"""Maximum earmuffs via forest representative systems, with a min-max certificate."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .ears import Ear, EarDecomposition, Eardrum, eardrum_of
from .errors import GraphError, InternalError, check
from .graph import Multigraph, UnionFind

__all__ = [
    "endpoint_set",
    "RepresentativeState",
    "ClosedWitness",
    "MuffCertificate",
    "Earmuff",
    "MuffResult",
    "augment_or_close",
    "maximal_closed_sets",
    "max_forest_representatives",
    "realize_earmuff",
    "reroot_ears",
    "maximum_earmuff",
    "surplus",
]


def endpoint_set(g: Multigraph, core: Sequence[int]) -> frozenset[int]:
    """U_f: endpoints of paths whose internal vertex set is exactly ``core``.

    Neighbours are taken outside the core; the caller guarantees that no
    other core is adjacent (eardrum property).
    """
    if len(core) == 1:
        (a,) = core
        nb = set(g.neighbors(a))
        return frozenset(nb) if len(nb) >= 2 else frozenset()
    if len(core) == 2:
        a, b = core
        A = set(g.neighbors(a)) - {b}
        B = set(g.neighbors(b)) - {a}
        if not A or not B or (len(A) == 1 and A == B):
            return frozenset()
        return frozenset(A | B)
    raise GraphError(f"core of size {len(core)}")


def surplus(W: Iterable[int], sets: Sequence[frozenset[int]]) -> int:
    W = frozenset(W)
    return sum(1 for s in sets if s <= W) - (len(W) - 1)


@dataclass
class RepresentativeState:
    """Candidate endpoint sets with a forest representative system for the chosen subset.

    Candidates are addressed by their position in ``sets``.
    """

    U: frozenset[int]
    sets: tuple[frozenset[int], ...]
    rep: dict[int, tuple[int, int]] = field(default_factory=dict)

    @property
    def F(self) -> tuple[int, ...]:
        return tuple(sorted(self.rep))

    def components(self) -> dict[int, int]:
        uf = UnionFind(max(self.U, default=-1) + 1)
        for u, v in self.rep.values():
            uf.union(u, v)
        return {x: uf.find(x) for x in self.U}

    def validate(self) -> None:
        uf = UnionFind(max(self.U, default=-1) + 1)
        seen = set()
        for f, (u, v) in self.rep.items():
            key = (min(u, v), max(u, v))
            check(u != v and u in self.sets[f] and v in self.sets[f], f"bad representative for {f}")
            check(key not in seen, "repeated representative")
            seen.add(key)
            check(uf.union(u, v), "representatives contain a circuit")


@dataclass(frozen=True)
class ClosedWitness:
    """A set containing U_g that is closed for the current chosen subset."""

    W: frozenset[int]


def augment_or_close(state: RepresentativeState, g: int) -> bool | ClosedWitness:
    """Try to add candidate ``g``; return True on success, else a closed witness."""
    Ug = state.sets[g]
    if not Ug:
        raise GraphError(f"candidate {g} has an empty endpoint set")
    check(g not in state.rep, f"candidate {g} already chosen")
    r = min(Ug)
    # arborescence of r's component: parent vertex and the owner of the parent edge
    adj: dict[int, list[tuple[int, int]]] = {}
    for f, (u, v) in state.rep.items():
        adj.setdefault(u, []).append((v, f))
        adj.setdefault(v, []).append((u, f))
    parent: dict[int, tuple[int, int]] = {r: (-1, -1)}
    child_end: dict[int, int] = {}
    order = [r]
    for x in order:
        for y, f in sorted(adj.get(x, ())):
            if y not in parent:
                parent[y] = (x, f)
                child_end[f] = y
                order.append(y)
    C = parent.keys()
    visited_edges: set[int] = set()
    pred: dict[int, int] = {g: -1}
    arc_pair: dict[int, tuple[int, int]] = {}
    queue = deque([g])
    reached = []
    while queue:
        f = queue.popleft()
        reached.append(f)
        w = r if f == g else child_end[f]
        for u in sorted(state.sets[f]):
            if u not in C:
                # augment along the predecessor chain
                state.rep[f] = (u, w)
                cur = f
                while pred[cur] != -1:
                    p = pred[cur]
                    state.rep[p] = arc_pair[cur]
                    cur = p
                state.validate()
                return True
            x = u
            while x != r:
                px, owner = parent[x]
                if owner in visited_edges:
                    break
                visited_edges.add(owner)
                pred[owner] = f
                arc_pair[owner] = (u, w)
                queue.append(owner)
                x = px
    W = frozenset().union(*(state.sets[f] for f in reached))
    inside = sum(1 for f in state.rep if state.sets[f] <= W)
    check(Ug <= W and inside == len(W) - 1, "closed witness is not closed")
    return ClosedWitness(W)


def maximal_closed_sets(state: RepresentativeState) -> tuple[frozenset[int], ...]:
    """Partition of U into the maximal sets closed for the current chosen subset."""
    comp = state.components()
    parts: dict[int, set[int]] = {}
    for x, c in comp.items():
        parts.setdefault(c, set()).add(x)
    current = [frozenset(p) for p in parts.values()]
    changed = True
    while changed:
        changed = False
        nxt = []
        for P in current:
            uf = UnionFind(max(P) + 1)
            for f, (u, v) in state.rep.items():
                if state.sets[f] <= P:
                    uf.union(u, v)
            groups: dict[int, set[int]] = {}
            for x in P:
                groups.setdefault(uf.find(x), set()).add(x)
            if len(groups) > 1:
                changed = True
            nxt.extend(frozenset(s) for s in groups.values())
        current = nxt
    return tuple(sorted(current, key=min))


@dataclass(frozen=True)
class MuffCertificate:
    """Partition of U with per-class surplus; |M| - sum(surplus) equals the optimum."""

    partition: tuple[frozenset[int], ...]
    surpluses: tuple[int, ...]
    candidates: int

    @property
    def value(self) -> int:
        return self.candidates - sum(self.surpluses)

    def verify(self, U: Iterable[int], sets: Sequence[frozenset[int]]) -> int:
        U = frozenset(U)
        seen: set[int] = set()
        for W in self.partition:
            check(W and not (W & seen), "certificate classes overlap or are empty")
            seen |= W
        check(seen == U, "certificate is not a partition of U")
        direct = tuple(surplus(W, sets) for W in self.partition)
        check(direct == self.surpluses, "recorded surpluses disagree with direct computation")
        check(self.candidates == len(sets), "candidate count mismatch")
        return self.value


def max_forest_representatives(
    U: Iterable[int], sets: Sequence[frozenset[int]], order: Sequence[int] | None = None
) -> tuple[RepresentativeState, MuffCertificate]:
    """Greedy maximum subset with a forest representative system, plus its certificate."""
    state = RepresentativeState(frozenset(U), tuple(frozenset(s) for s in sets))
    for s in state.sets:
        check(s <= state.U, "endpoint set leaves U")
        if not s:
            raise GraphError("empty endpoint set")
    for gi in order if order is not None else range(len(state.sets)):
        augment_or_close(state, gi)
    state.validate()
    part = maximal_closed_sets(state)
    cert = MuffCertificate(part, tuple(surplus(W, state.sets) for W in part), len(state.sets))
    val = cert.verify(state.U, state.sets)
    check(val == len(state.rep), f"certificate value {val} differs from greedy size {len(state.rep)}")
    return state, cert


# ---------------------------------------------------------------------------
# realization as paths and re-rooting the ears


@dataclass(frozen=True, eq=False)
class Earmuff:
    """Paths P_f for the chosen cores (keyed by eardrum position)."""

    host: Multigraph
    paths: dict[int, Ear]

    @property
    def F(self) -> tuple[int, ...]:
        return tuple(sorted(self.paths))

    @property
    def mu(self) -> int:
        return len(self.paths)

    def edges(self) -> list[int]:
        return sorted(e for p in self.paths.values() for e in p.edges)

    def validate(self, drum: Eardrum) -> None:
        uf = UnionFind(self.host.n)
        for k, p in self.paths.items():
            check(not p.closed, "earmuff path is closed")
            check(p.inner == drum.cores[k] or p.inner[::-1] == drum.cores[k], "earmuff path interior differs from its core")
            for e in p.edges:
                check(uf.union(*self.host.edges[e]), "earmuff contains a circuit")


def _edge(g: Multigraph, a: int, b: int) -> int:
    es = g.edges_between(a, b)
    if not es:
        raise InternalError(f"no edge {a}-{b}")
    return min(es)


def _path(g: Multigraph, verts: Sequence[int]) -> Ear:
    return Ear(tuple(verts), tuple(_edge(g, a, b) for a, b in zip(verts, verts[1:])))


def realize_earmuff(g: Multigraph, drum: Eardrum, state: RepresentativeState, cand: Sequence[int]) -> Earmuff:
    """Turn representatives into paths keeping the union a forest.

    ``cand[i]`` is the eardrum position of candidate ``i`` of ``state``.
    """
    paths: dict[int, Ear] = {}
    done: list[tuple[int, int]] = []
    for i in state.F:
        u, v = state.rep[i]
        core = drum.cores[cand[i]]
        uf = UnionFind(g.n)
        for a, b in done:
            uf.union(a, b)
        for j, (x, y) in state.rep.items():
            if j != i and cand[j] not in paths:
                uf.union(x, y)
        check(uf.find(u) != uf.find(v), "representative edge is not a bridge")
        if len(core) == 1:
            verts = (u, core[0], v)
        else:
            a, b = core
            Na, Nb = set(g.neighbors(a)), set(g.neighbors(b))
            if u in Na and v in Nb:
                verts = (u, a, b, v)
            elif u in Nb and v in Na:
                verts = (u, b, a, v)
            else:
                x = a if u in Na else b
                y = b if x == a else a
                check(v in set(g.neighbors(x)), "pair core has no path for its representative")
                w = min(set(g.neighbors(y)) - {x})
                verts = (v, x, y, w) if uf.find(w) == uf.find(u) else (u, x, y, w)
        p = _path(g, verts)
        paths[cand[i]] = p
        done.extend(g.edges[e] for e in p.edges)
    muff = Earmuff(g, paths)
    muff.validate(drum)
    check(len(muff.edges()) == sum(len(drum.cores[k]) + 1 for k in paths), "earmuff edge count")
    return muff


def reroot_ears(d: EarDecomposition, drum: Eardrum, muff: Earmuff) -> EarDecomposition:
    """Replace clean ears by the earmuff paths; clean ears move behind the other nontrivial ears."""
    muff.validate(drum)
    new = list(d.ears)
    for k, p in muff.paths.items():
        idx = drum.ear_index[k]
        check(idx != 0, "the first ear cannot be replaced by a path")
        new[idx] = p
    clean = set(drum.ear_index)
    body = [e for i, e in enumerate(new) if not e.trivial and i not in clean]
    tail = [new[i] for i in drum.ear_index]
    used = {e for ear in body + tail for e in ear.edges}
    ones = [Ear(d.host.edges[e], (e,)) for e in range(d.host.m) if e not in used]
    out = EarDecomposition(d.host, tuple(body + tail + ones), d.root)
    check(out.even_count == d.even_count, "re-rooting changed the even ears")
    check(out.is_nice(), "re-rooted decomposition is not nice")
    return out


@dataclass(frozen=True, eq=False)
class MuffResult:
    """Outcome of earmuff maximization on a nice decomposition.

    ``candidates`` lists the eardrum positions taking part (first ear and
    cores without any realizing path are left out); ``sets[i]`` is U_f of
    candidate ``i``.
    """

    eardrum: Eardrum
    candidates: tuple[int, ...]
    U: frozenset[int]
    sets: tuple[frozenset[int], ...]
    state: RepresentativeState
    certificate: MuffCertificate
    earmuff: Earmuff
    decomposition: EarDecomposition

    @property
    def mu(self) -> int:
        return self.earmuff.mu

    @property
    def active_cores(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.eardrum.cores[k] for k in self.candidates)


def maximum_earmuff(d: EarDecomposition, T: Iterable[int] = (), order: Sequence[int] | None = None) -> MuffResult:
    """Maximum earmuff for the eardrum of a nice decomposition, and the re-rooted decomposition."""
    T = frozenset(T)
    g = d.host
    drum = eardrum_of(d, T)
    cand, sets = [], []
    for k, core in enumerate(drum.cores):
        if drum.ear_index[k] == 0:
            continue
        s = endpoint_set(g, core)
        if s:
            cand.append(k)
            sets.append(s)
    # cores left out (closed first ear, no outside neighbours) keep their vertices in U
    U = frozenset(range(g.n)) - frozenset(v for k in cand for v in drum.cores[k])
    state, cert = max_forest_representatives(U, sets, order)
    muff = realize_earmuff(g, drum, state, cand)
    nd = reroot_ears(d, drum, muff)
    check(
        {frozenset(c) for c in eardrum_of(nd, T).cores} == {frozenset(c) for c in drum.cores},
        "eardrum changed",
    )
    return MuffResult(drum, tuple(cand), U, tuple(sets), state, cert, muff, nd)
