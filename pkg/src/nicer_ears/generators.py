"""Instance families: the three tightness families, integrality witnesses and random graphs.

Every family returns a :class:`Family` carrying the graph, an optional
terminal set, a decomposition hint (vertex paths of the nontrivial ears,
first ear closed) and, when known, a Hamiltonian circuit as edge-ids.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .errors import GraphError, check
from .graph import Multigraph, connectivity_report

__all__ = [
    "Family",
    "fig3",
    "fig4",
    "fig5",
    "theta",
    "cycle_st",
    "random_2ec",
    "random_2vc",
    "random_eardrum",
    "random_even_T",
    "FAMILIES",
    "generate",
]


@dataclass(frozen=True, eq=False)
class Family:
    name: str
    k: int
    graph: Multigraph
    T: frozenset[int] = frozenset()
    hint: tuple[tuple[int, ...], ...] | None = None
    hamiltonian: tuple[int, ...] | None = None
    expected: dict = field(default_factory=dict)


class _Builder:
    def __init__(self) -> None:
        self.names: dict[object, int] = {}
        self.edges: list[tuple[int, int]] = []

    def v(self, key) -> int:
        if key not in self.names:
            self.names[key] = len(self.names)
        return self.names[key]

    def e(self, a, b) -> None:
        self.edges.append((self.v(a), self.v(b)))

    def path(self, *keys) -> None:
        for a, b in zip(keys, keys[1:]):
            self.e(a, b)

    def ids(self, keys: Sequence) -> tuple[int, ...]:
        return tuple(self.names[x] for x in keys)

    def graph(self) -> Multigraph:
        return Multigraph(len(self.names), tuple(self.edges))


def _cycle_ids(g: Multigraph, seq: Sequence[int]) -> tuple[int, ...]:
    """Edge-ids of the closed walk ``seq`` (first vertex not repeated), lowest id per step."""
    out = []
    used: set[int] = set()
    for a, b in zip(seq, list(seq[1:]) + [seq[0]]):
        e = min(x for x in g.edges_between(a, b) if x not in used)
        used.add(e)
        out.append(e)
    return tuple(out)


def fig3(k: int) -> Family:
    """Connected-T-join family with T = {s, t}: n = 8k+5, opt = 8k+4, phi = 2."""
    if k < 1:
        raise GraphError("k must be at least 1")
    top = 4 * k
    b = _Builder()
    b.v("s")
    for i in range(top + 1):
        b.v(("b", i))
    for i in range(top + 1):
        b.v(("t", i))
    b.v("t")
    b.v("a")
    b.e("s", ("b", 0))
    b.e("s", ("t", 0))
    b.path(*[("b", i) for i in range(top + 1)])
    b.path(*[("t", i) for i in range(top + 1)])
    b.e(("b", top), "t")
    b.e(("t", top), "t")
    b.e("a", ("b", 2 * k))
    b.e("a", ("t", 2 * k))
    for i in range(2 * k):
        b.e(("b", i), ("t", i + 1))
    for i in range(2 * k + 1, top):
        b.e(("b", i + 1), ("t", i))
    g = b.graph()
    check(g.n == 8 * k + 5 and g.m == 12 * k + 5, "fig3 counts")
    circuit = ["s"] + [("b", i) for i in range(top + 1)] + ["t"] + [("t", i) for i in range(top, -1, -1)] + ["s"]
    hint = (b.ids(circuit), b.ids([("b", 2 * k), "a", ("t", 2 * k)]))
    T = frozenset(b.ids(["s", "t"]))
    return Family("fig3", k, g, T, hint, None, {"opt": 8 * k + 4, "phi": 2, "bound": 12 * k + 6})


def fig4(k: int) -> Family:
    """Tour family: n = 10k+1, Hamiltonian, phi = 0, Lambda = 10k."""
    if k < 1:
        raise GraphError("k must be at least 1")
    b = _Builder()
    b.v("v0")
    cols: list[list] = []
    for j in range(k):
        cols.append([("a", j, r) for r in range(4)])
        cols.append([("b", j, r) for r in range(4)])
    for j in range(k):
        for x in (("a", j), ("b", j)):
            b.path(*[x + (r,) for r in range(4)])
        b.path(("a", j, 2), ("h", j, 1), ("h", j, 2), ("b", j, 2))
        b.e(("a", j, 0), ("b", j, 0))
        b.e(("a", j, 3), ("b", j, 3))
        if j + 1 < k:
            b.e(("b", j, 0), ("a", j + 1, 0))
            b.e(("b", j, 3), ("a", j + 1, 3))
    b.e("v0", ("a", 0, 0))
    b.e("v0", ("a", 0, 3))
    b.e(("b", k - 1, 0), ("b", k - 1, 3))
    g = b.graph()
    check(g.n == 10 * k + 1 and g.m == 13 * k + 1, "fig4 counts")
    paths = [["v0"] + cols[0] + ["v0"]]
    for c in range(1, 2 * k):
        paths.append([cols[c - 1][0]] + cols[c] + [cols[c - 1][3]])
    for j in range(k):
        paths.append([("a", j, 2), ("h", j, 1), ("h", j, 2), ("b", j, 2)])
    seq: list = ["v0"]
    for j in range(k):
        seq += [("a", j, 0), ("a", j, 1), ("a", j, 2), ("h", j, 1), ("h", j, 2), ("b", j, 2), ("b", j, 1), ("b", j, 0)]
    for j in range(k - 1, -1, -1):
        seq += [("b", j, 3), ("a", j, 3)]
    ham = _cycle_ids(g, b.ids(seq))
    hint = tuple(b.ids(p) for p in paths)
    exp = {"opt": 10 * k + 1, "lp": 10 * k + 1, "phi": 0, "Lambda": 10 * k, "bound": 14 * k}
    return Family("fig4", k, g, frozenset(), hint, ham, exp)


def fig5(k: int) -> Family:
    """2ECSS family: n = 24k, Hamiltonian, phi = 1, opt = LP = 24k."""
    if k < 1:
        raise GraphError("k must be at least 1")
    C = 4 * k
    b = _Builder()

    def col(c: int, r: int):
        return ("c", c, r)

    def inner(c: int, i: int):
        # inner vertices of the 3-ear between columns c and c+1
        return ("m", c, i)

    def three_ear(c: int) -> list:
        if c % 2:
            return [col(c, 3), inner(c, 1), inner(c, 2), col(c + 1, 2)]
        return [col(c, 2), inner(c, 1), inner(c, 2), col(c + 1, 3)]

    paths: list[list] = [["v0", col(1, 1), col(1, 2), col(1, 3), col(1, 4), "v0"]]
    for c in range(2, C + 1):
        paths.append([col(c - 1, 1), col(c, 1), col(c, 2), col(c, 3), col(c, 4), col(c - 1, 4)])
    paths += [three_ear(c) for c in range(1, C)]
    paths.append(["v0", "w", col(1, 3)])
    for p in paths:
        b.path(*p)
    for c in range(1, C):
        if c % 2:
            b.e(col(c, 2), inner(c, 2))
        else:
            b.e(col(c, 3), inner(c, 1))
    for blk in range(k):
        c0 = 4 * blk + 1
        hub_left = "v0" if blk == 0 else inner(c0 - 1, 2)
        hub_right = inner(c0 + 3, 2) if blk + 1 < k else col(C, 2)
        b.e(col(c0 + 1, 1), col(c0, 2))
        b.e(col(c0 + 1, 1), inner(c0 + 1, 2))
        b.e(col(c0 + 1, 1), col(c0 + 3, 1))
        b.e(col(c0 + 2, 4), col(c0, 4))
        b.e(col(c0 + 2, 4), inner(c0 + 1, 2))
        b.e(col(c0 + 2, 4), col(c0 + 3, 3))
        b.e(hub_left, col(c0 + 1, 3))
        b.e(col(c0 + 2, 2), hub_right)
    g = b.graph()
    check(g.n == 24 * k and g.m == 44 * k - 2, "fig5 counts")
    hint = tuple(b.ids(p) for p in paths)
    exp = {"opt": 24 * k, "lp": 24 * k, "phi": 1, "bound": 32 * k, "construction_a": 32 * k - 1}
    return Family("fig5", k, g, frozenset(), hint, None, exp)


def theta(k: int) -> Family:
    """Three internally disjoint u-v paths with k-1 inner vertices each (n = 3k-1)."""
    if k < 2:
        raise GraphError("theta needs k >= 2")
    b = _Builder()
    b.v("u")
    b.v("v")
    for p in range(3):
        b.path("u", *[(p, i) for i in range(1, k)], "v")
    g = b.graph()
    hint = (b.ids(["u"] + [(0, i) for i in range(1, k)] + ["v"] + [(1, i) for i in range(k - 1, 0, -1)] + ["u"]),
            b.ids(["u"] + [(2, i) for i in range(1, k)] + ["v"]))
    return Family("theta", k, g, frozenset(), hint, None, {"lp": 3 * k, "opt": 4 * k - 2})


def cycle_st(n: int) -> Family:
    """Circuit on 2n vertices with T = two antipodal vertices."""
    if n < 2:
        raise GraphError("cycle_st needs n >= 2")
    g = Multigraph(2 * n, tuple((i, (i + 1) % (2 * n)) for i in range(2 * n)))
    hint = (tuple(range(2 * n)) + (0,),)
    return Family("cycle_st", n, g, frozenset({0, n}), hint, tuple(range(2 * n)), {"lp": 2 * n, "opt": 3 * n - 2})


def _random_multigraph(n: int, extra: int, rng: random.Random, want_2vc: bool, simple: bool = False) -> Multigraph:
    for _ in range(10_000):
        perm = list(range(n))
        rng.shuffle(perm)
        edges = [(perm[i], perm[(i + 1) % n]) for i in range(n)] if n > 2 else [(0, 1), (0, 1)]
        if not want_2vc and n > 3 and rng.random() < 0.5:
            # pinch the circuit into two circuits sharing a vertex
            cut = rng.randint(2, n - 2)
            edges = [(perm[i], perm[(i + 1) % cut]) for i in range(cut)]
            rest = [perm[0]] + perm[cut:]
            edges += [(rest[i], rest[(i + 1) % len(rest)]) for i in range(len(rest))]
        for _ in range(extra):
            edges.append(tuple(rng.sample(range(n), 2)))
        edges = [e for e in edges if e[0] != e[1]]
        if simple:
            if n < 3:
                raise GraphError("a simple 2-edge-connected graph needs n >= 3")
            edges = list({tuple(sorted(e)): None for e in edges})
        rng.shuffle(edges)
        g = Multigraph(n, tuple(edges))
        rep = connectivity_report(g)
        if rep.is_2VC if want_2vc else rep.is_2EC:
            return g
    raise GraphError("random generator failed to hit the target class")


def random_2ec(n: int, extra: int, rng: random.Random, simple: bool = False) -> Multigraph:
    """Random 2-edge-connected multigraph: a (possibly pinched) circuit plus ``extra`` random edges.

    ``simple`` drops repeated edges.
    """
    return _random_multigraph(n, extra, rng, want_2vc=False, simple=simple)


def random_2vc(n: int, extra: int, rng: random.Random, simple: bool = False) -> Multigraph:
    """Random 2-vertex-connected multigraph: a Hamiltonian circuit plus ``extra`` random edges."""
    return _random_multigraph(n, extra, rng, want_2vc=True, simple=simple)


def random_even_T(n: int, rng: random.Random) -> frozenset[int]:
    size = rng.randrange(0, n + 1, 2)
    return frozenset(rng.sample(range(n), size))


def random_eardrum(rng: random.Random, max_U: int = 8) -> tuple[Multigraph, tuple[tuple[int, ...], ...], int]:
    """Graph on U = {0..u-1} plus cores of size 1 or 2 hanging off U.

    Returns (graph, cores, u).  Every core has at least one realizing path,
    i.e. at least two distinct neighbours in U.
    """
    u = rng.randint(2, max_U)
    edges: list[tuple[int, int]] = []
    for _ in range(rng.randint(0, u)):
        edges.append(tuple(rng.sample(range(u), 2)))
    n = u
    cores: list[tuple[int, ...]] = []
    for _ in range(rng.randint(1, 6)):
        if rng.random() < 0.5:
            c = n
            n += 1
            for x in rng.sample(range(u), rng.randint(2, min(4, u))):
                edges.append((c, x))
            cores.append((c,))
        else:
            a, c = n, n + 1
            n += 2
            edges.append((a, c))
            xa = rng.sample(range(u), rng.randint(1, min(3, u)))
            xc = rng.sample(range(u), rng.randint(1, min(3, u)))
            if set(xa) | set(xc) == {xa[0]}:
                xc = [next(x for x in range(u) if x != xa[0])]
            for x in xa:
                edges.append((a, x))
            for x in xc:
                edges.append((c, x))
            cores.append((a, c))
    return Multigraph(n, tuple(edges)), tuple(cores), u


def generate(family: str, k: int, seed: int = 0) -> Family:
    if family == "random":
        rng = random.Random(seed)
        g = random_2ec(k, rng.randint(0, k), rng)
        return Family("random", k, g, random_even_T(k, rng))
    try:
        return FAMILIES[family](k)
    except KeyError:
        raise GraphError(f"unknown family {family!r}") from None


FAMILIES = {"fig3": fig3, "fig4": fig4, "fig5": fig5, "theta": theta, "cycle_st": cycle_st}
