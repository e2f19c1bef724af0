from __future__ import annotations

import itertools

import networkx as nx
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import graphs_2vc, graphs_with_T
from nicer_ears.errors import GraphError
from nicer_ears.graph import Multigraph, odd_vertices
from nicer_ears.matching import constrained_odd_join, max_weight_matching, min_t_join, min_weight_perfect_matching, tau
from nicer_ears.pairing import RemovablePairing


@st.composite
def weighted_graphs(draw):
    n = draw(st.integers(2, 9))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return n, [(i, j, draw(st.integers(-3, 20))) for i, j in chosen]


def _weight(edges, mate):
    w = {(min(i, j), max(i, j)): x for i, j, x in edges}
    return sum(w[(i, mate[i])] for i in range(len(mate)) if 0 <= mate[i] and i < mate[i])


@given(weighted_graphs(), st.booleans())
def test_matching_agrees_with_networkx(data, maxcard):
    n, edges = data
    mate = max_weight_matching(n, edges, maxcardinality=maxcard)
    for i, j in enumerate(mate):
        assert j == -1 or mate[j] == i
    G = nx.Graph()
    G.add_weighted_edges_from(edges)
    ref = nx.max_weight_matching(G, maxcardinality=maxcard)
    ref_w = sum(G[u][v]["weight"] for u, v in ref)
    assert _weight(edges, mate) == ref_w
    if maxcard:
        assert sum(1 for x in mate if x >= 0) // 2 == len(ref)


def test_perfect_matching_small():
    w = [[0, 1, 5, 5], [1, 0, 5, 5], [5, 5, 0, 2], [5, 5, 2, 0]]
    assert min_weight_perfect_matching(w) == [(0, 1), (2, 3)]
    with pytest.raises(GraphError):
        min_weight_perfect_matching([[0]])


def _brute_join(g: Multigraph, T, weight) -> int:
    best = None
    for mask in range(1 << g.m):
        ids = [e for e in range(g.m) if mask >> e & 1]
        if odd_vertices(g, ids) == T:
            c = sum(weight[e] for e in ids)
            best = c if best is None else min(best, c)
    return best


@given(graphs_with_T(max_n=6), st.data())
def test_min_t_join_is_minimum(gT, data):
    g, T = gT
    assume(g.m <= 12)
    weight = data.draw(st.lists(st.integers(-2, 4), min_size=g.m, max_size=g.m))
    res = min_t_join(g, T, weight)
    assert odd_vertices(g, res.edges) == T
    assert res.weight == sum(weight[e] for e in res.edges) == _brute_join(g, T, weight)


def test_tau_on_cycle():
    c6 = Multigraph(6, tuple((i, (i + 1) % 6) for i in range(6)))
    assert tau(c6, {0, 3}) == 3
    assert tau(c6, {0, 1, 2, 3}) == 2
    assert tau(c6, ()) == 0


@given(graphs_2vc(3, 6))
def test_constrained_odd_join_is_minimum(g):
    # one pair at the first vertex of degree >= 3, R = the pair plus a far edge
    v = next((v for v in range(g.n) if g.degree(v) >= 3), None)
    assume(v is not None and g.m <= 14)
    e1, e2 = g.incident(v)[:2]
    extra = next((e for e in range(g.m) if v not in g.edges[e]), None)
    R = (e1, e2) + ((extra,) if extra is not None else ())
    pairing = RemovablePairing(R, ((e1, e2),))
    assume(pairing.is_removable(g))
    res = constrained_odd_join(g, pairing)
    T = odd_vertices(g, range(g.m))
    assert odd_vertices(g, res.edges) == T
    assert not {e1, e2} <= set(res.edges)
    weight = [-1 if e in R else 1 for e in range(g.m)]
    best = None
    for mask in range(1 << g.m):
        ids = [e for e in range(g.m) if mask >> e & 1]
        if {e1, e2} <= set(ids) or odd_vertices(g, ids) != T:
            continue
        c = sum(weight[e] for e in ids)
        best = c if best is None else min(best, c)
    assert res.weight == best
    assert 3 * res.weight <= g.m - 2 * len(R)
