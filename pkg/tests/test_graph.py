from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given

from conftest import graphs_2ec, graphs_with_T
from nicer_ears.errors import GraphError, InfeasibleError
from nicer_ears.graph import (
    Multigraph,
    SolutionMultiset,
    UnionFind,
    blocks,
    check_even_T,
    connectivity_report,
    is_connected,
    odd_vertices,
)


def to_nx(g: Multigraph) -> nx.MultiGraph:
    G = nx.MultiGraph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)
    return G


def test_union_find_counts_components():
    uf = UnionFind(4)
    assert uf.union(0, 1) and uf.union(2, 3)
    assert not uf.union(1, 0)
    assert uf.count == 2


def test_loops_and_bad_endpoints_rejected():
    with pytest.raises(GraphError):
        Multigraph(2, ((0, 0),))
    with pytest.raises(GraphError):
        Multigraph(2, ((0, 2),))


def test_connectivity_classes(c4, bowtie):
    assert connectivity_report(c4).is_2VC
    rep = connectivity_report(bowtie)
    assert rep.is_2EC and not rep.is_2VC
    path = Multigraph(3, ((0, 1), (1, 2)))
    rep = connectivity_report(path)
    assert not rep.is_2EC and rep.bridges == (0, 1)


def test_parallel_pair_is_2vc():
    assert connectivity_report(Multigraph(2, ((0, 1), (0, 1)))).is_2VC


def test_blocks_of_bowtie(bowtie):
    bt = blocks(bowtie)
    assert len(bt.blocks) == 2
    assert bt.cut_vertices == frozenset({2})


def test_split_T_gives_even_block_sets(bowtie):
    bt = blocks(bowtie)
    parts = bt.split_T({0, 4})
    assert all(len(p) % 2 == 0 for p in parts)
    assert sorted(map(sorted, parts)) == [[0, 2], [2, 4]]


def test_solution_multiset(c4):
    sol = SolutionMultiset.from_edges(c4, [0, 1, 2])
    assert sol.cardinality == 3
    assert sol.odd_vertices() == frozenset({0, 3})
    assert sol.is_connected_spanning()
    doubled = sol + SolutionMultiset.from_edges(c4, [0])
    assert doubled.multiplicity == (2, 1, 1, 0)
    with pytest.raises(GraphError):
        SolutionMultiset(c4, (3, 0, 0, 0))


def test_check_even_T(c4):
    assert check_even_T(c4, [0, 1]) == frozenset({0, 1})
    with pytest.raises(InfeasibleError):
        check_even_T(c4, [0])


@given(graphs_2ec(2, 9))
def test_connectivity_matches_networkx(g):
    G = to_nx(g)
    rep = connectivity_report(g)
    assert rep.is_2EC == _no_multi_bridge(G)
    assert rep.is_2VC == (rep.is_2EC and (g.n == 2 or nx.is_biconnected(nx.Graph(G))))


def _no_multi_bridge(G: nx.MultiGraph) -> bool:
    # a bridge of the simple graph is not a bridge when the edge is doubled
    H = nx.Graph(G)
    return nx.is_connected(H) and all(G.number_of_edges(u, v) > 1 for u, v in nx.bridges(H))


@given(graphs_2ec(3, 9))
def test_blocks_partition_edges(g):
    bt = blocks(g)
    seen = sorted(e for b in bt.blocks for e in b.edges)
    assert seen == list(range(g.m))
    for i in range(len(bt.blocks)):
        assert connectivity_report(bt.view(i).graph).is_2VC or bt.blocks[i].is_bridge


@given(graphs_with_T())
def test_odd_vertices_of_full_edge_set(gT):
    g, _ = gT
    odd = odd_vertices(g, range(g.m))
    assert odd == frozenset(v for v in range(g.n) if g.degree(v) % 2)
    assert is_connected(g.n, g.edges)
