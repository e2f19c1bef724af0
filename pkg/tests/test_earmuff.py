from __future__ import annotations

import random

from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs_2vc
from nicer_ears.algorithms import prepare
from nicer_ears.earmuff import endpoint_set, max_forest_representatives, maximum_earmuff, surplus
from nicer_ears.generators import fig4, random_eardrum
from nicer_ears.graph import Multigraph, UnionFind
from nicer_ears.oracle import mu_oracle, mu_rado


def test_three_cores_on_three_vertices():
    # cores 3, 4, 5 all see U = {0, 1, 2}; a forest on 3 vertices has 2 edges
    edges = [(c, u) for c in (3, 4, 5) for u in (0, 1, 2)]
    g = Multigraph(6, tuple(edges))
    cores = [(3,), (4,), (5,)]
    sets = [endpoint_set(g, f) for f in cores]
    state, cert = max_forest_representatives(range(3), sets)
    assert len(state.rep) == 2 == cert.value == mu_oracle(g, cores)
    assert cert.partition == (frozenset({0, 1, 2}),) and cert.surpluses == (1,)


def test_surplus_counts_contained_sets():
    sets = [frozenset({0, 1}), frozenset({1, 2}), frozenset({0, 3})]
    assert surplus({0, 1, 2}, sets) == 0
    assert surplus({0, 1}, sets) == 0
    assert surplus({0, 1}, sets + [frozenset({0, 1})]) == 1


@given(st.integers(0, 10**6))
def test_greedy_matches_enumeration(seed):
    g, cores, u = random_eardrum(random.Random(seed))
    sets = [endpoint_set(g, f) for f in cores]
    assert all(sets)
    state, cert = max_forest_representatives(range(u), sets)
    assert len(state.rep) == cert.verify(range(u), sets) == mu_oracle(g, cores) == mu_rado(g, cores)


@given(st.integers(0, 10**6), st.data())
def test_greedy_order_does_not_change_mu(seed, data):
    g, cores, u = random_eardrum(random.Random(seed))
    sets = [endpoint_set(g, f) for f in cores]
    order = data.draw(st.permutations(range(len(sets))))
    s1, _ = max_forest_representatives(range(u), sets)
    s2, _ = max_forest_representatives(range(u), sets, order)
    assert len(s1.rep) == len(s2.rep)


def test_fig4_unit_has_mu_one():
    F = fig4(1)
    prep = prepare(F.graph, F.hint)
    muff = maximum_earmuff(prep.nice, ())
    assert muff.mu == 1


@given(graphs_2vc(5, 9), st.data())
def test_maximum_earmuff_is_a_forest_of_clean_ear_paths(g, data):
    T = frozenset(data.draw(st.sets(st.integers(0, g.n - 1))))
    prep = prepare(g)
    muff = maximum_earmuff(prep.nice, T)
    muff.earmuff.validate(muff.eardrum)
    d = muff.decomposition
    assert d.is_nice() and d.even_count == prep.nice.even_count
    uf = UnionFind(g.n)
    for e in muff.earmuff.edges():
        assert uf.union(*g.edges[e])
    assert muff.mu == muff.certificate.verify(muff.U, muff.sets)
