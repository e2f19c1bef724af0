from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs_2ec, graphs_2vc, graphs_connected, nontrivial_part
from nicer_ears.algorithms import (
    RunTrace,
    christofides_tjoin_5_3,
    connected_tjoin_3_2,
    connected_tjoin_via_earmuff,
    connected_tjoin_via_induction,
    construction_a,
    ms_tour,
    prepare,
    removable_pairing_from_ears,
    tour_from_2ecss,
    tour_to_2ecss,
    tsp_7_5,
    two_ecss_4_3,
)
from nicer_ears.earmuff import maximum_earmuff
from nicer_ears.ears import EarDecomposition, Ear
from nicer_ears.errors import GraphError
from nicer_ears.graph import Multigraph, connectivity_report
from nicer_ears.lp import lp_value
from nicer_ears.oracle import opt_2ecss, opt_connected_tjoin, opt_tour
from nicer_ears.verify import verify_solution


def _even_T(g, data):
    T = set(data.draw(st.sets(st.integers(0, g.n - 1))))
    if len(T) % 2:
        T ^= {0}
    return frozenset(T)


@given(graphs_connected(2, 7), st.data())
def test_connected_tjoin_bounds(g, data):
    T = _even_T(g, data)
    sol = connected_tjoin_3_2(g, T)
    assert verify_solution(sol, "tjoin", T)
    assert sol.cardinality >= opt_connected_tjoin(g, T).value
    assert 2 * sol.cardinality <= 3 * lp_value(g, T).value


@given(graphs_connected(2, 7))
def test_tsp_bounds(g):
    sol = tsp_7_5(g)
    assert verify_solution(sol, "tsp")
    assert sol.cardinality >= opt_tour(g).value
    assert 5 * sol.cardinality <= 7 * lp_value(g).value


@given(graphs_2ec(2, 7))
def test_two_ecss_bounds(g):
    sol = two_ecss_4_3(g)
    assert verify_solution(sol, "2ecss")
    assert sol.cardinality >= opt_2ecss(g).value
    assert 3 * sol.cardinality <= 4 * lp_value(g).value


@given(graphs_connected(2, 8), st.data())
def test_christofides_baseline(g, data):
    T = _even_T(g, data)
    sol = christofides_tjoin_5_3(g, T)
    assert verify_solution(sol, "tjoin", T)
    assert 3 * sol.cardinality <= 5 * opt_connected_tjoin(g, T).value


@given(graphs_2vc(5, 9), st.data())
def test_both_constructions_are_connected_tjoins(g, data):
    T = _even_T(g, data)
    prep = prepare(g)
    muff = maximum_earmuff(prep.nice, T)
    d = muff.decomposition
    info: dict = {}
    A = connected_tjoin_via_earmuff(d, T, muff.mu, info)
    B = connected_tjoin_via_induction(d, T)
    for sol in (A, B):
        assert verify_solution(sol, "tjoin", T)
    assert 2 * B.cardinality <= 3 * (g.n - 1) + 2 * d.pi2 - d.even_count


@given(graphs_connected(2, 7))
def test_tour_to_2ecss_composition(g):
    if not connectivity_report(g).is_2EC:
        return
    tour = tsp_7_5(g)
    assert verify_solution(tour_to_2ecss(g, tour), "2ecss")


@given(graphs_2ec(2, 8))
def test_tour_from_2ecss_composition(g):
    H = two_ecss_4_3(g)
    tour = tour_from_2ecss(g, H)
    assert verify_solution(tour, "tsp")
    assert 3 * tour.cardinality <= 2 * (H.cardinality + g.n - 1)


@given(graphs_2vc(3, 9, simple=True))
def test_ms_tour_with_ear_pairing(g):
    h, d = nontrivial_part(g)
    pairing = removable_pairing_from_ears(d)
    assert len(pairing.R) == 2 * d.k - d.pi
    if len(pairing.R) <= 14:
        assert pairing.violation(h) is None
    tour = ms_tour(h, pairing)
    assert verify_solution(tour, "tsp")
    assert 3 * tour.cardinality <= 4 * h.m - 2 * len(pairing.R)


def test_closed_two_ear_has_no_pair():
    g = Multigraph(3, ((0, 1), (1, 2), (2, 0), (0, 1)))
    d = EarDecomposition(g, (Ear((0, 1, 0), (0, 3)), Ear((0, 2, 1), (2, 1))), 0)
    with pytest.raises(GraphError):
        removable_pairing_from_ears(d)


def test_construction_a_counts_nontrivial_edges(k4):
    prep = prepare(k4)
    assert construction_a(prep.nice).cardinality == sum(e.length for e in prep.nice.ears if not e.trivial)


def test_trace_digest_is_deterministic(k4):
    t1, t2 = RunTrace(), RunTrace()
    tsp_7_5(k4, trace=t1)
    tsp_7_5(k4, trace=t2)
    assert t1.as_dict() == t2.as_dict() and t1.digest() == t2.digest()
    assert t1.algorithm == "tsp_7_5" and t1.cardinality == 4


def test_trace_serializes_fractions():
    t = RunTrace("x")
    t.add(Lambda=Fraction(32, 3))
    assert t.as_dict()["blocks"][0]["Lambda"] == "32/3"


def test_two_ecss_rejects_bridges():
    with pytest.raises(GraphError):
        two_ecss_4_3(Multigraph(3, ((0, 1), (1, 2))))


def test_single_vertex():
    g = Multigraph(1, ())
    assert tsp_7_5(g).cardinality == 0
    assert connected_tjoin_3_2(g).cardinality == 0
