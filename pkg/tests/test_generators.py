from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nicer_ears.ears import decomposition_from_paths
from nicer_ears.errors import GraphError
from nicer_ears.generators import cycle_st, fig3, fig4, fig5, generate, random_2ec, random_2vc, theta
from nicer_ears.graph import connectivity_report
from nicer_ears.io import format_instance, parse_graph
from nicer_ears.oracle import _checked_cycle

COUNTS = {
    "fig3": lambda k: (8 * k + 5, 12 * k + 5),
    "fig4": lambda k: (10 * k + 1, 13 * k + 1),
    "fig5": lambda k: (24 * k, 44 * k - 2),
}


@pytest.mark.parametrize("name", sorted(COUNTS))
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_family_counts_round_trip(name, k):
    F = generate(name, k)
    text = format_instance(F.graph, F.T or None, f"{name} k={k}", F.hint, F.hamiltonian)
    inst = parse_graph(text)
    assert (inst.graph.n, inst.graph.m) == COUNTS[name](k) == (F.graph.n, F.graph.m)
    assert inst.graph.edges == F.graph.edges and inst.hint == F.hint
    assert connectivity_report(F.graph).is_2VC
    assert len(set(map(frozenset, F.graph.edges))) == F.graph.m


def test_fig3_k3_example():
    F = fig3(3)
    assert (F.graph.n, F.graph.m, len(F.T)) == (29, 41, 2)


def test_theta_k2_example():
    g = theta(2).graph
    assert (g.n, g.m) == (5, 6)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_fig4_hamiltonian_circuit(k):
    F = fig4(k)
    assert len(_checked_cycle(F.graph, F.hamiltonian)) == F.graph.n


@pytest.mark.parametrize("maker,k", [(fig3, 2), (fig4, 2), (fig5, 2), (theta, 3), (cycle_st, 3)])
def test_hints_are_decompositions(maker, k):
    F = maker(k)
    d = decomposition_from_paths(F.graph, F.hint)
    assert d.ears[0].closed


def test_fig5_hint_structure():
    F = fig5(2)
    d = decomposition_from_paths(F.graph, F.hint)
    lengths = sorted(e.length for e in d.ears if not e.trivial)
    assert lengths == [2] + [3] * 7 + [5] * 8
    assert d.even_count == 1


def test_bad_parameters():
    with pytest.raises(GraphError):
        fig3(0)
    with pytest.raises(GraphError):
        generate("nope", 1)


@given(st.integers(3, 10), st.integers(0, 6), st.integers(0, 10**6))
def test_random_generators_hit_their_class(n, extra, seed):
    assert connectivity_report(random_2ec(n, extra, random.Random(seed))).is_2EC
    g = random_2vc(n, extra, random.Random(seed), simple=True)
    assert connectivity_report(g).is_2VC
    assert len(set(map(frozenset, g.edges))) == g.m


def test_random_family_is_seeded():
    a, b = generate("random", 7, seed=5), generate("random", 7, seed=5)
    assert a.graph.edges == b.graph.edges and a.T == b.T
