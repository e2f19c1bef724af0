from __future__ import annotations

import pytest
from hypothesis import given

from conftest import graphs_connected
from nicer_ears.errors import ParseError
from nicer_ears.graph import SolutionMultiset
from nicer_ears.io import format_instance, format_solution, parse_graph, parse_solution

C4 = "c square\np 4 4\ne 1 2\ne 2 3\ne 3 4\ne 4 1\nt 1 3\n"


def test_parse_c4():
    inst = parse_graph(C4, "c4")
    assert inst.graph.n == 4 and inst.graph.edges[0] == (0, 1)
    assert inst.T == frozenset({0, 2}) and inst.hint is None


@pytest.mark.parametrize(
    "text,line",
    [
        ("e 1 2\n", 1),
        ("p 2 1\ne 1 1\n", 2),
        ("p 2 1\ne 1 3\n", 2),
        ("p 2 2\ne 1 2\n", 0),
        ("p 3 2\ne 1 2\ne 2 3\nt 1\n", 4),
        ("p 2 1\ne 1 x\n", 2),
        ("p 2 1\nq 1\n", 2),
    ],
)
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(ParseError) as err:
        parse_graph(text)
    assert err.value.line == line


def test_solution_round_trip():
    inst = parse_graph(C4)
    sol = parse_solution("x 1 2\nx 3 1\n", inst.graph)
    assert sol.multiplicity == (2, 0, 1, 0)
    assert parse_solution(format_solution(sol), inst.graph).multiplicity == sol.multiplicity
    with pytest.raises(ParseError):
        parse_solution("x 5 1\n", inst.graph)
    with pytest.raises(ParseError):
        parse_solution("x 1 2\nx 1 1\n", inst.graph)


def test_annotations_round_trip():
    inst = parse_graph(C4)
    text = format_instance(inst.graph, inst.T, "with ears", [[0, 1, 2, 3, 0]], [0, 1, 2, 3])
    back = parse_graph(text)
    assert back.hint == ((0, 1, 2, 3, 0),) and back.hamiltonian == (0, 1, 2, 3)
    with pytest.raises(ParseError):
        parse_graph("c ear 1 9\np 2 1\ne 1 2\n")


@given(graphs_connected(1, 9))
def test_instance_text_round_trip(g):
    back = parse_graph(g.to_text())
    assert back.graph.n == g.n and back.graph.edges == g.edges
    empty = SolutionMultiset.empty(g)
    assert format_solution(empty) == ""
