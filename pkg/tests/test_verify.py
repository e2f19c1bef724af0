from __future__ import annotations

import pytest

from nicer_ears.generators import fig3
from nicer_ears.graph import SolutionMultiset
from nicer_ears.oracle import opt_connected_tjoin
from nicer_ears.verify import verify_solution


def test_c4_tour_passes(c4):
    assert verify_solution(SolutionMultiset.from_edges(c4, range(4)), "tsp")
    assert verify_solution(SolutionMultiset.from_edges(c4, range(4)), "2ecss")


def test_c4_missing_edge_fails(c4):
    res = verify_solution(SolutionMultiset.from_edges(c4, range(3)), "tsp")
    assert not res and "parity" in res.reason


def test_tjoin_parity_against_T(c4):
    path = SolutionMultiset.from_edges(c4, [0, 1, 2])
    assert verify_solution(path, "tjoin", {0, 3})
    assert not verify_solution(path, "tjoin", {0, 2})


def test_disconnected_support_fails(c4):
    sol = SolutionMultiset.from_counts(c4, [2, 0, 0, 0])
    res = verify_solution(sol, "tsp")
    assert not res and "connected" in res.reason


def test_2ecss_rules(c4, bowtie):
    doubled = SolutionMultiset.from_counts(c4, [2, 1, 1, 1])
    assert "twice" in verify_solution(doubled, "2ecss").reason
    path_twice = SolutionMultiset.from_counts(c4, [2, 2, 2, 0])
    assert verify_solution(path_twice, "tsp")
    spanning_tree = SolutionMultiset.from_edges(c4, [0, 1, 2])
    assert "2-edge" in verify_solution(spanning_tree, "2ecss").reason


def test_fig3_oracle_witness_passes():
    F = fig3(1)
    res = opt_connected_tjoin(F.graph, F.T)
    check = verify_solution(res.witness, "tjoin", F.T)
    assert check and check.cardinality == 12


def test_unknown_problem(c4):
    with pytest.raises(ValueError):
        verify_solution(SolutionMultiset.empty(c4), "steiner")
