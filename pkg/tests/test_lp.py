from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs_2ec
from nicer_ears.errors import CapabilityError, GraphError
from nicer_ears.generators import cycle_st, fig4, theta
from nicer_ears.graph import Multigraph
from nicer_ears.lp import _matrix, constraint_rows, exact_simplex, lp_value, set_partitions


def test_set_partitions_count():
    assert sum(1 for _ in set_partitions(range(5))) == 52


def test_cycle_lp_is_n(c4, k4):
    assert lp_value(c4).value == 4
    assert lp_value(k4).value == 4


@pytest.mark.parametrize("k", [2, 3, 4])
def test_theta_lp(k):
    # the half-integral point (1/2 on every edge of the doubled theta) is optimal
    assert lp_value(theta(k).graph).value == 3 * k


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cycle_st_lp_is_2n(n):
    F = cycle_st(n)
    assert lp_value(F.graph, F.T).value == 2 * n


def test_hamiltonian_sandwich_skips_enumeration():
    F = fig4(2)
    res = lp_value(F.graph, hamiltonian=F.hamiltonian)
    assert res.value == F.graph.n and res.method == "hamiltonian"
    with pytest.raises(CapabilityError):
        lp_value(F.graph)


def test_disconnected_rejected():
    with pytest.raises(GraphError):
        lp_value(Multigraph(3, ((0, 1),)))


@given(graphs_2ec(3, 6), st.data())
def test_exact_simplex_matches_highs(g, data):
    T = frozenset(data.draw(st.sets(st.integers(0, g.n - 1))))
    if len(T) % 2:
        T ^= {0}
    rows = constraint_rows(g, T if T else None)
    A, b = _matrix(rows, g.m)
    val, x, y = exact_simplex(A, b)
    assert val == lp_value(g, T).value
    X = np.array([float(v) for v in x])
    assert (A.dot(X) >= b - 1e-9).all()
    assert sum(yi * bi for yi, bi in zip(y, b.tolist())) == val


@given(graphs_2ec(3, 7))
def test_lp_certificate_is_exact(g):
    res = lp_value(g)
    assert sum(res.x) == res.value
    assert res.value >= g.n
    # dual feasibility: every edge is covered at most once
    for e, (u, v) in enumerate(g.edges):
        load = sum(y for (kind, W), y in res.dual.items() if kind == "cut" and (u in W) != (v in W))
        assert load <= 1
