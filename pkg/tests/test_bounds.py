from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs_2vc
from nicer_ears.algorithms import prepare
from nicer_ears.bounds import BoundsCertificate, MuWitness, l_mu, l_phi, lambda_bound
from nicer_ears.earmuff import maximum_earmuff
from nicer_ears.errors import GraphError, InternalError
from nicer_ears.generators import fig4
from nicer_ears.graph import Multigraph
from nicer_ears.lp import lp_value


def test_l_phi_parity():
    assert l_phi(Multigraph(5, tuple((i, (i + 1) % 5) for i in range(5))), 0) == 4
    with pytest.raises(InternalError):
        l_phi(Multigraph(4, tuple((i, (i + 1) % 4) for i in range(4))), 0)


def test_lambda_is_weighted_mean():
    assert lambda_bound(10, 10) == 10
    assert lambda_bound(11, 10) == Fraction(32, 3)


def test_fig4_bounds():
    F = fig4(1)
    muff = maximum_earmuff(prepare(F.graph, F.hint).nice, ())
    b = l_mu(F.graph, muff.active_cores, muff.mu)
    assert b.value == 10 and b.mu == 1
    assert lambda_bound(b.value, l_phi(F.graph, 0)) == 10


def test_wrong_mu_is_rejected():
    F = fig4(1)
    muff = maximum_earmuff(prepare(F.graph, F.hint).nice, ())
    with pytest.raises(GraphError):
        l_mu(F.graph, muff.active_cores, muff.mu + 1)


def test_witness_detects_overload(c4):
    # two singleton cuts at adjacent vertices plus the partition into singletons overload edge 0-1
    w = MuWitness(
        tuple(frozenset([v]) for v in range(4)), (frozenset([0]),), (4, 4)
    )
    with pytest.raises(InternalError):
        w.verify(c4)


@given(graphs_2vc(4, 7), st.data())
def test_bounds_below_lp(g, data):
    T = frozenset(data.draw(st.sets(st.integers(0, g.n - 1))))
    if len(T) % 2:
        T ^= {0}
    prep = prepare(g)
    muff = maximum_earmuff(prep.nice, T)
    b = l_mu(g, muff.active_cores, muff.mu, T, muff.certificate)
    assert b.witness.verify(g, T) == b.value
    lp, lp_T = lp_value(g).value, lp_value(g, T).value
    assert b.value <= lp_T
    muff0 = maximum_earmuff(prep.nice, ())
    L_mu0 = l_mu(g, muff0.active_cores, muff0.mu, (), muff0.certificate).value
    cert = BoundsCertificate(l_phi(g, prep.even.phi), L_mu0, None, lp, lp_value(g, ()).value)
    assert cert.L_phi <= lp and cert.Lambda <= lp and L_mu0 <= lp
    assert cert.ordering_holds()
