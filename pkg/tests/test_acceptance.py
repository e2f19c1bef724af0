"""Acceptance suite: one test per numbered criterion, at the stated tolerances.

The catalog run behind criteria 1, 8 and 10 is computed once per session;
LP values and oracle optima are cached per (graph, T).
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import pytest

from conftest import CATALOG_SEED, atlas_graphs, catalog, nontrivial_part
from nicer_ears import algorithms
from nicer_ears.algorithms import (
    RunTrace,
    connected_tjoin_3_2,
    construction_a,
    ms_tour,
    removable_pairing_from_ears,
    tour_from_2ecss,
    tsp_7_5,
    two_ecss_4_3,
)
from nicer_ears.earmuff import endpoint_set, max_forest_representatives, surplus
from nicer_ears.ears import decomposition_from_paths, even_ear_decomposition, min_even_ear_decomposition, open_ear_decomposition
from nicer_ears.generators import cycle_st, fig3, fig4, fig5, random_2vc, random_eardrum, random_even_T, theta
from nicer_ears.graph import Multigraph, blocks, connectivity_report
from nicer_ears.lp import lp_value
from nicer_ears.matching import tau
from nicer_ears.oracle import hamiltonian_cycle, mu_oracle, opt_2ecss, opt_connected_tjoin, opt_tour, phi_oracle
from nicer_ears.pairing import RemovablePairing
from nicer_ears.verify import verify_solution

T_PER_GRAPH = 50
MAX_N_PARTITION_LP = 7


def _key(g: Multigraph, T) -> tuple:
    return (g.n, g.edges, T)


@dataclass
class CatalogRun:
    graphs: int = 0
    tjoin_cases: int = 0
    ecss_cases: int = 0
    seconds: float = 0.0
    ratio_failures: list = field(default_factory=list)
    order_failures: list = field(default_factory=list)
    chain_failures: list = field(default_factory=list)
    l_mu_calls: int = 0
    ecss: list = field(default_factory=list)  # (graph, H) pairs for the reduction check


class _Cache:
    def __init__(self) -> None:
        self._lp: dict = {}
        self._opt: dict = {}

    def lp_value(self, g: Multigraph, T=None) -> Fraction:
        k = _key(g, T)
        if k not in self._lp:
            self._lp[k] = lp_value(g, T).value
        return self._lp[k]

    def opt(self, kind: str, g: Multigraph, T=frozenset()) -> int:
        k = (kind,) + _key(g, T)
        if k not in self._opt:
            fn = {"tsp": opt_tour, "2ecss": opt_2ecss}.get(kind)
            self._opt[k] = (fn(g) if fn else opt_connected_tjoin(g, T)).value
        return self._opt[k]


def _record_l_mu(run: CatalogRun, monkeypatch: pytest.MonkeyPatch) -> None:
    real = algorithms.l_mu

    def recording(g, cores, mu=None, T=(), certificate=None):
        res = real(g, cores, mu, T, certificate)
        run.l_mu_calls += 1
        w = res.witness
        if w.verify(g, T) != res.value or set(w.chain) != {res.value}:
            run.chain_failures.append((g.edges, tuple(T), w.chain, res.value))
        return res

    monkeypatch.setattr(algorithms, "l_mu", recording)


def _check_block_order(run: CatalogRun, cache: _Cache, g: Multigraph, trace: RunTrace, T=frozenset()) -> None:
    bt = blocks(g)
    parts = bt.split_T(T)
    for info in trace.blocks:
        if info.get("method") != "pipeline":
            continue
        view = bt.view(info["block"])
        b, Tb = view.graph, frozenset(view.to_local(parts[info["block"]]))
        lp_b = cache.lp_value(b)
        ok = info["L_mu"] <= cache.lp_value(b, Tb) and info["L_phi"] <= lp_b and lp_b >= b.n
        if "Lambda" in info:
            ok &= info["Lambda"] <= lp_b
        if not ok:
            run.order_failures.append((g.edges, tuple(sorted(T)), info))


def _catalog_case(run: CatalogRun, cache: _Cache, i: int, g: Multigraph) -> None:
    fails = run.ratio_failures
    lp = cache.lp_value(g)
    if lp < g.n:
        run.order_failures.append((g.edges, "LP(G) < n", lp))

    trace = RunTrace()
    tour = tsp_7_5(g, trace=trace)
    if not verify_solution(tour, "tsp") or 5 * tour.cardinality > 7 * lp or tour.cardinality < cache.opt("tsp", g):
        fails.append(("tsp", g.edges, tour.cardinality, lp))
    _check_block_order(run, cache, g, trace)

    if g.n <= MAX_N_PARTITION_LP:
        rng = random.Random(CATALOG_SEED + i)
        for _ in range(T_PER_GRAPH):
            T = random_even_T(g.n, rng)
            trace = RunTrace()
            sol = connected_tjoin_3_2(g, T, trace=trace)
            lp_T = cache.lp_value(g, T)
            run.tjoin_cases += 1
            if (
                not verify_solution(sol, "tjoin", T)
                or 2 * sol.cardinality > 3 * lp_T
                or sol.cardinality < cache.opt("tjoin", g, T)
            ):
                fails.append(("tjoin", g.edges, sorted(T), sol.cardinality, lp_T))
            _check_block_order(run, cache, g, trace, T)

    if connectivity_report(g).is_2EC:
        H = two_ecss_4_3(g)
        run.ecss_cases += 1
        if not verify_solution(H, "2ecss") or 3 * H.cardinality > 4 * lp or H.cardinality < cache.opt("2ecss", g):
            fails.append(("2ecss", g.edges, H.cardinality, lp))
        run.ecss.append((g, H))


@pytest.fixture(scope="session")
def catalog_run() -> CatalogRun:
    run, cache = CatalogRun(), _Cache()
    start = time.perf_counter()
    with pytest.MonkeyPatch.context() as mp:
        _record_l_mu(run, mp)
        for i, g in enumerate(catalog()):
            _catalog_case(run, cache, i, g)
            run.graphs += 1
    run.seconds = time.perf_counter() - start
    return run


@pytest.fixture(scope="session")
def fig5_runs() -> dict:
    out = {}
    for k in (1, 2):
        F = fig5(k)
        ham = tuple(hamiltonian_cycle(F.graph))
        out[k] = (F, ham, two_ecss_4_3(F.graph, F.hint))
    return out


# 1 ------------------------------------------------------------------------


def test_criterion_1_ratio_suite(catalog_run):
    run = catalog_run
    assert run.graphs == len(atlas_graphs()) + 300 == 1294
    assert run.tjoin_cases > 0 and run.ecss_cases > 0
    assert run.ratio_failures == []
    assert run.seconds < 600, f"catalog took {run.seconds:.0f}s"


# 2 ------------------------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_criterion_2_fig3(k):
    F = fig3(k)
    g = F.graph
    assert opt_connected_tjoin(g, F.T).value == 8 * k + 4
    assert even_ear_decomposition(g, F.hint).phi == 2
    sol = connected_tjoin_3_2(g, F.T, F.hint)
    assert sol.cardinality <= 12 * k + 6
    assert verify_solution(sol, "tjoin", F.T)


# 3 ------------------------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 3])
def test_criterion_3_fig4(k):
    F = fig4(k)
    g = F.graph
    lp = lp_value(g, hamiltonian=F.hamiltonian).value
    assert opt_tour(g, hamiltonian=F.hamiltonian).value == lp == 10 * k + 1
    assert even_ear_decomposition(g, F.hint).phi == 0
    trace = RunTrace()
    tour = tsp_7_5(g, F.hint, trace)
    assert verify_solution(tour, "tsp")
    assert tour.cardinality <= 14 * k
    assert 5 * tour.cardinality <= 7 * (10 * k + 1)
    (block,) = trace.blocks
    assert block["Lambda"] == 10 * k


# 4 ------------------------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2])
def test_criterion_4_fig5(k, fig5_runs):
    F, ham, H = fig5_runs[k]
    g = F.graph
    assert lp_value(g, hamiltonian=ham).value == 24 * k
    assert opt_2ecss(g, hamiltonian=ham).value == 24 * k
    assert even_ear_decomposition(g, F.hint).phi == 1
    assert verify_solution(H, "2ecss")
    assert H.cardinality <= 32 * k
    given = decomposition_from_paths(g, F.hint)
    assert construction_a(given).cardinality == 32 * k - 1


# 5 ------------------------------------------------------------------------


def test_criterion_5_phi_tau_identities():
    checked = 0
    for g in atlas_graphs():
        if not connectivity_report(g).is_2EC:
            continue
        phi, _ = phi_oracle(g)
        assert min_even_ear_decomposition(g).decomposition.even_count == phi
        n = g.n
        best = max(tau(g, frozenset(T)) for s in range(0, n + 1, 2) for T in itertools.combinations(range(n), s))
        assert Fraction(best) == Fraction(n + phi - 1, 2)
        checked += 1
    assert checked > 500


# 6 ------------------------------------------------------------------------


def test_criterion_6_earmuff_min_max():
    rng = random.Random(CATALOG_SEED)
    for _ in range(200):
        g, cores, u = random_eardrum(rng)
        assert u <= 8
        sets = [endpoint_set(g, f) for f in cores]
        state, cert = max_forest_representatives(range(u), sets)
        # certificate checked by recomputing every surplus from the sets
        assert sorted(v for W in cert.partition for v in W) == list(range(u))
        direct = len(cores) - sum(surplus(W, sets) for W in cert.partition)
        assert len(state.rep) == mu_oracle(g, cores) == direct == cert.verify(range(u), sets)


# 7 ------------------------------------------------------------------------


def _ms_case(g: Multigraph, pairing: RemovablePairing) -> None:
    r = len(pairing.R)
    if r <= 14:
        assert pairing.violation(g) is None
    tour = ms_tour(g, pairing)
    assert verify_solution(tour, "tsp")
    assert Fraction(tour.cardinality) <= Fraction(4, 3) * g.m - Fraction(2, 3) * r


def test_criterion_7_pairing_tours():
    rng = random.Random(CATALOG_SEED)
    exhaustive = 0
    for _ in range(100):
        n = rng.randint(3, 10)
        g = random_2vc(n, rng.randint(0, n), rng, simple=True)
        h, d = nontrivial_part(g)
        _ms_case(h, removable_pairing_from_ears(d))
        first_edges = RemovablePairing(tuple(ear.edges[0] for ear in open_ear_decomposition(g).ears), ())
        _ms_case(g, first_edges)
        exhaustive += len(first_edges.R) <= 14
    assert exhaustive > 0


# 8 ------------------------------------------------------------------------


def test_criterion_8_lower_bound_ordering(catalog_run, fig5_runs):
    assert catalog_run.order_failures == []
    calls = []
    real = algorithms.l_mu

    def recording(g, cores, mu=None, T=(), certificate=None):
        res = real(g, cores, mu, T, certificate)
        calls.append(res.witness.verify(g, T) == res.value and set(res.witness.chain) == {res.value})
        return res

    with pytest.MonkeyPatch.context() as mp:
        mp.setattr(algorithms, "l_mu", recording)
        for k in (1, 2, 3):
            F = fig4(k)
            trace = RunTrace()
            tsp_7_5(F.graph, F.hint, trace)
            lp = lp_value(F.graph, hamiltonian=F.hamiltonian).value
            (b,) = trace.blocks
            assert b["L_phi"] <= lp and b["Lambda"] <= lp and lp >= F.graph.n
        for k, (F, ham, _) in fig5_runs.items():
            trace = RunTrace()
            two_ecss_4_3(F.graph, F.hint, trace)
            lp = lp_value(F.graph, hamiltonian=ham).value
            (b,) = trace.blocks
            assert b["L_phi"] <= lp and lp >= F.graph.n
    assert calls and all(calls)
    assert catalog_run.l_mu_calls > 0
    assert catalog_run.chain_failures == []


# 9 ------------------------------------------------------------------------


@pytest.mark.xfail(strict=True, reason="the optimum is 3n - 2 (see the frozen test below)")
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_criterion_9_cycle_st_claimed_3n(n):
    F = cycle_st(n)
    assert lp_value(F.graph, F.T).value == 2 * n
    assert opt_connected_tjoin(F.graph, F.T).value == 3 * n


@pytest.mark.xfail(strict=True, reason="the optimum is 4k - 2 (see the frozen test below)")
@pytest.mark.parametrize("k", [2, 3, 4])
def test_criterion_9_theta_claimed_4k(k):
    g = theta(k).graph
    assert lp_value(g).value == 3 * k
    assert opt_tour(g).value == 4 * k


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_criterion_9_cycle_st_frozen(n):
    F = cycle_st(n)
    assert lp_value(F.graph, F.T).value == 2 * n
    assert opt_connected_tjoin(F.graph, F.T).value == 3 * n - 2


@pytest.mark.parametrize("k", [2, 3, 4])
def test_criterion_9_theta_frozen(k):
    g = theta(k).graph
    assert lp_value(g).value == 3 * k
    assert opt_tour(g).value == 4 * k - 2


# 10 -----------------------------------------------------------------------


def test_criterion_10_reduction(catalog_run, fig5_runs):
    cases = list(catalog_run.ecss) + [(F.graph, H) for F, _, H in fig5_runs.values()]
    assert len(cases) == catalog_run.ecss_cases + 2
    for g, H in cases:
        tour = tour_from_2ecss(g, H)
        assert verify_solution(tour, "tsp")
        assert 3 * tour.cardinality <= 2 * (H.cardinality + g.n - 1)
