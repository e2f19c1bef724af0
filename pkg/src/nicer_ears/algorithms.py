"""Approximation algorithms for connected-T-joins (3/2), graphic TSP (7/5) and 2ECSS (4/3).

Every public routine validates its output and checks the guarantee it
promises with exact integer or rational arithmetic; a failed check raises
``InternalError`` instead of returning a weaker answer.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .bounds import l_mu, l_phi, lambda_bound
from .earmuff import MuffResult, maximum_earmuff
from .ears import (
    Ear,
    EarDecomposition,
    EvenEarResult,
    eardrum_of,
    even_ear_decomposition,
    make_nice,
    open_ear_decomposition,
    reduce_ear,
)
from .errors import GraphError, InfeasibleError, InternalError, check
from .graph import (
    GraphView,
    Multigraph,
    SolutionMultiset,
    UnionFind,
    blocks,
    check_even_T,
    connectivity_report,
    is_connected,
    odd_vertices,
    require_connected,
)
from .matching import constrained_odd_join, min_t_join
from .pairing import RemovablePairing

__all__ = [
    "RunTrace",
    "connected_tjoin_via_earmuff",
    "connected_tjoin_via_induction",
    "connected_tjoin_3_2",
    "removable_pairing_from_ears",
    "ms_tour",
    "tsp_7_5",
    "two_ecss_4_3",
    "construction_a",
    "tour_to_2ecss",
    "tour_from_2ecss",
    "christofides_tjoin_5_3",
    "is_tour",
    "is_connected_tjoin",
    "is_2ecss",
]


# ---------------------------------------------------------------------------
# traces and validators


@dataclass
class RunTrace:
    """What happened during one run: per-block branch data and bound values.

    Entries are plain dicts of ints, strings and Fractions so they can be
    serialized; ``digest`` is a stable hash over them.
    """

    algorithm: str = ""
    blocks: list[dict] = field(default_factory=list)
    cardinality: int | None = None

    def add(self, **info) -> dict:
        self.blocks.append(info)
        return info

    def as_dict(self) -> dict:
        def conv(x):
            if isinstance(x, Fraction):
                return f"{x.numerator}/{x.denominator}"
            if isinstance(x, dict):
                return {str(k): conv(v) for k, v in x.items()}
            if isinstance(x, (list, tuple, frozenset, set)):
                items = sorted(x) if isinstance(x, (frozenset, set)) else x
                return [conv(v) for v in items]
            return x

        return {"algorithm": self.algorithm, "cardinality": self.cardinality, "blocks": conv(self.blocks)}

    def digest(self) -> str:
        data = json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(data.encode()).hexdigest()[:16]


def is_connected_tjoin(sol: SolutionMultiset, T: Iterable[int]) -> bool:
    return sol.odd_vertices() == frozenset(T) and sol.is_connected_spanning()


def is_tour(sol: SolutionMultiset) -> bool:
    return is_connected_tjoin(sol, ())


def is_2ecss(sol: SolutionMultiset) -> bool:
    if any(x > 1 for x in sol.multiplicity):
        return False
    sub = sol.as_multigraph().graph
    return connectivity_report(sub).is_2EC


def _lift_counts(view: GraphView, counts: Sequence[int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for i, x in enumerate(counts):
        if x:
            e = view.edge_map[i]
            out[e] = out.get(e, 0) + x
    return out


def _local_ear(view: GraphView, ear: Ear) -> Ear:
    lv, le = view.local_vertices(), view.local_edges()
    return Ear(tuple(lv[v] for v in ear.vertices), tuple(le[e] for e in ear.edges))


def _same_graph(a: Multigraph, b: Multigraph) -> bool:
    return a is b or (a.n == b.n and a.edges == b.edges)


def _degenerate(g: Multigraph) -> bool:
    """Blocks handed to the exact search: tiny, or a single circuit."""
    return g.n <= 4 or g.m == g.n


# ---------------------------------------------------------------------------
# the decomposition pipeline


_PIPELINE_CACHE: dict = {}


@dataclass(frozen=True, eq=False)
class Prepared:
    """Even-ear decomposition made nice (nice-ness does not depend on T)."""

    even: EvenEarResult
    nice: EarDecomposition
    steps: tuple[str, ...]


def prepare(g: Multigraph, hint: Sequence[Sequence[int]] | None = None) -> Prepared:
    key = (g.n, g.edges, None if hint is None else tuple(tuple(p) for p in hint))
    hit = _PIPELINE_CACHE.get(key)
    if hit is not None:
        return hit
    ev = even_ear_decomposition(g, hint)
    nr = make_nice(ev.decomposition, (), ev.phi)
    out = Prepared(ev, nr.decomposition, nr.steps)
    if len(_PIPELINE_CACHE) > 4096:
        _PIPELINE_CACHE.clear()
    _PIPELINE_CACHE[key] = out
    return out


def _muffed(prep: Prepared, T: frozenset[int]) -> MuffResult:
    muff = maximum_earmuff(prep.nice, T)
    check(
        len(muff.candidates) == len(muff.eardrum.cores),
        "a clean ear has no realizing path; only possible on blocks routed to the exact search",
    )
    return muff


def _host_hint(g: Multigraph, hint) -> Sequence[Sequence[int]] | None:
    if hint is None:
        return None
    if not connectivity_report(g).is_2VC:
        raise GraphError("a decomposition hint needs a 2-vertex-connected graph")
    return hint


# ---------------------------------------------------------------------------
# connected-T-joins from a decomposition


def connected_tjoin_via_earmuff(
    d: EarDecomposition, T: Iterable[int], mu: int, trace: dict | None = None
) -> SolutionMultiset:
    """Connected T-join from a nice decomposition containing a maximum earmuff.

    Clean ears (E1), a spanning-forest completion of G[V0] (E2), the
    induction step on every other pendant ear (E3) and a minimum T0-join in
    G[V0] (E4).  Result has at most L_mu + L_phi/2 - pi edges, with L_phi
    taken from the even-ear count of ``d``.
    """
    g = d.host
    T = check_even_T(g, T)
    nontriv = d.nontrivial()
    pendant = d.pendant
    clean = [i for i in nontriv if d.ears[i].clean(T)]
    others = [i for i in nontriv if i in pendant and i not in clean]
    V_M = {v for i in clean for v in d.ears[i].inner}
    V_1 = {v for i in others for v in d.ears[i].inner}
    V_0 = set(range(g.n)) - V_M - V_1
    mult = [0] * g.m

    E1 = [e for i in clean for e in d.ears[i].edges]
    for e in E1:
        mult[e] += 1
    uf = UnionFind(g.n)
    for e in E1:
        uf.union(*g.edges[e])
    comps = len({uf.find(v) for v in V_0 | V_M})
    check(comps == len(V_0) - mu, f"clean ears leave {comps} components, expected |V0| - mu = {len(V_0) - mu}")

    E2 = []
    for e, (u, v) in enumerate(g.edges):
        if u in V_0 and v in V_0 and uf.union(u, v):
            E2.append(e)
            mult[e] += 1
    check(len(E2) == len(V_0) - mu - 1, "G[V0] could not connect the clean-ear forest")

    T_cur = T
    E3 = 0
    for i in sorted(others, reverse=True):
        red = reduce_ear(g, d.ears[i], T_cur)
        for e, x in red.F_prime.items():
            mult[e] += x
        E3 += red.F_prime_size
        T_cur = red.S_prime

    odd_now = odd_vertices(g, [e for e in range(g.m) for _ in range(mult[e])])
    T0 = {v for v in V_0 if (v in odd_now) != (v in T)}
    inside = [e for e, (u, v) in enumerate(g.edges) if u in V_0 and v in V_0]
    try:
        E4 = min_t_join(g, T0, allowed=inside).edges
    except InfeasibleError as exc:
        raise InternalError(f"G[V0] is not 2-edge-connected: {exc}") from exc
    for e in E4:
        mult[e] += 1
    check(all(x <= 2 for x in mult), "an edge was used more than twice")
    sol = SolutionMultiset(g, tuple(mult))
    check(is_connected_tjoin(sol, T), "earmuff construction is not a connected T-join")

    L_mu = g.n - 1 + len(clean) - mu
    L_phi = g.n + d.even_count - 1
    pi = d.pi
    check(2 * sol.cardinality <= 2 * L_mu + L_phi - 2 * pi, "earmuff construction exceeds L_mu + L_phi/2 - pi")
    if trace is not None:
        trace.update(
            V0=len(V_0), V1=len(V_1), VM=len(V_M), E1=len(E1), E2=len(E2), E3=E3, E4=len(E4),
            earmuff_bound=Fraction(2 * L_mu + L_phi - 2 * pi, 2),
        )
    return sol


def connected_tjoin_via_induction(d: EarDecomposition, T: Iterable[int]) -> SolutionMultiset:
    """Connected T-join by peeling the nontrivial ears in reverse order.

    At most (3/2)(n-1) + pi_2 - phi/2 edges, phi being the even-ear count of ``d``.
    """
    g = d.host
    T = check_even_T(g, T)
    mult = [0] * g.m
    T_cur = T
    for i in reversed(d.nontrivial()):
        red = reduce_ear(g, d.ears[i], T_cur)
        for e, x in red.F_prime.items():
            mult[e] += x
        T_cur = red.S_prime
    check(not T_cur, "terminal set did not vanish at the root")
    sol = SolutionMultiset(g, tuple(mult))
    check(is_connected_tjoin(sol, T), "induction construction is not a connected T-join")
    check(
        2 * sol.cardinality <= 3 * (g.n - 1) + 2 * d.pi2 - d.even_count,
        "induction construction exceeds (3/2)(n-1) + pi_2 - phi/2",
    )
    return sol


def _exact_block(g: Multigraph, T: frozenset[int]) -> SolutionMultiset:
    from .oracle import opt_connected_tjoin

    return opt_connected_tjoin(g, T).witness


def connected_tjoin_3_2(
    g: Multigraph,
    T: Iterable[int] = (),
    hint: Sequence[Sequence[int]] | None = None,
    trace: RunTrace | None = None,
) -> SolutionMultiset:
    """Connected T-join with at most (3/2) LP(G,T) edges.

    Per block both constructions are computed and the smaller is kept.
    ``hint`` (vertex paths of an ear-decomposition with phi even ears) lets
    graphs beyond the exact even-ear search through; it needs G 2-vertex-connected.
    """
    require_connected(g)
    T = check_even_T(g, T)
    hint = _host_hint(g, hint)
    if trace is not None:
        trace.algorithm = "connected_tjoin_3_2"
    if g.n == 1:
        return SolutionMultiset.empty(g)
    bt = blocks(g)
    counts: dict[int, int] = {}
    for bi, Tb_host in enumerate(bt.split_T(T)):
        view = bt.view(bi)
        b = view.graph
        Tb = view.to_local(Tb_host)
        if _degenerate(b):
            sol = _exact_block(b, Tb)
            info = {"block": bi, "n": b.n, "method": "exact"}
        else:
            sol, info = _tjoin_block(b, Tb, hint)
            info["block"] = bi
        if trace is not None:
            trace.add(**info, cardinality=sol.cardinality)
        for e, x in _lift_counts(view, sol.multiplicity).items():
            counts[e] = counts.get(e, 0) + x
    out = SolutionMultiset.from_counts(g, counts)
    check(is_connected_tjoin(out, T), "assembled solution is not a connected T-join")
    if trace is not None:
        trace.cardinality = out.cardinality
    return out


def _tjoin_block(b: Multigraph, T: frozenset[int], hint) -> tuple[SolutionMultiset, dict]:
    prep = prepare(b, hint)
    muff = _muffed(prep, T)
    d = muff.decomposition
    info: dict = {"n": b.n, "method": "pipeline", "phi": prep.even.phi, "pi": d.pi, "pi2": d.pi2, "mu": muff.mu}
    A = connected_tjoin_via_earmuff(d, T, muff.mu, info)
    B = connected_tjoin_via_induction(d, T)
    Lmu = l_mu(b, muff.active_cores, muff.mu, T, muff.certificate)
    best, name = (A, "earmuff") if A.cardinality <= B.cardinality else (B, "induction")
    # min of both is within 3/2 max(L_mu, n-1), each of which is at most LP(G,T)
    X = max(Lmu.value, b.n - 1)
    check(2 * best.cardinality <= 3 * X, f"{best.cardinality} exceeds (3/2) max(L_mu, n-1) = {Fraction(3 * X, 2)}")
    info.update(
        L_mu=Lmu.value, L_phi=l_phi(b, prep.even.phi), earmuff=A.cardinality, induction=B.cardinality,
        chosen=name, threshold_pi_ge_half_phi=2 * d.pi >= prep.even.phi,
    )
    return best, info


# ---------------------------------------------------------------------------
# removable pairings and the Moemke-Svensson tour


def removable_pairing_from_ears(d: EarDecomposition) -> RemovablePairing:
    """One pair per non-pendant ear, one R-edge per pendant ear; |R| = 2k - pi."""
    check(all(not ear.trivial for ear in d.ears), "pairing needs a decomposition without 1-ears")
    g = d.host
    R: list[int] = []
    pairs: list[tuple[int, int]] = []
    pendant = d.pendant
    for i, ear in enumerate(d.ears):
        if i in pendant:
            R.append(ear.edges[0])
            continue
        attached = {v for j in d.attached[i] for v in d.ears[j].endpoints}
        pos = next((p for p in range(1, ear.length) if ear.vertices[p] in attached), None)
        if pos is None:
            raise InternalError(f"non-pendant ear {i} has no attachment vertex")
        pair = (ear.edges[pos - 1], ear.edges[pos])
        pairs.append(pair)
        R.extend(pair)
    out = RemovablePairing(tuple(R), tuple(pairs))
    out.validate(g)
    check(len(R) == 2 * len(d.ears) - d.pi, "pairing size differs from 2k - pi")
    return out


def ms_tour(g: Multigraph, pairing: RemovablePairing) -> SolutionMultiset:
    """Tour of at most (4/3)|E| - (2/3)|R| edges on a 2-vertex-connected graph."""
    if not connectivity_report(g).is_2VC:
        raise GraphError("ms_tour needs a 2-vertex-connected graph")
    F = constrained_odd_join(g, pairing)
    R = set(pairing.R)
    mult = [1] * g.m
    for e in F.edges:
        mult[e] = 0 if e in R else 2
    sol = SolutionMultiset(g, tuple(mult))
    check(sol.cardinality == g.m + F.weight, "tour size differs from |E| + c(F)")
    check(3 * sol.cardinality <= 4 * g.m - 2 * len(R), "tour exceeds (4/3)|E| - (2/3)|R|")
    check(is_tour(sol), "Moemke-Svensson construction is not a tour")
    return sol


# ---------------------------------------------------------------------------
# graphic TSP


def _pieces(d: EarDecomposition) -> list[tuple[GraphView, EarDecomposition]]:
    """Split the nontrivial ears of ``d`` along cut vertices of their union."""
    g = d.host
    nontriv = [d.ears[i] for i in d.nontrivial()]
    G1 = g.view(edge_ids=sorted(e for ear in nontriv for e in ear.edges), vertices=range(g.n))
    check(G1.graph.n == g.n, "nontrivial ears do not span")
    bt = blocks(G1.graph)
    local = G1.local_edges()
    out = []
    for bi, blk in enumerate(bt.blocks):
        bedges = set(blk.edges)
        ears = [ear for ear in nontriv if local[ear.edges[0]] in bedges]
        host_edges = [G1.edge_map[e] for e in blk.edges]
        pv = g.view(edge_ids=host_edges)
        lears = [_local_ear(pv, ear) for ear in ears]
        check(lears[0].closed, "first ear of a piece is not closed")
        out.append((pv, EarDecomposition(pv.graph, tuple(lears), lears[0].vertices[0])))
    return out


def _tour_piece(pd: EarDecomposition, info: list) -> SolutionMultiset:
    h = pd.host
    if len(pd.ears) == 1:
        info.append({"n": h.n, "method": "circuit", "cardinality": h.m})
        return SolutionMultiset.from_edges(h, range(h.m))
    muff = maximum_earmuff(pd, ())
    d = muff.decomposition
    rec: dict = {"n": h.n, "method": "pipeline", "pi": d.pi, "mu": muff.mu, "even": d.even_count}
    A = ms_tour(h, removable_pairing_from_ears(d))
    B = connected_tjoin_via_earmuff(d, (), muff.mu, rec)
    best, name = (A, "ms_tour") if A.cardinality <= B.cardinality else (B, "earmuff")
    L_mu = h.n - 1 + len(muff.eardrum.cores) - muff.mu
    lam = lambda_bound(L_mu, h.n + d.even_count - 1)
    rec.update(ms_tour=A.cardinality, earmuff=B.cardinality, chosen=name, Lambda=lam,
               threshold_pi_le_tenth_Lambda=10 * d.pi <= lam, cardinality=best.cardinality)
    info.append(rec)
    return best


def tsp_7_5(
    g: Multigraph, hint: Sequence[Sequence[int]] | None = None, trace: RunTrace | None = None
) -> SolutionMultiset:
    """Tour with at most (7/5) LP(G) edges."""
    require_connected(g)
    hint = _host_hint(g, hint)
    if trace is not None:
        trace.algorithm = "tsp_7_5"
    if g.n == 1:
        return SolutionMultiset.empty(g)
    bt = blocks(g)
    counts: dict[int, int] = {}
    for bi in range(len(bt.blocks)):
        view = bt.view(bi)
        b = view.graph
        if _degenerate(b):
            sol = _exact_block(b, frozenset())
            info = {"block": bi, "n": b.n, "method": "exact", "cardinality": sol.cardinality}
        else:
            sol, info = _tsp_block(b, hint)
            info["block"] = bi
        if trace is not None:
            trace.add(**info)
        for e, x in _lift_counts(view, sol.multiplicity).items():
            counts[e] = counts.get(e, 0) + x
    out = SolutionMultiset.from_counts(g, counts)
    check(is_tour(out), "assembled solution is not a tour")
    if trace is not None:
        trace.cardinality = out.cardinality
    return out


def _tsp_block(b: Multigraph, hint) -> tuple[SolutionMultiset, dict]:
    prep = prepare(b, hint)
    muff = _muffed(prep, frozenset())
    d = muff.decomposition
    Lmu = l_mu(b, muff.active_cores, muff.mu, (), muff.certificate).value
    Lphi = l_phi(b, prep.even.phi)
    lam = lambda_bound(Lmu, Lphi)
    pieces_info: list = []
    counts: dict[int, int] = {}
    for pv, pd in _pieces(d):
        tour = _tour_piece(pd, pieces_info)
        for e, x in _lift_counts(pv, tour.multiplicity).items():
            counts[e] = counts.get(e, 0) + x
    sol = SolutionMultiset.from_counts(b, counts)
    check(is_tour(sol), "piece tours do not combine to a tour")
    piece_sum = sum((p["Lambda"] for p in pieces_info if "Lambda" in p), Fraction(0))
    check(5 * sol.cardinality <= 7 * lam, f"tour {sol.cardinality} exceeds (7/5) Lambda = {Fraction(7, 5) * lam}")
    info = {
        "n": b.n, "method": "pipeline", "phi": prep.even.phi, "pi": d.pi, "mu": muff.mu,
        "L_mu": Lmu, "L_phi": Lphi, "Lambda": lam, "pieces": pieces_info, "piece_Lambda_sum": piece_sum,
        "cardinality": sol.cardinality,
    }
    return sol, info


# ---------------------------------------------------------------------------
# 2ECSS


def construction_a(d: EarDecomposition) -> SolutionMultiset:
    """All edges of nontrivial ears."""
    return SolutionMultiset.from_edges(d.host, [e for i in d.nontrivial() for e in d.ears[i].edges])


def two_ecss_4_3(
    g: Multigraph, hint: Sequence[Sequence[int]] | None = None, trace: RunTrace | None = None
) -> SolutionMultiset:
    """2-edge-connected spanning subgraph with at most (4/3) LP(G) edges."""
    if not connectivity_report(g).is_2EC:
        raise GraphError("two_ecss_4_3 needs a 2-edge-connected graph")
    hint = _host_hint(g, hint)
    if trace is not None:
        trace.algorithm = "two_ecss_4_3"
    if g.n == 1:
        return SolutionMultiset.empty(g)
    bt = blocks(g)
    counts: dict[int, int] = {}
    for bi in range(len(bt.blocks)):
        view = bt.view(bi)
        b = view.graph
        if _degenerate(b):
            from .oracle import opt_2ecss

            sol = opt_2ecss(b).witness
            info = {"block": bi, "n": b.n, "method": "exact", "cardinality": sol.cardinality}
        else:
            sol, info = _ecss_block(b, hint)
            info["block"] = bi
        if trace is not None:
            trace.add(**info)
        for e, x in _lift_counts(view, sol.multiplicity).items():
            counts[e] = counts.get(e, 0) + x
    out = SolutionMultiset.from_counts(g, counts)
    check(is_2ecss(out), "assembled solution is not a 2ECSS")
    if trace is not None:
        trace.cardinality = out.cardinality
    return out


def _ecss_block(b: Multigraph, hint) -> tuple[SolutionMultiset, dict]:
    prep = prepare(b, hint)
    muff = _muffed(prep, frozenset())
    d = muff.decomposition
    Lmu = l_mu(b, muff.active_cores, muff.mu, (), muff.certificate).value
    Lphi = l_phi(b, prep.even.phi)
    A = construction_a(d)
    check(4 * A.cardinality <= 5 * Lphi + 2 * d.pi, "nontrivial ears exceed (5/4) L_phi + pi/2")
    rec: dict = {}
    tour = connected_tjoin_via_earmuff(d, (), muff.mu, rec)
    B = tour_to_2ecss(b, tour)
    best, name = (A, "ears") if A.cardinality <= B.cardinality else (B, "earmuff")
    X = max(Lphi, Lmu)
    check(3 * best.cardinality <= 4 * X, f"{best.cardinality} exceeds (4/3) max(L_phi, L_mu)")
    info = {
        "n": b.n, "method": "pipeline", "phi": prep.even.phi, "pi": d.pi, "mu": muff.mu,
        "L_mu": Lmu, "L_phi": Lphi, "ears": A.cardinality, "earmuff_tour": tour.cardinality,
        "earmuff": B.cardinality, "chosen": name, "cardinality": best.cardinality,
    }
    return best, info


def tour_to_2ecss(g: Multigraph, tour: SolutionMultiset) -> SolutionMultiset:
    """Remove doubled edges from a tour, keeping 2-edge-connectivity and not growing."""
    if not connectivity_report(g).is_2EC:
        raise GraphError("tour_to_2ecss needs a 2-edge-connected graph")
    if not _same_graph(tour.host, g) or not is_tour(tour):
        raise GraphError("input is not a tour of g")
    mult = list(tour.multiplicity)
    for e in range(g.m):
        if mult[e] < 2:
            continue
        mult[e] = 1
        if _is_2ec_counts(g, mult):
            continue
        # e is now a bridge of the current subgraph: replace its copy by an edge across the cut
        side = _side_without(g, mult, e)
        f = next((f for f, (u, v) in enumerate(g.edges) if f != e and (u in side) != (v in side)), None)
        check(f is not None, "no replacement edge across a cut of a 2-edge-connected graph")
        check(mult[f] == 0, "replacement edge already in use")
        mult[f] = 1
        check(_is_2ec_counts(g, mult), "replacement did not restore 2-edge-connectivity")
    out = SolutionMultiset(g, tuple(mult))
    check(out.cardinality <= tour.cardinality and is_2ecss(out), "conversion to a 2ECSS failed")
    return out


def _is_2ec_counts(g: Multigraph, mult: Sequence[int]) -> bool:
    return connectivity_report(SolutionMultiset(g, tuple(mult)).as_multigraph().graph).is_2EC


def _side_without(g: Multigraph, mult: Sequence[int], e: int) -> set[int]:
    u, _ = g.edges[e]
    uf = UnionFind(g.n)
    for f, x in enumerate(mult):
        if x and f != e:
            uf.union(*g.edges[f])
    r = uf.find(u)
    return {v for v in range(g.n) if uf.find(v) == r}


def tour_from_2ecss(g: Multigraph, H: SolutionMultiset) -> SolutionMultiset:
    """Tour of at most (2/3)(|E(H)| + n - 1) edges from a 2ECSS H of 2G."""
    if not _same_graph(H.host, g):
        raise GraphError("H must be a solution on g")
    hv = H.as_multigraph()
    if not connectivity_report(hv.graph).is_2EC:
        raise GraphError("H is not a 2-edge-connected spanning subgraph")
    counts: dict[int, int] = {}
    if g.n > 1:
        bt = blocks(hv.graph)
        for bi in range(len(bt.blocks)):
            view = bt.view(bi)
            b = view.graph
            d = open_ear_decomposition(b)
            R = tuple(ear.edges[0] for ear in d.ears)
            tour = ms_tour(b, RemovablePairing(R, ()))
            for e, x in _lift_counts(view, tour.multiplicity).items():
                he = hv.edge_map[e]
                counts[he] = counts.get(he, 0) + x
    for e, x in counts.items():
        while x > 2:
            x -= 2
        counts[e] = x
    out = SolutionMultiset.from_counts(g, counts)
    check(is_tour(out), "reduction did not give a tour")
    check(3 * out.cardinality <= 2 * (H.cardinality + g.n - 1), "tour exceeds (2/3)(|E(H)| + n - 1)")
    return out


# ---------------------------------------------------------------------------
# baseline


def christofides_tjoin_5_3(g: Multigraph, T: Iterable[int] = ()) -> SolutionMultiset:
    """Spanning tree plus a minimum T'-join correcting its parities (5/3 baseline)."""
    require_connected(g)
    T = check_even_T(g, T)
    uf = UnionFind(g.n)
    tree = [e for e, (u, v) in enumerate(g.edges) if uf.union(u, v)]
    T2 = T ^ odd_vertices(g, tree)
    J = min_t_join(g, T2).edges
    out = SolutionMultiset.from_edges(g, tree) + SolutionMultiset.from_edges(g, J)
    check(is_connected_tjoin(out, T), "baseline is not a connected T-join")
    return out
