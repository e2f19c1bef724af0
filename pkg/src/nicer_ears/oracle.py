"""Exact brute-force values used to certify the approximation algorithms.

Nothing here calls the approximation code; the searches only share the
graph primitives and the matching routine.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import CapabilityError, GraphError, check
from .graph import (
    Multigraph,
    SolutionMultiset,
    UnionFind,
    check_even_T,
    connectivity_report,
    is_connected,
    require_connected,
)
from .ears import phi_lower_bound
from .matching import tau

__all__ = [
    "OracleLimits",
    "OracleResult",
    "opt_connected_tjoin",
    "opt_tour",
    "opt_2ecss",
    "phi_oracle",
    "phi_certificate",
    "mu_oracle",
    "mu_rado",
    "realizing_paths",
    "hamiltonian_cycle",
]


@dataclass(frozen=True)
class OracleLimits:
    """Hard limits; calls beyond them raise ``CapabilityError`` instead of guessing."""

    max_n: int = 64
    max_m: int = 62
    max_cycle_dim: int = 24
    max_2ec_edges: int = 40
    max_phi_n: int = 14
    mu_states: int = 10**6
    ham_seconds: float = 20.0


DEFAULT_LIMITS = OracleLimits()


@dataclass(frozen=True)
class OracleResult:
    value: int
    witness: SolutionMultiset | None = None


def _masks(g: Multigraph) -> tuple[np.ndarray, np.ndarray]:
    eu = np.array([u for u, _ in g.edges], dtype=np.int64)
    ev = np.array([v for _, v in g.edges], dtype=np.int64)
    return eu, ev


def _spanning_tree(g: Multigraph) -> list[int]:
    uf = UnionFind(g.n)
    return [e for e, (u, v) in enumerate(g.edges) if uf.union(u, v)]


def _tree_join(g: Multigraph, tree: list[int], T: frozenset[int]) -> int:
    """Edge mask of the unique T-join inside a spanning tree."""
    adj: dict[int, list[tuple[int, int]]] = {v: [] for v in range(g.n)}
    for e in tree:
        u, v = g.edges[e]
        adj[u].append((v, e))
        adj[v].append((u, e))
    order, parent = [0], {0: (-1, -1)}
    for x in order:
        for y, e in adj[x]:
            if y not in parent:
                parent[y] = (x, e)
                order.append(y)
    odd = {v: v in T for v in range(g.n)}
    mask = 0
    for x in reversed(order[1:]):
        if odd[x]:
            px, e = parent[x]
            mask |= 1 << e
            odd[px] = not odd[px]
    check(not odd[0], "T has odd size")
    return mask


def opt_connected_tjoin(g: Multigraph, T: Iterable[int] = (), limits: OracleLimits = DEFAULT_LIMITS) -> OracleResult:
    """Minimum connected T-join in 2G.

    A connected T-join is a T-join J plus doubled edges joining the
    components of (V, J); so the optimum is min |J| + 2(c(J) - 1) over the
    coset of T-joins, enumerated through a cycle-space basis.
    """
    require_connected(g)
    T = check_even_T(g, T)
    if g.n == 1:
        return OracleResult(0, SolutionMultiset.empty(g))
    if g.m > limits.max_m:
        raise CapabilityError(f"m = {g.m} above the oracle edge limit {limits.max_m}")
    tree = _spanning_tree(g)
    dim = g.m - g.n + 1
    if dim > limits.max_cycle_dim:
        raise CapabilityError(f"cycle space dimension {dim} above {limits.max_cycle_dim}")
    in_tree = set(tree)
    basis = []
    for e in range(g.m):
        if e not in in_tree:
            u, v = g.edges[e]
            basis.append(_tree_join(g, tree, frozenset([u, v]) if u != v else frozenset()) | (1 << e))
    j0 = _tree_join(g, tree, T)
    eu, ev = _masks(g)
    best, mask = kernels.coset_min(eu, ev, g.n, np.int64(j0), np.array(basis, dtype=np.int64).reshape(-1))
    best, mask = int(best), int(mask)
    J = [e for e in range(g.m) if (mask >> e) & 1]
    uf = UnionFind(g.n)
    for e in J:
        uf.union(*g.edges[e])
    mult = [0] * g.m
    for e in J:
        mult[e] = 1
    for e, (u, v) in enumerate(g.edges):
        if uf.union(u, v):
            mult[e] = 2
    sol = SolutionMultiset.from_counts(g, mult)
    check(sol.cardinality == best, "oracle witness size mismatch")
    check(sol.odd_vertices() == T and sol.is_connected_spanning(), "oracle witness invalid")
    return OracleResult(best, sol)


def opt_tour(g: Multigraph, limits: OracleLimits = DEFAULT_LIMITS, hamiltonian: Sequence[int] | None = None) -> OracleResult:
    """Minimum tour; a Hamiltonian circuit (found or supplied) settles it at n."""
    require_connected(g)
    cyc = _checked_cycle(g, hamiltonian) if hamiltonian is not None else None
    if cyc is None and g.n >= 2:
        try:
            cyc = hamiltonian_cycle(g, limits)
        except CapabilityError:
            cyc = None
    if cyc is not None:
        return OracleResult(g.n, SolutionMultiset.from_edges(g, cyc))
    return opt_connected_tjoin(g, (), limits)


def opt_2ecss(g: Multigraph, limits: OracleLimits = DEFAULT_LIMITS, hamiltonian: Sequence[int] | None = None) -> OracleResult:
    """Minimum 2-edge-connected spanning subgraph (multiplicities at most one suffice)."""
    if not connectivity_report(g).is_2EC:
        raise GraphError("opt_2ecss needs a 2-edge-connected graph")
    if g.n == 1:
        return OracleResult(0, SolutionMultiset.empty(g))
    cyc = _checked_cycle(g, hamiltonian) if hamiltonian is not None else None
    if cyc is None:
        try:
            cyc = hamiltonian_cycle(g, limits)
        except CapabilityError:
            cyc = None
    if cyc is not None:
        # every 2ECSS has minimum degree 2, hence at least n edges
        return OracleResult(g.n, SolutionMultiset.from_edges(g, cyc))
    if g.m > limits.max_2ec_edges:
        raise CapabilityError(f"m = {g.m} above the 2ECSS search limit {limits.max_2ec_edges}")
    eu, ev = _masks(g)
    mask = int(kernels.min_2ec_subset(eu, ev, g.n, g.n + 1))
    check(mask >= 0, "no 2-edge-connected subset found")
    sol = SolutionMultiset.from_edges(g, [e for e in range(g.m) if (mask >> e) & 1])
    return OracleResult(sol.cardinality, sol)


def _checked_cycle(g: Multigraph, cycle: Sequence[int]) -> list[int]:
    cycle = list(cycle)
    deg = [0] * g.n
    for e in cycle:
        for v in g.edges[e]:
            deg[v] += 1
    check(len(set(cycle)) == len(cycle) == g.n and all(d == 2 for d in deg), "not a Hamiltonian circuit")
    check(is_connected(g.n, (g.edges[e] for e in cycle)), "not a Hamiltonian circuit")
    return cycle


def hamiltonian_cycle(g: Multigraph, limits: OracleLimits = DEFAULT_LIMITS) -> list[int] | None:
    """Edge-ids of a Hamiltonian circuit, or None when there is none.

    Bitmask dynamic programming up to 16 vertices, backtracking with
    degree pruning above that (bounded by ``limits.ham_seconds``).
    """
    n = g.n
    if n < 2:
        return None
    if n == 2:
        es = g.edges_between(0, 1)
        return sorted(es)[:2] if len(es) >= 2 else None
    if n <= 16:
        adj = g.adjacency_masks()
        reach = kernels.ham_reach(adj)
        full = (1 << n) - 1
        ends = int(reach[full, 0]) & int(adj[0])
        if not ends:
            return None
        b = (ends & -ends).bit_length() - 1
        seq = [b]
        cur, mask = b, full
        while mask != 1:
            rest = mask ^ (1 << cur)
            cands = int(reach[rest, 0]) & int(adj[cur])
            c = (cands & -cands).bit_length() - 1
            seq.append(c)
            cur, mask = c, rest
        seq.reverse()
        return _cycle_edges(g, seq)
    return _ham_backtrack(g, limits.ham_seconds)


def _cycle_edges(g: Multigraph, seq: list[int]) -> list[int]:
    out = [min(g.edges_between(a, b)) for a, b in zip(seq, seq[1:] + seq[:1])]
    return _checked_cycle(g, out)


def _ham_backtrack(g: Multigraph, seconds: float) -> list[int] | None:
    n = g.n
    nbr = [sorted(set(g.neighbors(v))) for v in range(n)]
    if any(len(x) < 2 for x in nbr):
        return None
    start = min(range(n), key=lambda v: (len(nbr[v]), v))
    deadline = time.monotonic() + seconds
    on = [False] * n
    path = [start]
    on[start] = True
    steps = [0]

    def feasible(cur: int) -> bool:
        # every unvisited vertex needs two usable neighbours (unvisited, or an open path end)
        for v in range(n):
            if on[v]:
                continue
            usable = 0
            for w in nbr[v]:
                if not on[w] or w == cur or w == start:
                    usable += 1
                    if usable >= 2:
                        break
            if usable < 2:
                return False
        return True

    def rec(cur: int) -> bool:
        steps[0] += 1
        if steps[0] % 4096 == 0 and time.monotonic() > deadline:
            raise CapabilityError("Hamiltonian search exceeded its time budget")
        if len(path) == n:
            return start in nbr[cur]
        cand = [w for w in nbr[cur] if not on[w]]
        cand.sort(key=lambda w: sum(1 for x in nbr[w] if not on[x]))
        for w in cand:
            on[w] = True
            path.append(w)
            if feasible(w) and rec(w):
                return True
            path.pop()
            on[w] = False
        return False

    import sys

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * n + 100))
    try:
        found = rec(start)
    finally:
        sys.setrecursionlimit(old)
    return _cycle_edges(g, path) if found else None


# ---------------------------------------------------------------------------
# phi


def phi_oracle(g: Multigraph, limits: OracleLimits = DEFAULT_LIMITS) -> tuple[int, frozenset[int]]:
    """phi(G) = max over even T of 2 tau(G,T) - n + 1, with tau from the blossom T-join."""
    if not connectivity_report(g).is_2EC:
        raise GraphError("phi needs a 2-edge-connected graph")
    n = g.n
    if n > limits.max_phi_n:
        raise CapabilityError(f"n = {n} above the phi enumeration limit {limits.max_phi_n}")
    best, arg = -1, frozenset()
    for mask in range(1 << n):
        if bin(mask).count("1") % 2:
            continue
        T = frozenset(v for v in range(n) if (mask >> v) & 1)
        val = 2 * tau(g, T) - n + 1
        if val > best:
            best, arg = val, T
    return best, arg


def phi_certificate(g: Multigraph, even_ears: int, T: Iterable[int] | None = None) -> int:
    """Certify phi(G) = ``even_ears`` for graphs beyond enumeration.

    ``even_ears`` (from any ear-decomposition) is an upper bound; the lower
    bound is parity plus 2 tau(G,T) - n + 1 for ``T`` (or V - v, n odd).
    """
    lower, _ = phi_lower_bound(g, even_ears, T)
    if lower != even_ears:
        raise CapabilityError(f"phi bracketed in [{lower}, {even_ears}] only")
    return lower


# ---------------------------------------------------------------------------
# mu


def realizing_paths(g: Multigraph, core: Sequence[int], V_M: Iterable[int]) -> list[tuple[int, ...]]:
    """All vertex sequences u, core..., v of paths with interior exactly ``core``."""
    V_M = frozenset(V_M)
    out = []
    if len(core) == 1:
        (a,) = core
        nb = sorted(set(g.neighbors(a)) - V_M)
        for u, v in itertools.combinations(nb, 2):
            out.append((u, a, v))
    else:
        a, b = core
        A = sorted(set(g.neighbors(a)) - V_M - {b})
        B = sorted(set(g.neighbors(b)) - V_M - {a})
        for u in A:
            for v in B:
                if u != v:
                    out.append((u, a, b, v))
    return out


def mu_oracle(g: Multigraph, cores: Sequence[Sequence[int]], limits: OracleLimits = DEFAULT_LIMITS) -> int:
    """Maximum number of cores realizable by paths whose union is a forest (exhaustive)."""
    V_M = frozenset(v for f in cores for v in f)
    options = [realizing_paths(g, f, V_M) for f in cores]
    states = 1
    for o in options:
        states *= len(o) + 1
    if states > limits.mu_states:
        raise CapabilityError(f"{states} path combinations above the budget {limits.mu_states}")
    best = 0
    k = len(cores)

    def rec(i: int, uf_parent: list[int], size: int) -> None:
        nonlocal best
        if size + (k - i) <= best:
            return
        if i == k:
            best = max(best, size)
            return
        for path in options[i]:
            par = list(uf_parent)
            ok = True
            for x, y in zip(path, path[1:]):
                rx, ry = _find(par, x), _find(par, y)
                if rx == ry:
                    ok = False
                    break
                par[rx] = ry
            if ok:
                rec(i + 1, par, size + 1)
        rec(i + 1, uf_parent, size)

    rec(0, list(range(g.n)), 0)
    rado = mu_rado(g, cores)
    check(rado == best, f"exhaustive mu {best} disagrees with the Rado formula {rado}")
    return best


def _find(par: list[int], x: int) -> int:
    while par[x] != x:
        par[x] = par[par[x]]
        x = par[x]
    return x


def mu_rado(g: Multigraph, cores: Sequence[Sequence[int]]) -> int:
    """min over I of r(union of endpoint pairs over I) + k - |I| (graphic matroid rank)."""
    V_M = frozenset(v for f in cores for v in f)
    pairs = [{(p[0], p[-1]) for p in realizing_paths(g, f, V_M)} for f in cores]
    k = len(cores)
    if k > 20:
        raise CapabilityError("Rado enumeration needs at most 20 cores")
    best = k
    for I in range(1 << k):
        uf = UnionFind(g.n)
        rank = 0
        for i in range(k):
            if (I >> i) & 1:
                for u, v in pairs[i]:
                    if uf.union(u, v):
                        rank += 1
        best = min(best, rank + k - bin(I).count("1"))
    return best
