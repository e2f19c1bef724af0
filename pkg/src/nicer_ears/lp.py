"""Exact values of the cut LP and its partition-strengthened T-variant at desk scale.

Constraints are enumerated in full.  HiGHS (through scipy) proposes a
primal and a dual solution; both are rounded to rationals and checked in
integer arithmetic, so the reported value is exact.  When rounding fails
to certify, an exact rational simplex on the dual is used instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog

from .errors import CapabilityError, GraphError, InternalError, check
from .graph import Multigraph, check_even_T, is_connected

__all__ = ["LPResult", "lp_value", "constraint_rows", "set_partitions", "certify", "exact_simplex"]


@dataclass(frozen=True)
class LPResult:
    """Optimum ``value`` with primal ``x`` (per edge-id) and a dual certificate.

    ``dual`` maps a row label to its multiplier; labels are ``("cut", W)``
    or ``("partition", classes)`` with vertex frozensets.
    """

    value: Fraction
    x: tuple[Fraction, ...]
    dual: dict = field(default_factory=dict, compare=False)
    method: str = "highs"
    rows: int = 0


def set_partitions(items: Sequence[int]):
    """All set partitions of ``items`` (restricted-growth order)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def _connected_in(g_adj: list[int], mask: int) -> bool:
    start = mask & -mask
    seen = start
    frontier = start
    while frontier:
        v = (frontier & -frontier).bit_length() - 1
        frontier &= frontier - 1
        new = g_adj[v] & mask & ~seen
        seen |= new
        frontier |= new
    return seen == mask


@lru_cache(maxsize=4096)
def _partition_rows_cached(n: int, edges: tuple[tuple[int, int], ...]) -> tuple[tuple[int, int, tuple[int, ...]], ...]:
    """(edge mask, rhs, class masks) for partitions whose classes induce connected subgraphs."""
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    best: dict[int, tuple[int, tuple[int, ...]]] = {}
    for part in set_partitions(range(n)):
        if len(part) < 2:
            continue
        masks = tuple(sum(1 << v for v in cls) for cls in part)
        if not all(_connected_in(adj, m) for m in masks):
            continue
        label = [0] * n
        for i, cls in enumerate(part):
            for v in cls:
                label[v] = i
        emask = 0
        for e, (u, v) in enumerate(edges):
            if label[u] != label[v]:
                emask |= 1 << e
        rhs = len(part) - 1
        if emask not in best or best[emask][0] < rhs:
            best[emask] = (rhs, masks)
    return tuple((em, r, ms) for em, (r, ms) in best.items())


@lru_cache(maxsize=4096)
def _cut_rows_cached(n: int, edges: tuple[tuple[int, int], ...]) -> tuple[np.ndarray, np.ndarray]:
    """Vertex masks W (avoiding vertex n-1, so each cut once) and their edge masks."""
    W = np.arange(1, 1 << (n - 1), dtype=np.int64)
    em = np.zeros_like(W)
    for e, (u, v) in enumerate(edges):
        em |= (((W >> u) ^ (W >> v)) & 1) << e
    return W, em


def constraint_rows(
    g: Multigraph, T: Iterable[int] | None, relaxed: bool = False
) -> list[tuple[int, int, tuple]]:
    """Deduplicated rows (edge mask, rhs, raw label).

    ``T is None`` gives the plain cut LP; otherwise cuts need ``|W & T|``
    even (or ``W & T`` empty when ``relaxed``) and partition rows are added.
    """
    n, edges = g.n, tuple(g.edges)
    Ws, ems = _cut_rows_cached(n, edges)
    if T is not None:
        Tm = sum(1 << v for v in T)
        if relaxed:
            full = (1 << n) - 1
            keep = ((Ws & Tm) == 0) | (((full & ~Ws) & Tm) == 0)
        else:
            from .kernels import popcount_array

            keep = popcount_array(Ws & Tm) % 2 == 0
        Ws, ems = Ws[keep], ems[keep]
    rows: dict[int, tuple[int, object]] = {}
    for W, em in zip(Ws.tolist(), ems.tolist()):
        if em not in rows:
            rows[em] = (2, W)
    if T is not None:
        for em, rhs, masks in _partition_rows_cached(n, edges):
            if em not in rows or rows[em][0] < rhs:
                rows[em] = (rhs, masks)
    return [(em, r, (n, lab)) for em, (r, lab) in rows.items()]


def _label(raw) -> tuple:
    n, lab = raw

    def verts(m):
        return frozenset(v for v in range(n) if (m >> v) & 1)

    if isinstance(lab, tuple):
        return ("partition", tuple(verts(m) for m in lab))
    return ("cut", verts(lab))


def _matrix(rows, m: int) -> tuple[np.ndarray, np.ndarray]:
    em = np.array([r[0] for r in rows], dtype=np.int64)
    A = (em[:, None] >> np.arange(m, dtype=np.int64)[None, :]) & 1
    b = np.array([r[1] for r in rows], dtype=np.int64)
    return A, b


def _scaled(vals: np.ndarray, D: int) -> np.ndarray | None:
    X = np.rint(vals * D)
    if np.abs(vals * D - X).max(initial=0.0) > 1e-6 * D:
        return None
    return X.astype(np.int64)


def certify(A: np.ndarray, b: np.ndarray, x: np.ndarray, y: np.ndarray) -> tuple[Fraction, list[Fraction], list[Fraction]] | None:
    """Exact optimality check of rounded primal/dual vectors for min 1.x, Ax >= b, x >= 0."""
    x = np.maximum(x, 0.0)
    y = np.maximum(y, 0.0)
    for D in (1, 2, 6, 12, 60, 840, 27720, 720720):
        X = _scaled(x, D)
        Y = _scaled(y, D)
        if X is None or Y is None:
            continue
        # entries of A are 0/1 and the scaled values are small, so int64 is exact here
        if not (A.dot(X) >= b * D).all():
            continue
        if not (A.T.dot(Y) <= D).all():
            continue
        if int(X.sum()) == int(b.dot(Y)):
            return Fraction(int(X.sum()), D), [Fraction(int(v), D) for v in X], [Fraction(int(v), D) for v in Y]
    return None


def exact_simplex(A: np.ndarray, b: np.ndarray) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    """Exact optimum of min 1.x s.t. Ax >= b, x >= 0, solved on the dual with Bland's rule.

    The dual max b.y, A^T y <= 1, y >= 0 starts feasible at y = 0.
    """
    R, m = A.shape
    # tableau rows: edges (constraints of the dual); columns: y (R) then slacks (m)
    tab = [[Fraction(int(A[i, e])) for i in range(R)] + [Fraction(1 if j == e else 0) for j in range(m)] + [Fraction(1)] for e in range(m)]
    obj = [Fraction(-int(v)) for v in b] + [Fraction(0)] * m + [Fraction(0)]
    basis = [R + e for e in range(m)]
    ncol = R + m
    while True:
        enter = next((j for j in range(ncol) if obj[j] < 0), -1)
        if enter < 0:
            break
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise InternalError("dual LP unbounded: primal infeasible")
        _, r = best
        piv = tab[r][enter]
        tab[r] = [v / piv for v in tab[r]]
        for i in range(m):
            if i != r and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [a - f * c for a, c in zip(tab[i], tab[r])]
        f = obj[enter]
        obj = [a - f * c for a, c in zip(obj, tab[r])]
        basis[r] = enter
    y = [Fraction(0)] * R
    for i, bcol in enumerate(basis):
        if bcol < R:
            y[bcol] = tab[i][-1]
    x = [obj[R + e] for e in range(m)]
    return obj[-1], x, y


def lp_value(
    g: Multigraph,
    T: Iterable[int] | None = None,
    *,
    relaxed: bool = False,
    hamiltonian: Sequence[int] | None = None,
    max_n: int = 16,
    max_n_T: int = 10,
    exact_only: bool = False,
) -> LPResult:
    """Exact LP(G) (``T`` None or empty) or LP(G,T).

    ``hamiltonian`` may carry the edge-ids of a Hamiltonian circuit; for the
    plain LP this pins the value at n (primal: the circuit; dual: half on
    every vertex cut) without enumerating constraints.
    """
    if g.n < 2:
        return LPResult(Fraction(0), tuple(Fraction(0) for _ in range(g.m)), {}, "trivial", 0)
    if not is_connected(g.n, g.edges):
        raise GraphError("LP needs a connected graph")
    if T is not None:
        T = check_even_T(g, T)
        if not T and not relaxed:
            T = None
    if T is None and hamiltonian is not None:
        return _sandwich(g, hamiltonian)
    bound = max_n if T is None else max_n_T
    if g.n > bound:
        raise CapabilityError(f"n = {g.n} exceeds the LP enumeration bound {bound}")
    if g.m > 62:
        raise CapabilityError("LP rows are stored as 62-bit edge masks")
    rows = constraint_rows(g, T, relaxed)
    A, b = _matrix(rows, g.m)
    cert = None
    method = "exact-simplex"
    if not exact_only:
        res = linprog(np.ones(g.m), A_ub=-A, b_ub=-b, bounds=(0, None), method="highs")
        if res.status != 0:
            raise InternalError(f"HiGHS failed: {res.message}")
        cert = certify(A, b, res.x, -res.ineqlin.marginals)
        method = "highs"
    if cert is None:
        cert = exact_simplex(A, b)
        method = "exact-simplex"
    value, x, y = cert
    dual = {_label(rows[i][2]): y[i] for i in range(len(rows)) if y[i]}
    return LPResult(value, tuple(x), dual, method, len(rows))


def _sandwich(g: Multigraph, cycle: Sequence[int]) -> LPResult:
    cycle = list(cycle)
    deg = [0] * g.n
    for e in cycle:
        for v in g.edges[e]:
            deg[v] += 1
    check(len(set(cycle)) == len(cycle) == g.n, "Hamiltonian hint has the wrong size")
    check(all(d == 2 for d in deg), "Hamiltonian hint is not 2-regular")
    check(is_connected(g.n, (g.edges[e] for e in cycle)), "Hamiltonian hint is disconnected")
    x = [Fraction(0)] * g.m
    for e in cycle:
        x[e] = Fraction(1)
    # each edge lies in exactly two vertex cuts, so half on every vertex cut is dual feasible
    dual = {("cut", frozenset([v])): Fraction(1, 2) for v in range(g.n)}
    return LPResult(Fraction(g.n), tuple(x), dual, "hamiltonian", 0)
