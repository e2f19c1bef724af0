"""Lower bounds L_phi, L_mu and Lambda, with an explicit LP dual witness for L_mu."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .earmuff import MuffCertificate, endpoint_set, max_forest_representatives, surplus
from .ears import Eardrum
from .errors import GraphError, check
from .graph import Multigraph, check_even_T

__all__ = [
    "MuWitness",
    "MuBound",
    "BoundsCertificate",
    "l_phi",
    "l_mu",
    "lambda_bound",
]


def l_phi(g: Multigraph, phi: int) -> int:
    """|V| + phi - 1; always even."""
    value = g.n + phi - 1
    check(value % 2 == 0, f"n + phi - 1 = {value} is odd, so phi = {phi} cannot be right")
    return value


def lambda_bound(L_mu: int, L_phi: int) -> Fraction:
    """(2/3) L_mu + (1/3) L_phi."""
    return Fraction(2 * L_mu + L_phi, 3)


@dataclass(frozen=True)
class MuWitness:
    """Dual solution of LP(G,T) worth L_mu.

    Weight 1 on the partition inequality of ``partition`` and weight 1/2 on
    the cut inequality of every set in ``cuts`` (a multiset).
    """

    partition: tuple[frozenset[int], ...]
    cuts: tuple[frozenset[int], ...]
    chain: tuple[int, ...]

    @property
    def value(self) -> int:
        # (|partition| - 1) * 1 + |cuts| * 2 * 1/2
        return len(self.partition) - 1 + len(self.cuts)

    def verify(self, g: Multigraph, T: Iterable[int] = ()) -> int:
        """Check dual feasibility for LP(G,T) edge by edge; returns the dual value."""
        T = frozenset(T)
        label = {}
        for i, W in enumerate(self.partition):
            for v in W:
                check(v not in label, "witness classes overlap")
                label[v] = i
        check(len(label) == g.n, "witness partition does not cover V")
        for S in self.cuts:
            check(0 < len(S) < g.n, "witness cut set is empty or everything")
            check(len(S & T) % 2 == 0, "witness cut is not a T-even cut")
        for u, v in g.edges:
            crossing = label[u] != label[v]
            in_cuts = sum(1 for S in self.cuts if (u in S) != (v in S))
            # coefficient of x_e in the dual combination must not exceed 1
            check(2 * int(crossing) + in_cuts <= 2, f"edge {u}-{v} overloaded in the dual witness")
        check(len(set(self.chain)) == 1 and self.chain[0] == self.value, f"counting chain {self.chain} breaks")
        return self.value


@dataclass(frozen=True)
class MuBound:
    value: int
    mu: int
    cores: tuple[tuple[int, ...], ...]
    certificate: MuffCertificate
    witness: MuWitness


def l_mu(
    g: Multigraph,
    cores: Sequence[Sequence[int]],
    mu: int | None = None,
    T: Iterable[int] = (),
    certificate: MuffCertificate | None = None,
) -> MuBound:
    """L_mu = |V| - 1 + |M| - mu for an eardrum M, with its verified dual witness.

    ``certificate`` is a partition of V - V_M attaining mu; it is computed
    when absent.  A given ``mu`` must agree with it.
    """
    T = check_even_T(g, T)
    cores = tuple(tuple(f) for f in cores)
    Eardrum(cores, tuple(range(len(cores)))).validate(g, T)
    V_M = frozenset(v for f in cores for v in f)
    U = frozenset(range(g.n)) - V_M
    if not U:
        raise GraphError("the eardrum covers every vertex")
    sets = [endpoint_set(g, f) for f in cores]
    if any(not s for s in sets):
        raise GraphError("an eardrum element has no realizing path")
    if certificate is None:
        _, certificate = max_forest_representatives(U, sets)
    value_mu = certificate.verify(U, sets)
    if mu is not None and mu != value_mu:
        raise GraphError(f"mu = {mu} disagrees with the certificate value {value_mu}")
    value = g.n - 1 + len(cores) - value_mu
    witness = _witness(g, cores, sets, certificate, value)
    check(witness.verify(g, T) == value, "dual witness value differs from L_mu")
    return MuBound(value, value_mu, cores, certificate, witness)


def _witness(g: Multigraph, cores, sets, cert: MuffCertificate, value: int) -> MuWitness:
    W_list = cert.partition
    inside = [next((i for i, W in enumerate(W_list) if s <= W), -1) for s in sets]
    I = [k for k, i in enumerate(inside) if i >= 0]
    classes = []
    for i, W in enumerate(W_list):
        classes.append(frozenset(W) | frozenset(v for k in I if inside[k] == i for v in cores[k]))
    for k, f in enumerate(cores):
        if inside[k] < 0:
            classes.extend(frozenset([x]) for x in f)
    cuts = []
    for k in I:
        cuts.extend(frozenset([x]) for x in cores[k])
        cuts.append(frozenset(cores[k]))
    V_M = sum(len(f) for f in cores)
    sur = [surplus(W, sets) for W in W_list]
    chain = (
        len(classes) - 1 + len(cuts),
        len(W_list) - 1 + V_M + len(I),
        len(W_list) - 1 + V_M + sum(s + len(W) - 1 for s, W in zip(sur, W_list)),
        g.n - 1 + sum(sur),
        value,
    )
    return MuWitness(tuple(classes), tuple(cuts), chain)


@dataclass(frozen=True)
class BoundsCertificate:
    """Lower bounds for one instance; ``lp`` is filled in at desk scale only."""

    L_phi: int | None
    L_mu: int
    mu_bound: MuBound | None = None
    lp: Fraction | None = None
    lp_T: Fraction | None = None

    @property
    def Lambda(self) -> Fraction | None:
        return None if self.L_phi is None else lambda_bound(self.L_mu, self.L_phi)

    def ordering_holds(self) -> bool:
        """L_phi <= LP(G), Lambda <= LP(G), L_mu <= LP(G,T) for whichever LP values are known."""
        ok = True
        if self.lp is not None and self.L_phi is not None:
            ok &= self.L_phi <= self.lp and self.Lambda <= self.lp
        if self.lp_T is not None:
            ok &= self.L_mu <= self.lp_T
        return ok
