"""Removable pairings: an edge set R with disjoint pairs inside it."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CapabilityError, GraphError
from .graph import Multigraph, is_connected


@dataclass(frozen=True)
class RemovablePairing:
    R: tuple[int, ...]
    pairs: tuple[tuple[int, int], ...] = ()

    def shared_vertex(self, g: Multigraph, pair: tuple[int, int]) -> int:
        common = set(g.edges[pair[0]]) & set(g.edges[pair[1]])
        if len(common) != 1:
            raise GraphError(f"pair {pair} does not share exactly one vertex")
        return common.pop()

    def validate(self, g: Multigraph) -> None:
        """Structural conditions (everything except the connectivity condition)."""
        R = set(self.R)
        if len(R) != len(self.R):
            raise GraphError("R has repeated edges")
        if any(not 0 <= e < g.m for e in R):
            raise GraphError("R has an edge-id out of range")
        seen: set[int] = set()
        for pair in self.pairs:
            e1, e2 = pair
            if e1 == e2 or e1 in seen or e2 in seen:
                raise GraphError(f"pairs are not disjoint at {pair}")
            if e1 not in R or e2 not in R:
                raise GraphError(f"pair {pair} is not inside R")
            seen.update(pair)
            v = self.shared_vertex(g, pair)
            if g.degree(v) < 3:
                raise GraphError(f"pair {pair} meets at vertex {v} of degree < 3")

    def violation(self, g: Multigraph, max_r: int = 14) -> tuple[int, ...] | None:
        """Exhaustive connectivity check over every S inside R meeting each pair at most once.

        Returns a disconnecting S (sorted edge-ids) or None.
        """
        if len(self.R) > max_r:
            raise CapabilityError(f"|R| = {len(self.R)} above exhaustive bound {max_r}")
        if g.m > 62:
            raise CapabilityError("exhaustive pairing check needs m <= 62")
        paired = {e for p in self.pairs for e in p}
        singles = np.array([e for e in self.R if e not in paired], dtype=np.int64)
        pa = np.array([p[0] for p in self.pairs], dtype=np.int64)
        pb = np.array([p[1] for p in self.pairs], dtype=np.int64)
        eu = np.array([u for u, _ in g.edges], dtype=np.int64)
        ev = np.array([v for _, v in g.edges], dtype=np.int64)
        bad = int(kernels.pairing_violation(eu, ev, g.n, pa, pb, singles))
        if bad < 0:
            return None
        return tuple(e for e in range(g.m) if (bad >> e) & 1)

    def is_removable(self, g: Multigraph, max_r: int = 14) -> bool:
        try:
            self.validate(g)
        except GraphError:
            return False
        return self.violation(g, max_r) is None


def removal_keeps_connected(g: Multigraph, S) -> bool:
    S = set(S)
    return is_connected(g.n, (g.edges[e] for e in range(g.m) if e not in S))
