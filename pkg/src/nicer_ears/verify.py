"""Solution checking for the three problems; stops at the first violated condition."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .graph import SolutionMultiset, connectivity_report

__all__ = ["PROBLEMS", "VerifyResult", "verify_solution"]

PROBLEMS = ("tsp", "tjoin", "2ecss")


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    problem: str
    cardinality: int
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_solution(sol: SolutionMultiset, problem: str, T: Iterable[int] | None = None) -> VerifyResult:
    """Check ``sol`` as a tour (``tsp``), a connected T-join (``tjoin``) or a 2ECSS (``2ecss``).

    For ``tsp`` and ``2ecss`` the terminal set is empty whatever ``T`` says.
    """
    if problem not in PROBLEMS:
        raise ValueError(f"unknown problem {problem!r}")
    g = sol.host
    size = sol.cardinality

    def fail(reason: str) -> VerifyResult:
        return VerifyResult(False, problem, size, reason)

    for e, x in enumerate(sol.multiplicity):
        if x not in (0, 1, 2):
            return fail(f"edge {e + 1} has multiplicity {x}")
    if problem == "2ecss":
        doubled = [e + 1 for e, x in enumerate(sol.multiplicity) if x > 1]
        if doubled:
            return fail(f"edge {doubled[0]} used twice in a 2ECSS")
    want = frozenset(T or ()) if problem == "tjoin" else frozenset()
    if problem != "2ecss":
        odd = sol.odd_vertices()
        if odd != want:
            v = min(odd ^ want)
            return fail(f"vertex {v + 1} has the wrong degree parity")
    if not sol.is_connected_spanning():
        return fail("support is not connected and spanning")
    if problem == "2ecss" and g.n > 1:
        sub = sol.as_multigraph().graph
        if not connectivity_report(sub).is_2EC:
            return fail("support is not 2-edge-connected")
    return VerifyResult(True, problem, size)
