"""Instance and solution file formats.

Instance::

    c comment
    p <n> <m>
    e <u> <v>        (m lines, 1-indexed vertices)
    t <v1> <v2> ...  (optional, even count)

Comment lines may carry annotations that the solvers use::

    c ear <v1> <v2> ...        vertex path of a nontrivial ear (first one closed)
    c hamiltonian <e1> ...     edge-ids of a Hamiltonian circuit

Solution: lines ``x <edge-id> <multiplicity>`` with 1-indexed edge-ids
(edge ``i`` is the ``i``-th ``e`` line of the instance).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParseError
from .graph import Multigraph, SolutionMultiset


@dataclass(frozen=True, eq=False)
class Instance:
    graph: Multigraph
    T: frozenset[int] | None = None
    name: str = ""
    hint: tuple[tuple[int, ...], ...] | None = None
    hamiltonian: tuple[int, ...] | None = None


def parse_graph(text: str, name: str = "") -> Instance:
    n = m = None
    edges: list[tuple[int, int]] = []
    T: frozenset[int] | None = None
    ears: list[tuple[int, ...]] = []
    ham: tuple[int, ...] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tok = raw.split()
        if not tok:
            continue
        if tok[0] == "c":
            if len(tok) > 1 and tok[1] in ("ear", "hamiltonian"):
                try:
                    vals = tuple(int(a) - 1 for a in tok[2:])
                except ValueError:
                    raise ParseError(lineno, f"non-integer field in {raw.strip()!r}") from None
                if tok[1] == "ear":
                    ears.append(vals)
                else:
                    ham = vals
            continue
        kind, args = tok[0], tok[1:]
        try:
            vals = [int(a) for a in args]
        except ValueError:
            raise ParseError(lineno, f"non-integer field in {raw.strip()!r}") from None
        if kind == "p":
            if n is not None:
                raise ParseError(lineno, "duplicate header")
            if len(vals) != 2 or vals[0] < 1 or vals[1] < 0:
                raise ParseError(lineno, "header must be 'p <n> <m>' with n >= 1")
            n, m = vals
        elif kind == "e":
            if n is None:
                raise ParseError(lineno, "edge before header")
            if len(vals) != 2:
                raise ParseError(lineno, "edge line must be 'e <u> <v>'")
            u, v = vals
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(lineno, f"vertex out of range 1..{n}")
            if u == v:
                raise ParseError(lineno, f"loop at vertex {u}")
            edges.append((u - 1, v - 1))
        elif kind == "t":
            if n is None:
                raise ParseError(lineno, "T line before header")
            if T is not None:
                raise ParseError(lineno, "duplicate T line")
            if any(not (1 <= v <= n) for v in vals):
                raise ParseError(lineno, f"vertex out of range 1..{n}")
            if len(set(vals)) != len(vals):
                raise ParseError(lineno, "repeated vertex in T")
            if len(vals) % 2:
                raise ParseError(lineno, f"|T| = {len(vals)} is odd")
            T = frozenset(v - 1 for v in vals)
        else:
            raise ParseError(lineno, f"unknown line type {kind!r}")
    if n is None:
        raise ParseError(0, "missing header")
    if len(edges) != m:
        raise ParseError(0, f"header announces {m} edges, found {len(edges)}")
    for path in ears:
        if len(path) < 2 or any(not 0 <= v < n for v in path):
            raise ParseError(0, "ear annotation with a vertex out of range")
    if ham is not None and any(not 0 <= e < len(edges) for e in ham):
        raise ParseError(0, "hamiltonian annotation with an edge-id out of range")
    return Instance(Multigraph(n, tuple(edges)), T, name, tuple(ears) or None, ham)


def format_instance(
    g: Multigraph,
    T: Iterable[int] | None = None,
    comment: str | None = None,
    hint: Sequence[Sequence[int]] | None = None,
    hamiltonian: Sequence[int] | None = None,
) -> str:
    """Instance text with optional ear and Hamiltonian annotations."""
    lines = []
    if comment:
        lines.extend(f"c {c}" for c in comment.splitlines())
    for path in hint or ():
        lines.append("c ear " + " ".join(str(v + 1) for v in path))
    if hamiltonian is not None:
        lines.append("c hamiltonian " + " ".join(str(e + 1) for e in hamiltonian))
    body = g.to_text(T)
    return "\n".join(lines) + ("\n" if lines else "") + body


def read_instance(path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read(), name=path)


def parse_solution(text: str, host: Multigraph) -> SolutionMultiset:
    mult = [0] * host.m
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        if tok[0] != "x" or len(tok) != 3:
            raise ParseError(lineno, "solution line must be 'x <edge-id> <multiplicity>'")
        try:
            e, x = int(tok[1]), int(tok[2])
        except ValueError:
            raise ParseError(lineno, "non-integer field") from None
        if not 1 <= e <= host.m:
            raise ParseError(lineno, f"edge-id out of range 1..{host.m}")
        if not 0 <= x <= 2:
            raise ParseError(lineno, "multiplicity must be 0, 1 or 2")
        mult[e - 1] += x
        if mult[e - 1] > 2:
            raise ParseError(lineno, f"edge {e} exceeds multiplicity 2")
    return SolutionMultiset(host, tuple(mult))


def format_solution(sol: SolutionMultiset) -> str:
    return "".join(f"x {e + 1} {x}\n" for e, x in enumerate(sol.multiplicity) if x)
