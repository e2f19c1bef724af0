"""Command-line entry point ``nicer-ears``.

Exit status: 0 when every checked bound holds, 1 when a solution fails
verification or a bound is violated, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .algorithms import RunTrace, connected_tjoin_3_2, tsp_7_5, two_ecss_4_3
from .errors import CapabilityError, InternalError, NicerEarsError
from .generators import FAMILIES, generate
from .graph import SolutionMultiset
from .io import Instance, format_instance, format_solution, parse_solution, read_instance
from .lp import lp_value
from .oracle import hamiltonian_cycle, opt_2ecss, opt_connected_tjoin, opt_tour
from .verify import PROBLEMS, verify_solution

__all__ = ["SCHEMA", "main", "run_pipeline", "run_oracle", "dumps"]

SCHEMA = "nicer-ears/report/1"
RATIO = {"tsp": Fraction(7, 5), "tjoin": Fraction(3, 2), "2ecss": Fraction(4, 3)}


def _plain(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (frozenset, set)):
        return [_plain(v) for v in sorted(x)]
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def dumps(report: dict) -> str:
    """Canonical JSON: sorted keys, rationals as "p/q"."""
    return json.dumps(_plain(report), sort_keys=True, indent=2) + "\n"


def _meta(inst: Instance) -> dict:
    g = inst.graph
    return {
        "name": inst.name,
        "n": g.n,
        "m": g.m,
        "T": sorted(v + 1 for v in inst.T) if inst.T is not None else None,
        "annotated_ears": len(inst.hint or ()),
    }


def _solution_rows(sol: SolutionMultiset) -> list[list[int]]:
    return [[e + 1, x] for e, x in enumerate(sol.multiplicity) if x]


def _terminals(problem: str, inst: Instance) -> frozenset[int]:
    if problem != "tjoin":
        return frozenset()
    if inst.T is None:
        raise NicerEarsError("tjoin needs a 't' line in the instance")
    return inst.T


def run_pipeline(problem: str, inst: Instance, *, lp: bool = False, oracle: bool = False) -> dict:
    """Solve, verify and compare against the requested lower bounds; never raises on bound failure."""
    g = inst.graph
    T = _terminals(problem, inst)
    trace = RunTrace()
    if problem == "tsp":
        sol = tsp_7_5(g, inst.hint, trace)
    elif problem == "tjoin":
        sol = connected_tjoin_3_2(g, T, inst.hint, trace)
    else:
        sol = two_ecss_4_3(g, inst.hint, trace)
    check = verify_solution(sol, problem, T)
    ratios: dict[str, bool] = {"verified": check.ok}
    bounds: dict = {}
    notes: list[str] = []
    if lp:
        try:
            ham = None if T else _hamiltonian(inst)
            res = lp_value(g, T, hamiltonian=ham)
            bounds["LP"] = res.value
            bounds["LP_method"] = res.method
            ratios["within_ratio_of_LP"] = sol.cardinality <= RATIO[problem] * res.value
            ratios["LP_at_least_n"] = problem == "tjoin" or res.value >= g.n
        except CapabilityError as exc:
            notes.append(f"LP skipped: {exc}")
    oracle_part = None
    if oracle:
        try:
            opt = _oracle_value(problem, inst, T)
            oracle_part = {"opt": opt}
            ratios["at_least_opt"] = sol.cardinality >= opt
            if "LP" in bounds:
                ratios["LP_at_most_opt"] = bounds["LP"] <= opt
        except CapabilityError as exc:
            notes.append(f"oracle skipped: {exc}")
    per_block = [
        {key: b[key] for key in ("block", "n", "L_phi", "L_mu", "Lambda") if key in b}
        for b in trace.blocks
        if b.get("method") == "pipeline"
    ]
    if per_block:
        bounds["blocks"] = per_block
    return {
        "schema": SCHEMA,
        "version": __version__,
        "command": "solve",
        "problem": problem,
        "instance": _meta(inst),
        "algorithm": trace.algorithm,
        "cardinality": sol.cardinality,
        "verify": {"ok": check.ok, "reason": check.reason},
        "bounds": bounds,
        "oracle": oracle_part,
        "ratios": ratios,
        "ok": all(ratios.values()),
        "notes": notes,
        "trace": trace.as_dict(),
        "trace_digest": trace.digest(),
        "solution": _solution_rows(sol),
    }


def _hamiltonian(inst: Instance) -> tuple[int, ...] | None:
    """The annotated circuit, or one found by search when the LP would be too large to enumerate."""
    if inst.hamiltonian is not None or inst.graph.n <= 16:
        return inst.hamiltonian
    try:
        cyc = hamiltonian_cycle(inst.graph)
    except CapabilityError:
        return None
    return None if cyc is None else tuple(cyc)


def _oracle_value(problem: str, inst: Instance, T: frozenset[int]) -> int:
    return _oracle(problem, inst, T).value


def _oracle(problem: str, inst: Instance, T: frozenset[int]):
    g = inst.graph
    if problem == "tsp":
        return opt_tour(g, hamiltonian=inst.hamiltonian)
    if problem == "tjoin":
        return opt_connected_tjoin(g, T)
    return opt_2ecss(g, hamiltonian=inst.hamiltonian)


def run_oracle(problem: str, inst: Instance) -> dict:
    T = _terminals(problem, inst)
    res = _oracle(problem, inst, T)
    check = verify_solution(res.witness, problem, T)
    return {
        "schema": SCHEMA,
        "version": __version__,
        "command": "oracle",
        "problem": problem,
        "instance": _meta(inst),
        "algorithm": "oracle",
        "cardinality": res.value,
        "verify": {"ok": check.ok, "reason": check.reason},
        "oracle": {"opt": res.value},
        "ratios": {"verified": check.ok},
        "ok": check.ok,
        "solution": _solution_rows(res.witness),
    }


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nicer-ears", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("solve", help="run an approximation algorithm")
    s.add_argument("problem", choices=PROBLEMS)
    s.add_argument("file")
    s.add_argument("--lp", action="store_true", help="compute the exact LP value (desk scale)")
    s.add_argument("--oracle", action="store_true", help="compute the exact optimum (desk scale)")
    s.add_argument("--json", metavar="OUT", help="write the JSON report here ('-' for stdout)")
    s.add_argument("--solution", metavar="OUT", help="write the solution file here")

    gp = sub.add_parser("gen", help="write an instance of a named family to stdout")
    gp.add_argument("family", choices=sorted(FAMILIES) + ["random"])
    gp.add_argument("--k", type=int, required=True, help="family parameter (vertex count for 'random')")
    gp.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify", help="check a solution file")
    v.add_argument("instance")
    v.add_argument("solution")
    v.add_argument("--problem", choices=PROBLEMS, help="default: tjoin if the instance has a T line, else tsp")

    o = sub.add_parser("oracle", help="exact optimum by brute force")
    o.add_argument("problem", choices=PROBLEMS)
    o.add_argument("file")
    o.add_argument("--json", metavar="OUT")
    return p


def _emit(report: dict, dest: str | None) -> None:
    text = dumps(report)
    if dest == "-":
        sys.stdout.write(text)
    elif dest:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
    failed = [k for k, ok in report.get("ratios", {}).items() if not ok]
    line = f"{report['problem']}: {report['algorithm']} cardinality {report['cardinality']}"
    if "LP" in report.get("bounds", {}):
        line += f", LP {_plain(report['bounds']['LP'])}"
    if report.get("oracle"):
        line += f", opt {report['oracle']['opt']}"
    line += ", ok" if not failed else ", FAILED: " + ", ".join(failed)
    print(line, file=sys.stderr if dest == "-" else sys.stdout)


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.cmd == "gen":
            fam = generate(args.family, args.k, args.seed)
            ham = fam.hamiltonian
            if ham is None and fam.name == "fig5":
                ham = tuple(hamiltonian_cycle(fam.graph))
            T = fam.T if (fam.T or fam.name in ("fig3", "cycle_st", "random")) else None
            sys.stdout.write(format_instance(fam.graph, T, f"{fam.name} k={fam.k} seed={args.seed}", fam.hint, ham))
            return 0
        if args.cmd == "verify":
            inst = read_instance(args.instance)
            with open(args.solution, encoding="utf-8") as fh:
                sol = parse_solution(fh.read(), inst.graph)
            problem = args.problem or ("tjoin" if inst.T is not None else "tsp")
            res = verify_solution(sol, problem, inst.T)
            print(f"{problem}: cardinality {res.cardinality}, " + ("pass" if res.ok else f"FAIL: {res.reason}"))
            return 0 if res.ok else 1
        inst = read_instance(args.file)
        if args.cmd == "oracle":
            report = run_oracle(args.problem, inst)
        else:
            report = run_pipeline(args.problem, inst, lp=args.lp, oracle=args.oracle)
            if args.solution:
                with open(args.solution, "w", encoding="utf-8") as fh:
                    fh.write(format_solution(SolutionMultiset(inst.graph, tuple(_mults(report, inst)))))
        _emit(report, args.json)
        return 0 if report["ok"] else 1
    except InternalError as exc:
        print(f"nicer-ears: check failed: {exc}", file=sys.stderr)
        return 1
    except CapabilityError as exc:
        print(f"nicer-ears: capability limit: {exc}", file=sys.stderr)
        return 2
    except (NicerEarsError, OSError) as exc:
        print(f"nicer-ears: {exc}", file=sys.stderr)
        return 2


def _mults(report: dict, inst: Instance) -> list[int]:
    x = [0] * inst.graph.m
    for e, m in report["solution"]:
        x[e - 1] = m
    return x


if __name__ == "__main__":
    raise SystemExit(main())
