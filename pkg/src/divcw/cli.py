"""Command-line front end.

Every command prints one result table (CSV by default, JSON on request) with
the columns listed in ``COLUMNS``.  Exit codes: 0 success or feasible,
1 infeasible, 2 input error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
import time
from dataclasses import dataclass
from typing import Callable, Sequence

from divcw.engine import (
    CoreContractError,
    DpCore,
    TableTooLarge,
    diverse_solve,
    min_diverse_solve,
    solve_single,
)
from divcw.graph import (
    GENERATORS,
    ColoredGraph,
    CwDecomposition,
    DecompositionError,
    evaluate,
    format_decomposition,
    parse_decomposition,
    parse_graph,
)
from divcw.measures import (
    MeasureError,
    VennMeasure,
    div_min,
    divstar,
    divsum_as_venn,
    parse_measure,
    random_measure,
    venn_div,
)
from divcw.mso import (
    ArenaBudgetExceeded,
    FormulaError,
    NaiveEvaluator,
    model_check,
    mso_core,
    parse_formula,
)
from divcw import oracle
from divcw.problems import ds_core, minvc_core, vc_core

COLUMNS = ["instance", "r", "measure", "d", "feasible", "best_value", "solutions", "wall_ms"]

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3


class InputError(Exception):
    pass


class InvariantViolation(Exception):
    pass


# ------------------------------------------------------------------ loading


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def _generated(spec: str) -> CwDecomposition | None:
    """``path:5``, ``clique:4`` or ``biclique:2x3``."""
    family, sep, args = spec.partition(":")
    if not sep or family not in GENERATORS:
        return None
    fn, arity = GENERATORS[family]
    try:
        nums = [int(x) for x in args.split("x")]
    except ValueError:
        raise InputError(f"bad generator arguments in {spec!r}") from None
    if len(nums) != arity:
        raise InputError(f"{family} takes {arity} size argument(s)")
    try:
        return fn(*nums)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def load_decomposition(spec: str) -> CwDecomposition:
    if not os.path.exists(spec):
        D = _generated(spec)
        if D is not None:
            return D
    return parse_decomposition(_read(spec))


def load_graph(spec: str) -> ColoredGraph:
    """A graph file, a decomposition file (evaluated), or a generator spec."""
    if not os.path.exists(spec):
        D = _generated(spec)
        if D is not None:
            return evaluate(D)
    text = _read(spec)
    first = next((ln.split()[0] for ln in text.splitlines() if ln.split("#", 1)[0].split()), None)
    if first in ("v", "e"):
        return parse_graph(text)
    return evaluate(parse_decomposition(text))


@dataclass
class Problem:
    label: str
    make_core: Callable[[CwDecomposition], DpCore] | None
    spec: object


def parse_problem(token: str) -> Problem:
    kind, sep, arg = token.partition(":")
    if kind in ("vc", "ds", "minvc"):
        try:
            k = int(arg)
        except ValueError:
            raise InputError(f"problem {token!r} needs an integer bound, e.g. {kind}:2") from None
        if k < 0:
            raise InputError(f"negative bound in {token!r}")
        if kind == "vc":
            return Problem(token, lambda D: vc_core(k, D), oracle.VertexCover(k))
        if kind == "ds":
            return Problem(token, lambda D: ds_core(k, D), oracle.DominatingSet(k))
        return Problem(token, lambda D: minvc_core(k, D), oracle.MinVertexCover(k))
    if kind == "mso" and sep:
        phi = parse_formula(_read(arg))
        return Problem(token, lambda D: mso_core(phi, D), oracle.MsoFormula(phi))
    if token == "minds":
        return Problem(token, None, oracle.MinimalDominatingSet())
    raise InputError(f"unknown problem {token!r}")


def parse_problems(text: str) -> list[Problem]:
    tokens = [t.strip() for t in text.split(",")]
    if not all(tokens):
        raise InputError(f"empty problem in {text!r}")
    return [parse_problem(t) for t in tokens]


def parse_measure_arg(text: str, r: int, seed: int) -> VennMeasure:
    if text == "sum":
        return divsum_as_venn(r)
    if text == "star":
        return divstar(r)
    if text == "random":
        return random_measure(r, random.Random(seed))
    if text.startswith("table:"):
        f = parse_measure(_read(text[len("table:"):]))
        if f.r != r:
            raise InputError(f"measure table has arity {f.r} but {r} problems were given")
        return f
    raise InputError(f"unknown measure {text!r}")


def _cores(problems: Sequence[Problem], D: CwDecomposition) -> list[DpCore]:
    cores = []
    for p in problems:
        if p.make_core is None:
            raise InputError(f"{p.label} has no dynamic-programming core; use the oracle command")
        cores.append(p.make_core(D))
    return cores


# ------------------------------------------------------------------ output


def format_solution(S) -> str:
    return " ".join(sorted(S)) if S else "-"


def format_solutions(sols) -> str:
    return "" if sols is None else ";".join(format_solution(S) for S in sols)


def _row(args, **values) -> dict:
    row = dict.fromkeys(COLUMNS, "")
    row["instance"] = getattr(args, "decomp", None) or getattr(args, "graph", "")
    row.update(values)
    if isinstance(row["feasible"], bool):
        row["feasible"] = "true" if row["feasible"] else "false"
    if getattr(args, "timing", False):
        row["wall_ms"] = f"{(time.perf_counter() - args._t0) * 1000:.3f}"
    return row


def emit(rows: list[dict], fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(rows, indent=2) + "\n")
        return
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    out.write(buf.getvalue())


# ------------------------------------------------------------------ commands


def cmd_check(args, out) -> int:
    try:
        D = load_decomposition(args.file)
    except DecompositionError as exc:
        out.write(f"invalid: {exc}\n")
        return EXIT_INPUT
    G = evaluate(D)
    out.write(f"valid, n={G.n} m={G.m} width={D.width}\n")
    return EXIT_OK


def cmd_gen(args, out) -> int:
    fn, arity = GENERATORS[args.family]
    if len(args.sizes) != arity:
        raise InputError(f"{args.family} takes {arity} size argument(s)")
    try:
        D = fn(*args.sizes)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out.write(format_decomposition(D))
    return EXIT_OK


def cmd_solve(args, out) -> int:
    D = load_decomposition(args.decomp)
    (core,) = _cores([parse_problem(args.problem)], D)
    res = solve_single(core)
    sols = (res.solution,) if res.feasible else None
    if args.verify:
        _verify_single(args, D, res.feasible, res.solution)
    emit([_row(args, r=1, feasible=res.feasible, solutions=format_solutions(sols))], args.format, out)
    return EXIT_OK if res.feasible else EXIT_INFEASIBLE


def cmd_diverse(args, out) -> int:
    D = load_decomposition(args.decomp)
    problems = parse_problems(args.problems)
    r = len(problems)
    f = parse_measure_arg(args.measure, r, args.seed)
    res = diverse_solve(_cores(problems, D), f, args.d, threads=args.threads)
    if args.verify:
        _verify_diverse(D, problems, f, res)
    row = _row(
        args,
        r=r,
        measure=args.measure,
        d=args.d,
        feasible=res.feasible,
        best_value="" if res.best_value is None else res.best_value,
        solutions=format_solutions(res.solutions),
    )
    emit([row], args.format, out)
    return EXIT_OK if res.feasible else EXIT_INFEASIBLE


def cmd_diverse_min(args, out) -> int:
    D = load_decomposition(args.decomp)
    problems = parse_problems(args.problems)
    if len(problems) < 2:
        raise InputError("diverse-min needs at least two problems")
    res = min_diverse_solve(_cores(problems, D), args.d)
    if args.verify:
        _verify_min(D, problems, args.d, res)
    row = _row(
        args,
        r=len(problems),
        measure="min",
        d=args.d,
        feasible=res.feasible,
        best_value="" if res.best_value is None else res.best_value,
        solutions=format_solutions(res.solutions),
    )
    emit([row], args.format, out)
    return EXIT_OK if res.feasible else EXIT_INFEASIBLE


def cmd_oracle(args, out) -> int:
    G = load_graph(args.graph)
    problems = parse_problems(args.problems)
    r = len(problems)
    lists = [oracle.brute_solutions(p.spec, G) for p in problems]
    if args.measure == "min":
        if r < 2:
            raise InputError("measure min needs at least two problems")
        objective: VennMeasure | str = oracle.MIN
    else:
        objective = parse_measure_arg(args.measure, r, args.seed)
    best, tup = oracle.brute_best_diversity(lists, objective, G.vertices)
    feasible = best is not None and best >= args.d
    row = _row(
        args,
        r=r,
        measure=args.measure,
        d=args.d,
        feasible=feasible,
        best_value="" if best is None else best,
        solutions=format_solutions(tup),
    )
    emit([row], args.format, out)
    return EXIT_OK if feasible else EXIT_INFEASIBLE


def cmd_mso_check(args, out) -> int:
    D = load_decomposition(args.decomp)
    text = args.formula_text if args.formula_text is not None else _read(args.formula)
    phi = parse_formula(text)
    holds = model_check(phi, D)
    if args.verify:
        G = evaluate(D)
        if G.n <= oracle.MAX_VERTICES and NaiveEvaluator(phi, G).holds() != holds:
            raise InvariantViolation("model checking disagrees with the naive evaluator")
    emit([_row(args, r=0, measure="mso", feasible=holds)], args.format, out)
    return EXIT_OK if holds else EXIT_INFEASIBLE


# ------------------------------------------------------------------ verification


def _oracle_lists(D: CwDecomposition, problems: Sequence[Problem]):
    G = evaluate(D)
    return G, [oracle.brute_solutions(p.spec, G) for p in problems]


def _verify_single(args, D, feasible, solution) -> None:
    G, (sols,) = _oracle_lists(D, [parse_problem(args.problem)])
    if feasible != bool(sols) or (feasible and solution not in sols):
        raise InvariantViolation("single solving disagrees with the oracle")


def _verify_diverse(D, problems, f, res) -> None:
    G, lists = _oracle_lists(D, problems)
    best, _ = oracle.brute_best_diversity(lists, f, G.vertices)
    if best != res.best_value:
        raise InvariantViolation(f"diverse optimum {res.best_value} but the oracle finds {best}")
    if res.solutions is not None:
        if any(S not in sols for S, sols in zip(res.solutions, lists)):
            raise InvariantViolation("returned tuple contains a non-solution")
        if venn_div(f, res.solutions, G.vertices) != res.best_value:
            raise InvariantViolation("returned tuple does not attain the reported value")


def _verify_min(D, problems, d, res) -> None:
    G, lists = _oracle_lists(D, problems)
    best, _ = oracle.brute_best_diversity(lists, oracle.MIN, G.vertices)
    expected = best is not None and best >= d
    if expected != res.feasible:
        raise InvariantViolation(f"diverse-min feasibility {res.feasible} but the oracle says {expected}")
    if res.feasible:
        if any(S not in sols for S, sols in zip(res.solutions, lists)):
            raise InvariantViolation("returned tuple contains a non-solution")
        if div_min(res.solutions) < d:
            raise InvariantViolation("returned tuple is not d-diverse")


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="divcw", description="Diverse solutions on cliquewidth decompositions.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, verify=True):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--timing", action="store_true", help="fill the wall_ms column")
        if verify:
            sp.add_argument("--verify", action="store_true", help="cross-check against the oracle")

    sp = sub.add_parser("check", help="validate a decomposition file")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("gen", help="print a generated decomposition")
    sp.add_argument("family", choices=sorted(GENERATORS))
    sp.add_argument("sizes", type=int, nargs="+")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("solve", help="find one solution")
    sp.add_argument("--decomp", required=True)
    sp.add_argument("--problem", required=True)
    common(sp)
    sp.set_defaults(func=cmd_solve)

    for name, func in (("diverse", cmd_diverse), ("diverse-min", cmd_diverse_min)):
        sp = sub.add_parser(name, help="maximise diversity" if name == "diverse" else "pairwise distance >= d")
        sp.add_argument("--decomp", required=True)
        sp.add_argument("--problems", required=True, help="comma-separated, e.g. vc:2,ds:2")
        if name == "diverse":
            sp.add_argument("--measure", default="sum", help="sum | star | random | table:<path>")
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--threads", type=int, default=1)
        else:
            sp.add_argument("--measure", choices=("min",), default="min")
        sp.add_argument("--d", type=int, default=0)
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("oracle", help="brute-force ground truth on a small graph")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--problems", required=True)
    sp.add_argument("--measure", default="sum", help="sum | star | random | min | table:<path>")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--d", type=int, default=0)
    common(sp, verify=False)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("mso-check", help="model-check a formula on a decomposition")
    sp.add_argument("--decomp", required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--formula", help="formula file")
    g.add_argument("--formula-text")
    common(sp)
    sp.set_defaults(func=cmd_mso_check)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    args._t0 = time.perf_counter()
    if getattr(args, "d", 0) < 0:
        print("error: --d must be non-negative", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args, out)
    except (InvariantViolation, CoreContractError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (
        InputError,
        DecompositionError,
        MeasureError,
        FormulaError,
        oracle.OracleRefused,
        TableTooLarge,
        ArenaBudgetExceeded,
        OverflowError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
