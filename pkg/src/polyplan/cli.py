"""Command-line interface.

Exit codes: 0 success, 1 negative result (no plan, invalid plan,
unsatisfied precondition), 2 search budget exhausted, 64 usage error,
65 parse error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .causal import build_causal_graph, classify, to_dot
from .chain import build_chain_instance, optimal_chain_plan
from .cnf import parse_dimacs, render_dimacs, sample_formula
from .core import validate_plan
from .errors import BudgetExceededError, ParseError, PlanningError
from .reduction import (
    TotalizeMode,
    extract_assignment,
    reduce_formula,
    witness_plan,
)
from .search import (
    BUDGET_EXCEEDED,
    NO_PLAN,
    PLAN_FOUND,
    SearchBudget,
    find_shortest_plan,
    min_switch_cost,
)
from .serialize import (
    parse_assignment,
    parse_instance,
    parse_plan,
    parse_reduction_map,
    render_assignment,
    render_instance,
    render_plan,
    render_reduction_map,
)
from . import study

EX_USAGE = 64
EX_PARSE = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        _write(out, text)
    else:
        sys.stdout.write(text)


def _budget(args) -> SearchBudget:
    return SearchBudget(max_states=args.max_states)


def _mode(name: str) -> TotalizeMode:
    return TotalizeMode(name)


def cmd_reduce(args) -> int:
    formula = parse_dimacs(_read(args.cnf))
    instance, rmap = reduce_formula(formula, _mode(args.totalize))
    _emit(render_instance(instance), args.output)
    map_path = args.map or (args.output + ".map" if args.output else None)
    if map_path:
        _write(map_path, render_reduction_map(rmap))
    return 0


def cmd_gadget(args) -> int:
    if args.k < 1:
        raise UsageError("k must be >= 1")
    instance = build_chain_instance(args.k)
    plan = optimal_chain_plan(args.k)
    _emit(render_instance(instance), args.output)
    plan_path = args.plan or (args.output + ".plan" if args.output else None)
    if plan_path:
        _write(plan_path, render_plan(instance, plan))
    return 0


def cmd_solve(args) -> int:
    instance = parse_instance(_read(args.instance))
    result = find_shortest_plan(instance, _budget(args))
    if result.outcome == PLAN_FOUND:
        print("PLAN")
        text = render_plan(instance, result.plan)
        sys.stdout.write(text)
        if args.output:
            _write(args.output, text)
        return 0
    if result.outcome == NO_PLAN:
        print("NOPLAN")
        return 1
    assert result.outcome == BUDGET_EXCEEDED
    print("BUDGET")
    return 2


def cmd_validate(args) -> int:
    instance = parse_instance(_read(args.instance))
    plan = parse_plan(_read(args.plan), instance)
    report = validate_plan(instance, plan)
    if report.valid:
        print("VALID")
        return 0
    if report.failed_step is not None:
        name = instance.operators[plan.steps[report.failed_step]].name
        print(f"INVALID step {report.failed_step} inapplicable {name}")
    else:
        print("INVALID goal_unmet")
    return 1


def cmd_analyze(args) -> int:
    instance = parse_instance(_read(args.instance))
    graph = build_causal_graph(instance)
    report = classify(graph)
    print(f"polytree: {'yes' if report.is_polytree else 'no'}")
    print(f"dag: {'yes' if report.is_dag else 'no'}")
    print(f"max-indegree: {report.max_indegree}")
    for var in instance.variables:
        print(f"indegree {var.name} {report.indegree_of[var]}")
    if report.undirected_cycle_witness:
        print("cycle: " + " ".join(v.name for v in report.undirected_cycle_witness))
    if args.dot:
        _write(args.dot, to_dot(graph))
    if args.plot:
        from . import viz

        viz.save_causal_graph_figure(graph, args.plot)
    return 0


def cmd_witness(args) -> int:
    formula = parse_dimacs(_read(args.cnf))
    assignment = parse_assignment(_read(args.assignment), formula.num_vars)
    instance, rmap = reduce_formula(formula, _mode(args.totalize))
    plan = witness_plan(formula, rmap, assignment)
    _emit(render_plan(instance, plan), args.output)
    return 0


def cmd_extract(args) -> int:
    formula = parse_dimacs(_read(args.cnf))
    rmap = parse_reduction_map(_read(args.map), formula)
    plan = parse_plan(_read(args.plan), rmap.instance)
    assignment = extract_assignment(formula, rmap, plan)
    _emit(render_assignment(assignment), args.output)
    return 0


def cmd_minswitch(args) -> int:
    instance = parse_instance(_read(args.instance))
    charged = [instance.operator_index(name) for name in args.ops.split(",")]
    cost = min_switch_cost(instance, charged, _budget(args))
    if cost is None:
        print("NOPLAN")
        return 1
    print(cost)
    return 0


def cmd_sample(args) -> int:
    try:
        formula = sample_formula(args.vars, args.clauses, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    comment = f"sample vars={args.vars} clauses={args.clauses} seed={args.seed}"
    _emit(render_dimacs(formula, comments=[comment]), args.output)
    return 0


def cmd_report(args) -> int:
    modes = tuple(_mode(m) for m in args.modes.split(","))
    cases = study.default_cases(args.seeds)
    rows = study.run_study(cases, modes, _budget(args))
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "report.csv", "w", encoding="utf-8", newline="") as stream:
        study.write_report_csv(rows, stream)
    from . import viz

    viz.save_mode_agreement_figure(rows, str(outdir / "equivalence_by_mode.png"))
    if TotalizeMode.PAPER in modes:
        viz.save_paper_mode_figure(rows, str(outdir / "paper_mode_by_clauses.png"))
    for line in study.summarize(rows):
        print(line)
    print(f"report written to {outdir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="polyplan", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="compile a DIMACS CNF into an instance file")
    p.add_argument("cnf")
    p.add_argument("--totalize", choices=[m.value for m in TotalizeMode], default="none")
    p.add_argument("-o", "--output", help="instance file (default: stdout)")
    p.add_argument("--map", help="map sidecar path (default: <output>.map)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("gadget", help="emit the switch-chain instance of order k")
    p.add_argument("k", type=int)
    p.add_argument("-o", "--output", help="instance file (default: stdout)")
    p.add_argument("--plan", help="optimal plan path (default: <output>.plan)")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("solve", help="search for a shortest plan")
    p.add_argument("instance")
    p.add_argument("--max-states", type=int, default=SearchBudget().max_states)
    p.add_argument("-o", "--output", help="also write the plan to a file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="simulate a plan file against an instance")
    p.add_argument("instance")
    p.add_argument("plan")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", help="classify the causal graph of an instance")
    p.add_argument("instance")
    p.add_argument("--dot", help="write a DOT edge list")
    p.add_argument("--plot", help="render the causal graph to an image file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("witness", help="plan from a satisfying assignment")
    p.add_argument("cnf")
    p.add_argument("assignment")
    p.add_argument("--totalize", choices=[m.value for m in TotalizeMode], default="none")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("extract", help="satisfying assignment from a valid plan")
    p.add_argument("cnf")
    p.add_argument("map")
    p.add_argument("plan")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("minswitch", help="minimum charged-operator count over all plans")
    p.add_argument("instance")
    p.add_argument("--ops", required=True, help="comma-separated operator names")
    p.add_argument("--max-states", type=int, default=SearchBudget().max_states)
    p.set_defaults(func=cmd_minswitch)

    p = sub.add_parser("sample", help="emit a seeded random CNF in DIMACS")
    p.add_argument("--vars", type=int, default=3)
    p.add_argument("--clauses", type=int, default=3)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser(
        "report",
        help="equivalence study over the seeded formula sample (CSV + figures)",
    )
    p.add_argument("-o", "--output", default="report")
    p.add_argument("--seeds", type=int, default=study.SEEDS_PER_COMBO)
    p.add_argument("--modes", default="none,swapped,paper")
    p.add_argument("--max-states", type=int, default=SearchBudget().max_states)
    p.set_defaults(func=cmd_report)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EX_PARSE
    except BudgetExceededError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 2
    except (PlanningError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
