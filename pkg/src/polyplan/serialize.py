"""Text formats for instances, plans, assignments, and reduction maps.

All formats are line-based UTF-8 with '#' comments and are rendered
canonically, so render(parse(render(x))) is byte-identical to
render(x).

Instance files::

    var <name>                 # one per variable, order defines ordinals
    init <name>=<0|1>          # every variable exactly once
    goal <name>=<0|1>          # any subset
    op <name> post <var>=<bit> [prv <var>=<bit>[,<var>=<bit>...]]

Plan files hold one operator name per line. Assignment files hold one
``x<i>=<0|1>`` line per formula variable. Reduction map files record the
goal mode plus the formula-entity-to-state-variable correspondence and a
family tag per operator; parsing one re-runs the (deterministic)
reduction and cross-checks the file against it.
"""

from __future__ import annotations

from typing import Optional

from .cnf import Assignment, CnfFormula
from .core import (
    Operator,
    PartialState,
    Plan,
    PlanningInstance,
    TotalState,
    VariableId,
)
from .errors import ParseError, StructuralError
from .reduction import OpFamily, ReductionMap, TotalizeMode, reduce_formula


def _data_lines(text: str):
    """Yield (lineno, stripped line) skipping blanks and '#' comments."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def render_instance(inst: PlanningInstance) -> str:
    lines = [f"var {v.name}" for v in inst.variables]
    lines += [f"init {v.name}={inst.init.value(v)}" for v in inst.variables]
    lines += [f"goal {v.name}={b}" for v, b in inst.goal.items()]
    for op in inst.operators:
        line = f"op {op.name} post {op.post_var.name}={op.post_val}"
        if op.prv:
            line += " prv " + ",".join(f"{v.name}={b}" for v, b in op.prv.items())
        lines.append(line)
    return "\n".join(lines) + "\n"


def _parse_pair(token: str, lineno: int) -> tuple[str, int]:
    name, sep, value = token.partition("=")
    if not sep or value not in ("0", "1") or not name:
        raise ParseError(f"expected <name>=<0|1>, got {token!r}", lineno)
    return name, int(value)


def parse_instance(text: str) -> PlanningInstance:
    variables: list[VariableId] = []
    by_name: dict[str, VariableId] = {}
    init_values: dict[VariableId, int] = {}
    goal: dict[VariableId, int] = {}
    operators: list[Operator] = []
    op_names: set[str] = set()

    def lookup(name: str, lineno: int) -> VariableId:
        var = by_name.get(name)
        if var is None:
            raise ParseError(f"unknown variable {name!r}", lineno)
        return var

    for lineno, line in _data_lines(text):
        fields = line.split()
        kind = fields[0]
        if kind == "var":
            if len(fields) != 2:
                raise ParseError("expected 'var <name>'", lineno)
            name = fields[1]
            if name in by_name:
                raise ParseError(f"duplicate variable {name!r}", lineno)
            var = VariableId(len(variables), name)
            variables.append(var)
            by_name[name] = var
        elif kind == "init":
            if len(fields) != 2:
                raise ParseError("expected 'init <name>=<bit>'", lineno)
            name, value = _parse_pair(fields[1], lineno)
            var = lookup(name, lineno)
            if var in init_values:
                raise ParseError(f"duplicate init for {name!r}", lineno)
            init_values[var] = value
        elif kind == "goal":
            if len(fields) != 2:
                raise ParseError("expected 'goal <name>=<bit>'", lineno)
            name, value = _parse_pair(fields[1], lineno)
            var = lookup(name, lineno)
            if var in goal:
                raise ParseError(f"duplicate goal for {name!r}", lineno)
            goal[var] = value
        elif kind == "op":
            if len(fields) < 4 or fields[2] != "post":
                raise ParseError(
                    "expected 'op <name> post <var>=<bit> [prv ...]'", lineno
                )
            op_name = fields[1]
            if op_name in op_names:
                raise ParseError(f"duplicate operator {op_name!r}", lineno)
            post_name, post_val = _parse_pair(fields[3], lineno)
            post_var = lookup(post_name, lineno)
            prv: dict[VariableId, int] = {}
            rest = fields[4:]
            if rest:
                if rest[0] != "prv" or len(rest) != 2:
                    raise ParseError("expected 'prv <var>=<bit>,...'", lineno)
                for token in rest[1].split(","):
                    name, value = _parse_pair(token, lineno)
                    var = lookup(name, lineno)
                    if var in prv:
                        raise ParseError(f"duplicate prevail on {name!r}", lineno)
                    prv[var] = value
            if post_var in prv:
                raise ParseError(
                    f"post variable {post_name!r} also in prevail conditions", lineno
                )
            operators.append(Operator(op_name, PartialState(prv), post_var, post_val))
            op_names.add(op_name)
        else:
            raise ParseError(f"unknown directive {kind!r}", lineno)

    if not variables:
        raise ParseError("instance has no variables")
    missing = [v.name for v in variables if v not in init_values]
    if missing:
        raise ParseError(f"missing init values for: {', '.join(missing)}")
    init = TotalState.from_values(init_values[v] for v in variables)
    try:
        return PlanningInstance(
            tuple(variables), tuple(operators), init, PartialState(goal)
        )
    except StructuralError as exc:  # residual structural issues
        raise ParseError(str(exc)) from exc


def render_plan(inst: PlanningInstance, plan: Plan) -> str:
    if not plan.steps:
        return ""
    return "\n".join(inst.resolve_step(s).name for s in plan.steps) + "\n"


def parse_plan(text: str, inst: PlanningInstance) -> Plan:
    index = {op.name: i for i, op in enumerate(inst.operators)}
    steps = []
    for lineno, line in _data_lines(text):
        if len(line.split()) != 1:
            raise ParseError("expected one operator name per line", lineno)
        if line not in index:
            raise ParseError(f"unknown operator {line!r}", lineno)
        steps.append(index[line])
    return Plan.of(steps)


def render_assignment(assignment: Assignment) -> str:
    return "\n".join(f"x{var}={assignment[var]}" for var in sorted(assignment)) + "\n"


def parse_assignment(text: str, num_vars: int) -> Assignment:
    assignment: Assignment = {}
    for lineno, line in _data_lines(text):
        name, value = _parse_pair(line, lineno)
        if not name.startswith("x") or not name[1:].isdigit():
            raise ParseError(f"expected x<i>=<bit>, got {line!r}", lineno)
        var = int(name[1:])
        if not 1 <= var <= num_vars:
            raise ParseError(f"variable x{var} out of range 1..{num_vars}", lineno)
        if var in assignment:
            raise ParseError(f"duplicate assignment for x{var}", lineno)
        assignment[var] = value
    missing = [str(v) for v in range(1, num_vars + 1) if v not in assignment]
    if missing:
        raise ParseError(f"missing assignments for: x{', x'.join(missing)}")
    return assignment


def render_reduction_map(rmap: ReductionMap) -> str:
    formula = rmap.formula
    lines = [
        f"mode {rmap.mode.value}",
        f"vars {formula.num_vars}",
        f"clauses {formula.num_clauses}",
    ]
    for i in range(1, formula.num_vars + 1):
        lines.append(
            f"var {i} pos {rmap.var_pos[i - 1].name} neg {rmap.var_neg[i - 1].name}"
        )
    for j in range(1, formula.num_clauses + 1):
        lines.append(
            f"clause {j} flag {rmap.clause_flag[j - 1].name} "
            f"latch {rmap.clause_latch[j - 1].name}"
        )
    lines.append("chain " + " ".join(v.name for v in rmap.chain))
    for idx, (op, info) in enumerate(zip(rmap.instance.operators, rmap.op_info)):
        line = f"op {idx} {op.name} family {int(info.family)}"
        if info.family is OpFamily.LITERAL:
            line += f" var {info.var} role {info.role}"
        elif info.family is OpFamily.CLAUSE:
            line += f" clause {info.clause + 1} role {info.role}"
        elif info.family is OpFamily.SATISFY:
            line += f" clause {info.clause + 1} pa " + "".join(map(str, info.pa))
        elif info.family is OpFamily.CHAIN:
            line += f" chain {info.chain_pos} role {info.role}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def parse_reduction_map(text: str, formula: CnfFormula) -> ReductionMap:
    """Rebuild a reduction map from its sidecar file.

    The reduction is deterministic given (formula, mode), so the file's
    job is to carry the mode and let the rest be verified: any line that
    disagrees with the freshly rebuilt map is a parse error.
    """
    mode: Optional[TotalizeMode] = None
    lines = [line for _, line in _data_lines(text)]
    if not lines or not lines[0].startswith("mode "):
        raise ParseError("map file must start with a 'mode' line")
    mode_name = lines[0].split(maxsplit=1)[1]
    try:
        mode = TotalizeMode(mode_name)
    except ValueError:
        raise ParseError(f"unknown mode {mode_name!r}", 1) from None
    _, rmap = reduce_formula(formula, mode)
    expected = [line for _, line in _data_lines(render_reduction_map(rmap))]
    if lines != expected:
        raise ParseError("map file does not match the reduction of this formula")
    return rmap
