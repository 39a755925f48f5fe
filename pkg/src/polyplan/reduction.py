"""Compile a CNF formula into a planning instance with a polytree causal graph.

For a formula with n variables and k clauses the instance has 2n+4k-1
state variables: a pair (vx<i>, vnx<i>) per formula variable, a flag and
a one-way latch (vc<j>, vcp<j>) per clause, and the switch chain
v1..v(2k-1). All variables start at 0 and the goal is the chain's
alternating parity, so a valid plan must raise v1 at least k times.

Operator families:

* LITERAL: raise vx<i> or vnx<i>; neither can ever come back down, so a
  plan commits to at most one polarity per formula variable.
* CLAUSE: raise the latch vcp<j>; raise the flag vc<j> while the latch
  is down; lower the flag while the latch is up. Together these allow
  each flag exactly one 0 -> 1 -> 0 round trip.
* SATISFY: one operator per (clause, satisfying partial assignment over
  the clause's distinct variables) raising v1; its prevail conditions
  pin the clause flag up and both literal variables of every clause
  variable to the pattern of the assignment (2m+1 conditions for m
  distinct variables).
* RESET: the single operator lowering v1, which requires every clause
  flag to be down.
* CHAIN: the guarded flips of v2..v(2k-1), unchanged from the chain
  gadget.

Raising v1 k times therefore consumes k distinct clause flags, each
certifying that some satisfying pattern of its clause was pinned by the
literal variables, which is exactly satisfiability of the formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Mapping, Optional

from .chain import chain_operator_names
from .cnf import Assignment, CnfFormula, clause_satisfied, clause_vars, satisfies
from .core import (
    Operator,
    PartialState,
    Plan,
    PlanningInstance,
    TotalState,
    VariableId,
    validate_plan,
)


class TotalizeMode(Enum):
    """How to extend the partial goal into a total one.

    NONE keeps the alternating chain goal. PAPER adds vx=1, vnx=1 per
    formula variable and flag=1, latch=0 per clause; SWAPPED adds the
    same literal bindings but flag=0, latch=1. PAPER demands a clause
    whose flag is up while its latch never fired, which conflicts with
    the flag round trips needed to lower v1; whether any instance with
    two or more clauses remains solvable is measured empirically by the
    report tooling rather than assumed.
    """

    NONE = "none"
    PAPER = "paper"
    SWAPPED = "swapped"


class OpFamily(IntEnum):
    LITERAL = 1
    CLAUSE = 2
    SATISFY = 3
    RESET = 4
    CHAIN = 5


@dataclass(frozen=True)
class OpInfo:
    """Provenance tag for one generated operator."""

    family: OpFamily
    var: Optional[int] = None
    clause: Optional[int] = None
    pa: Optional[tuple[int, ...]] = None
    chain_pos: Optional[int] = None
    role: Optional[str] = None


@dataclass
class ReductionMap:
    """Bookkeeping tying formula entities to instance entities.

    Clause indices are 0-based positions in the formula; formula
    variables are 1-based as in DIMACS. satisfy_ops[j] maps the bits of
    a satisfying partial assignment (over clause j's distinct variables,
    ascending) to the operator index that fires on it. Treated as
    immutable after construction.
    """

    mode: TotalizeMode
    formula: CnfFormula
    instance: PlanningInstance
    var_pos: tuple[VariableId, ...]
    var_neg: tuple[VariableId, ...]
    clause_flag: tuple[VariableId, ...]
    clause_latch: tuple[VariableId, ...]
    chain: tuple[VariableId, ...]
    op_info: tuple[OpInfo, ...]
    set_pos: tuple[int, ...]
    set_neg: tuple[int, ...]
    latch_up: tuple[int, ...]
    flag_up: tuple[int, ...]
    flag_dn: tuple[int, ...]
    satisfy_ops: tuple[dict[tuple[int, ...], int], ...]
    reset_op: int
    chain_up: dict[int, int]
    chain_dn: dict[int, int]


def _satisfy_prevail(
    formula: CnfFormula,
    clause_index: int,
    pa: Mapping[int, int],
    var_pos: tuple[VariableId, ...],
    var_neg: tuple[VariableId, ...],
    clause_flag: tuple[VariableId, ...],
) -> PartialState:
    clause = formula.clauses[clause_index]
    variables = clause_vars(clause)
    if set(pa) != set(variables):
        raise ValueError(
            f"partial assignment must cover exactly the clause variables {variables}"
        )
    if not clause_satisfied(clause, pa):
        raise ValueError("partial assignment does not satisfy the clause")
    bindings = {clause_flag[clause_index]: 1}
    for x in variables:
        bindings[var_pos[x - 1]] = pa[x]
        bindings[var_neg[x - 1]] = 1 - pa[x]
    return PartialState(bindings)


def satisfy_op_prevail(
    formula: CnfFormula,
    rmap: "ReductionMap",
    clause_index: int,
    pa: Mapping[int, int],
) -> PartialState:
    """Prevail conditions of the SATISFY operator for one clause pattern.

    pa must assign exactly the clause's distinct variables and must
    satisfy the clause. The result pins the clause flag up and, for each
    clause variable x, vx to pa(x) and vnx to 1 - pa(x): 2m+1 conditions
    for a clause with m distinct variables.
    """
    return _satisfy_prevail(
        formula, clause_index, pa, rmap.var_pos, rmap.var_neg, rmap.clause_flag
    )


def reduce_formula(
    formula: CnfFormula, mode: TotalizeMode = TotalizeMode.NONE
) -> tuple[PlanningInstance, ReductionMap]:
    """Build the planning instance and its bookkeeping for a formula.

    Requires at least one clause. Output is deterministic: literal
    setters by variable index, clause plumbing by clause index, satisfy
    operators by clause index with patterns in lexicographic order, the
    single reset operator, then the chain flips by position.
    """
    n = formula.num_vars
    k = formula.num_clauses
    if k < 1:
        raise ValueError("reduction needs at least one clause")
    m = 2 * k - 1

    variables: list[VariableId] = []

    def add_var(name: str) -> VariableId:
        var = VariableId(len(variables), name)
        variables.append(var)
        return var

    var_pos_list, var_neg_list = [], []
    for i in range(1, n + 1):
        var_pos_list.append(add_var(f"vx{i}"))
        var_neg_list.append(add_var(f"vnx{i}"))
    var_pos, var_neg = tuple(var_pos_list), tuple(var_neg_list)
    flag_list, latch_list = [], []
    for j in range(1, k + 1):
        flag_list.append(add_var(f"vc{j}"))
        latch_list.append(add_var(f"vcp{j}"))
    clause_flag, clause_latch = tuple(flag_list), tuple(latch_list)
    chain = tuple(add_var(f"v{i}") for i in range(1, m + 1))

    operators: list[Operator] = []
    op_info: list[OpInfo] = []

    def add_op(op: Operator, info: OpInfo) -> int:
        operators.append(op)
        op_info.append(info)
        return len(operators) - 1

    empty = PartialState()
    set_pos_list, set_neg_list = [], []
    for i in range(1, n + 1):
        set_pos_list.append(
            add_op(
                Operator(f"vx{i}_up", empty, var_pos[i - 1], 1),
                OpInfo(OpFamily.LITERAL, var=i, role="pos"),
            )
        )
        set_neg_list.append(
            add_op(
                Operator(f"vnx{i}_up", empty, var_neg[i - 1], 1),
                OpInfo(OpFamily.LITERAL, var=i, role="neg"),
            )
        )

    latch_up_list, flag_up_list, flag_dn_list = [], [], []
    for j in range(1, k + 1):
        flag, latch = clause_flag[j - 1], clause_latch[j - 1]
        latch_up_list.append(
            add_op(
                Operator(f"vcp{j}_up", empty, latch, 1),
                OpInfo(OpFamily.CLAUSE, clause=j - 1, role="latch_up"),
            )
        )
        flag_up_list.append(
            add_op(
                Operator(f"vc{j}_up", PartialState({latch: 0}), flag, 1),
                OpInfo(OpFamily.CLAUSE, clause=j - 1, role="flag_up"),
            )
        )
        flag_dn_list.append(
            add_op(
                Operator(f"vc{j}_dn", PartialState({latch: 1}), flag, 0),
                OpInfo(OpFamily.CLAUSE, clause=j - 1, role="flag_dn"),
            )
        )

    satisfy_maps: list[dict[tuple[int, ...], int]] = []
    for j in range(k):
        vars_of_clause = clause_vars(formula.clauses[j])
        width = len(vars_of_clause)
        per_clause: dict[tuple[int, ...], int] = {}
        for word in range(1 << width):
            pa = {
                x: (word >> (width - 1 - pos)) & 1
                for pos, x in enumerate(vars_of_clause)
            }
            if not clause_satisfied(formula.clauses[j], pa):
                continue
            bits = tuple(pa[x] for x in vars_of_clause)
            name = f"v1_up_c{j + 1}_" + "".join(str(b) for b in bits)
            prv = _satisfy_prevail(formula, j, pa, var_pos, var_neg, clause_flag)
            per_clause[bits] = add_op(
                Operator(name, prv, chain[0], 1),
                OpInfo(OpFamily.SATISFY, clause=j, pa=bits),
            )
        satisfy_maps.append(per_clause)

    reset_op = add_op(
        Operator("v1_dn", PartialState({f: 0 for f in clause_flag}), chain[0], 0),
        OpInfo(OpFamily.RESET),
    )

    chain_up: dict[int, int] = {}
    chain_dn: dict[int, int] = {}
    for i in range(2, m + 1):
        below = chain[i - 2]
        dn_name, up_name = chain_operator_names(i)
        chain_dn[i] = add_op(
            Operator(dn_name, PartialState({below: 0}), chain[i - 1], 0),
            OpInfo(OpFamily.CHAIN, chain_pos=i, role="dn"),
        )
        chain_up[i] = add_op(
            Operator(up_name, PartialState({below: 1}), chain[i - 1], 1),
            OpInfo(OpFamily.CHAIN, chain_pos=i, role="up"),
        )

    goal_bindings = {chain[i - 1]: i % 2 for i in range(1, m + 1)}
    if mode is not TotalizeMode.NONE:
        for i in range(1, n + 1):
            goal_bindings[var_pos[i - 1]] = 1
            goal_bindings[var_neg[i - 1]] = 1
        flag_val, latch_val = (1, 0) if mode is TotalizeMode.PAPER else (0, 1)
        for j in range(k):
            goal_bindings[clause_flag[j]] = flag_val
            goal_bindings[clause_latch[j]] = latch_val

    instance = PlanningInstance(
        tuple(variables),
        tuple(operators),
        TotalState(0, len(variables)),
        PartialState(goal_bindings),
    )
    rmap = ReductionMap(
        mode=mode,
        formula=formula,
        instance=instance,
        var_pos=var_pos,
        var_neg=var_neg,
        clause_flag=clause_flag,
        clause_latch=clause_latch,
        chain=chain,
        op_info=tuple(op_info),
        set_pos=tuple(set_pos_list),
        set_neg=tuple(set_neg_list),
        latch_up=tuple(latch_up_list),
        flag_up=tuple(flag_up_list),
        flag_dn=tuple(flag_dn_list),
        satisfy_ops=tuple(satisfy_maps),
        reset_op=reset_op,
        chain_up=chain_up,
        chain_dn=chain_dn,
    )
    return instance, rmap


def _check_assignment(formula: CnfFormula, assignment: Mapping[int, int]) -> None:
    if set(assignment) != set(range(1, formula.num_vars + 1)):
        raise ValueError("assignment must cover exactly the formula variables")
    for value in assignment.values():
        if value not in (0, 1):
            raise ValueError("assignment values must be 0 or 1")


def witness_plan(
    formula: CnfFormula, rmap: ReductionMap, assignment: Mapping[int, int]
) -> Plan:
    """Build a valid plan from a satisfying assignment.

    The prologue raises one literal variable per formula variable
    according to the assignment. The body is the chain gadget's
    telescoping schedule with v1's raises expanded to flag-up plus the
    matching SATISFY operator (clauses in formula order, one each) and
    v1's lowerings expanded to latch-up, flag-down, reset. Totalized
    modes append the closing flag round trip of the final clause
    (SWAPPED only) and the complementary literal raises.
    """
    if formula != rmap.formula:
        raise ValueError("formula does not match the reduction map")
    _check_assignment(formula, assignment)
    if not satisfies(formula, assignment):
        raise ValueError("assignment does not satisfy the formula")
    k = formula.num_clauses
    m = 2 * k - 1
    steps: list[int] = []
    for i in range(1, formula.num_vars + 1):
        steps.append(rmap.set_pos[i - 1] if assignment[i] else rmap.set_neg[i - 1])
    raises_done = 0
    for j in range(m, 0, -1):
        if j % 2 == 1:
            c = raises_done
            raises_done += 1
            variables = clause_vars(formula.clauses[c])
            bits = tuple(assignment[x] for x in variables)
            steps.append(rmap.flag_up[c])
            steps.append(rmap.satisfy_ops[c][bits])
            steps.extend(rmap.chain_up[i] for i in range(2, j + 1))
        else:
            c = raises_done - 1
            steps.extend([rmap.latch_up[c], rmap.flag_dn[c], rmap.reset_op])
            steps.extend(rmap.chain_dn[i] for i in range(2, j + 1))
    if rmap.mode is TotalizeMode.SWAPPED:
        steps.extend([rmap.latch_up[k - 1], rmap.flag_dn[k - 1]])
    if rmap.mode is not TotalizeMode.NONE:
        for i in range(1, formula.num_vars + 1):
            steps.append(rmap.set_neg[i - 1] if assignment[i] else rmap.set_pos[i - 1])
    return Plan.of(steps)


def extract_assignment(
    formula: CnfFormula, rmap: ReductionMap, plan: Plan
) -> Assignment:
    """Read a satisfying assignment off a valid plan.

    A formula variable becomes 1 if the pattern vx=1, vnx=0 occurs at
    any point of the simulated execution, 0 otherwise. Since literal
    variables never come back down, each SATISFY action's pinned pattern
    agrees with the extracted assignment on its clause.
    """
    if formula != rmap.formula:
        raise ValueError("formula does not match the reduction map")
    report = validate_plan(rmap.instance, plan)
    if not report.valid:
        raise ValueError("plan is not valid for the reduced instance")
    sigma: Assignment = {x: 0 for x in range(1, formula.num_vars + 1)}
    state = rmap.instance.init

    def absorb(current: TotalState) -> None:
        for x in range(1, formula.num_vars + 1):
            if (
                current.value(rmap.var_pos[x - 1]) == 1
                and current.value(rmap.var_neg[x - 1]) == 0
            ):
                sigma[x] = 1

    absorb(state)
    for step in plan.steps:
        op = rmap.instance.resolve_step(step)
        state = state.with_value(op.post_var, op.post_val)
        absorb(state)
    return sigma
