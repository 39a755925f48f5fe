"""The switch-chain gadget and its trajectory diagnostics.

A chain of order k has variables v1..v(2k-1), all 0 initially, with free
flips on v1 and guarded flips on the rest: vi can be raised only while
v(i-1) is 1 and lowered only while v(i-1) is 0. The goal alternates
(odd up, even down), which forces v1 through at least k rising flips in
any valid plan. The reduction compiler reuses this gadget with v1's own
flip operators replaced by a clause machinery.
"""

from __future__ import annotations

import re

from .core import (
    Operator,
    PartialState,
    Plan,
    PlanningInstance,
    TotalState,
    VariableId,
    applicable,
)
from .errors import StructuralError

_CHAIN_NAME = re.compile(r"^v(\d+)$")


def chain_operator_names(i: int) -> tuple[str, str]:
    """Names of the lowering and raising operators of variable vi."""
    return f"v{i}_dn", f"v{i}_up"


def build_chain_instance(k: int) -> PlanningInstance:
    """Chain of order k: 2k-1 variables, 4k-2 operators, alternating goal."""
    if k < 1:
        raise ValueError(f"chain order must be >= 1, got {k}")
    m = 2 * k - 1
    variables = tuple(VariableId(i, f"v{i + 1}") for i in range(m))
    operators = []
    for i in range(1, m + 1):
        var = variables[i - 1]
        if i == 1:
            prv_dn = PartialState()
            prv_up = PartialState()
        else:
            below = variables[i - 2]
            prv_dn = PartialState({below: 0})
            prv_up = PartialState({below: 1})
        dn_name, up_name = chain_operator_names(i)
        operators.append(Operator(dn_name, prv_dn, var, 0))
        operators.append(Operator(up_name, prv_up, var, 1))
    goal = PartialState({variables[i - 1]: i % 2 for i in range(1, m + 1)})
    return PlanningInstance(variables, tuple(operators), TotalState(0, m), goal)


def optimal_chain_plan(k: int) -> Plan:
    """The telescoping plan that meets the goal with exactly k raises of v1.

    Blocks run over j = 2k-1 down to 1: for odd j raise v1..vj in order,
    for even j lower them. After its block, vj is at goal parity and is
    never touched again. Total length k(2k-1).
    """
    if k < 1:
        raise ValueError(f"chain order must be >= 1, got {k}")
    m = 2 * k - 1
    dn = lambda i: 2 * (i - 1)  # operator indices in build_chain_instance order
    up = lambda i: 2 * (i - 1) + 1
    steps: list[int] = []
    for j in range(m, 0, -1):
        if j % 2 == 1:
            steps.extend(up(i) for i in range(1, j + 1))
        else:
            steps.extend(dn(i) for i in range(1, j + 1))
    return Plan.of(steps)


def _simulate(inst: PlanningInstance, plan: Plan):
    """Yield (state_before, op, state_after) for the applicable prefix.

    Stops quietly at the first inapplicable step: callers use this on
    candidate plans of unknown validity. Bad step references still raise.
    """
    state = inst.init
    for step in plan.steps:
        op = inst.resolve_step(step)
        if not applicable(op, state):
            return
        nxt = state.with_value(op.post_var, op.post_val)
        yield state, op, nxt
        state = nxt


def switch_count(inst: PlanningInstance, plan: Plan, var: VariableId) -> int:
    """Number of 0 -> 1 transitions of var along the simulated trajectory."""
    inst._resolve(var)
    count = 0
    for before, op, after in _simulate(inst, plan):
        if op.post_var == var and before.value(var) == 0 and after.value(var) == 1:
            count += 1
    return count


def chain_variables(inst: PlanningInstance) -> tuple[VariableId, ...]:
    """The chain block of an instance: variables v1..vm, in order.

    Works both on pure chain instances and on reduction outputs, which
    embed the chain among other variables.
    """
    found: dict[int, VariableId] = {}
    for var in inst.variables:
        match = _CHAIN_NAME.match(var.name)
        if match:
            found[int(match.group(1))] = var
    if not found:
        raise StructuralError("instance has no chain variables v1..vm")
    m = max(found)
    if sorted(found) != list(range(1, m + 1)):
        raise StructuralError("chain variables are not contiguous from v1")
    return tuple(found[i] for i in range(1, m + 1))


def change_profile(inst: PlanningInstance, plan: Plan) -> tuple[int, ...]:
    """Count value changes per chain variable over the applicable prefix.

    Entry i-1 is the number of applied actions that flipped vi in either
    direction. In any valid plan these counts are strictly decreasing
    along the chain; in any applicable sequence they are at least weakly
    decreasing.
    """
    chain = chain_variables(inst)
    position = {var: i for i, var in enumerate(chain)}
    counts = [0] * len(chain)
    for _, op, _ in _simulate(inst, plan):
        pos = position.get(op.post_var)
        if pos is not None:
            counts[pos] += 1
    return tuple(counts)
