"""Exhaustive ground-truth search over total states.

States are packed integers (bit i = variable ordinal i), operators are
compiled to (condition mask, condition bits, clear mask, set bits)
quadruples so that applicability is one masked compare and application
is two bitwise ops. Searches are deterministic: breadth-first levels are
expanded operator-major (operator index first, frontier order second),
and the first discovery of a state fixes its predecessor, so ties
between equal-length plans resolve toward smaller operator indices at
the final steps.

Instances of up to 22 variables run on dense numpy arrays indexed by the
packed state (the acceptance workload, up to 2^17 states per instance,
needs the vectorized path); larger instances fall back to a dict-based
implementation with identical semantics. Budgets are mandatory: plan
existence here is NP-complete in general, so exhausting the budget is a
first-class outcome, never silent.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .core import Plan, PlanningInstance
from .errors import BudgetExceededError, StructuralError

PLAN_FOUND = "plan_found"
NO_PLAN = "no_plan"
BUDGET_EXCEEDED = "budget_exceeded"

_DENSE_LIMIT = 22
_ROOT = -2  # parent_op marker for the initial state


@dataclass(frozen=True)
class SearchBudget:
    """Bounds on a search: states visited, and optionally plan depth."""

    max_states: int = 1 << 22
    max_steps: Optional[int] = None

    def __post_init__(self):
        if self.max_states < 1:
            raise ValueError("max_states must be >= 1")


@dataclass(frozen=True)
class SearchResult:
    outcome: str  # PLAN_FOUND, NO_PLAN, or BUDGET_EXCEEDED
    plan: Optional[Plan]
    states_expanded: int


def compile_operators(inst: PlanningInstance) -> list[tuple[int, int, int, int]]:
    """Pack each operator as (cond_mask, cond_bits, clear_mask, set_bits).

    The condition covers the prevail set plus the implicit pre-condition,
    so op is applicable in packed state s iff s & cond_mask == cond_bits,
    and the successor is (s & clear_mask) | set_bits.
    """
    full = (1 << inst.num_vars) - 1
    compiled = []
    for op in inst.operators:
        mask = 1 << op.post_var.index
        bits = (1 - op.post_val) << op.post_var.index
        for var, val in op.prv.items():
            mask |= 1 << var.index
            bits |= val << var.index
        post_bit = 1 << op.post_var.index
        clear = full & ~post_bit
        setb = op.post_val << op.post_var.index
        compiled.append((mask, bits, clear, setb))
    return compiled


def goal_condition(inst: PlanningInstance) -> tuple[int, int]:
    """(mask, bits) such that a packed state meets the goal iff s & mask == bits."""
    mask = 0
    bits = 0
    for var, val in inst.goal.items():
        mask |= 1 << var.index
        bits |= val << var.index
    return mask, bits


def find_shortest_plan(
    inst: PlanningInstance, budget: SearchBudget = SearchBudget()
) -> SearchResult:
    """Breadth-first search for a minimum-length plan.

    Returns NO_PLAN only after the reachable space is exhausted within
    budget; a budget hit (too many visited states, or the optional depth
    cap with frontier remaining) yields BUDGET_EXCEEDED instead of an
    exception so callers can distinguish "proved unsolvable" from "gave
    up".
    """
    ops = compile_operators(inst)
    goal_mask, goal_bits = goal_condition(inst)
    init = inst.init.bits
    if init & goal_mask == goal_bits:
        return SearchResult(PLAN_FOUND, Plan.of(()), 0)
    if inst.num_vars <= _DENSE_LIMIT and len(ops) < 32000:
        outcome, steps, expanded = _bfs_dense(
            inst.num_vars, ops, init, goal_mask, goal_bits, budget
        )
    else:
        outcome, steps, expanded = _bfs_sparse(
            ops, init, goal_mask, goal_bits, budget
        )
    plan = Plan.of(steps) if outcome == PLAN_FOUND else None
    return SearchResult(outcome, plan, expanded)


def _bfs_dense(num_vars, ops, init, goal_mask, goal_bits, budget):
    size = 1 << num_vars
    parent_op = np.full(size, -1, dtype=np.int16)
    parent_state = np.zeros(size, dtype=np.uint32)
    parent_op[init] = _ROOT
    frontier = np.array([init], dtype=np.uint32)
    visited = 1
    expanded = 0
    depth = 0
    while frontier.size:
        if visited > budget.max_states:
            return BUDGET_EXCEEDED, None, expanded
        if budget.max_steps is not None and depth >= budget.max_steps:
            return BUDGET_EXCEEDED, None, expanded
        expanded += int(frontier.size)
        parts = []
        for op_idx, (mask, bits, clear, setb) in enumerate(ops):
            applicable_states = frontier[(frontier & mask) == bits]
            if not applicable_states.size:
                continue
            succ = (applicable_states & clear) | setb
            uniq, first = np.unique(succ, return_index=True)
            fresh = parent_op[uniq] == -1
            if not fresh.any():
                continue
            new_states = uniq[fresh]
            first_seen = first[fresh]
            parent_op[new_states] = op_idx
            parent_state[new_states] = applicable_states[first_seen]
            order = np.argsort(first_seen, kind="stable")
            new_states = new_states[order]
            visited += int(new_states.size)
            hits = new_states[(new_states & goal_mask) == goal_bits]
            if hits.size:
                return PLAN_FOUND, _walk_back(parent_op, parent_state, int(hits[0])), expanded
            parts.append(new_states)
        frontier = np.concatenate(parts) if parts else np.empty(0, dtype=np.uint32)
        depth += 1
    return NO_PLAN, None, expanded


def _walk_back(parent_op, parent_state, state):
    steps = []
    while parent_op[state] != _ROOT:
        steps.append(int(parent_op[state]))
        state = int(parent_state[state])
    steps.reverse()
    return steps


def _bfs_sparse(ops, init, goal_mask, goal_bits, budget):
    parent: dict[int, Optional[tuple[int, int]]] = {init: None}
    frontier = [init]
    expanded = 0
    depth = 0
    while frontier:
        if len(parent) > budget.max_states:
            return BUDGET_EXCEEDED, None, expanded
        if budget.max_steps is not None and depth >= budget.max_steps:
            return BUDGET_EXCEEDED, None, expanded
        expanded += len(frontier)
        nxt = []
        for op_idx, (mask, bits, clear, setb) in enumerate(ops):
            for state in frontier:
                if state & mask != bits:
                    continue
                succ = (state & clear) | setb
                if succ in parent:
                    continue
                parent[succ] = (state, op_idx)
                nxt.append(succ)
                if succ & goal_mask == goal_bits:
                    steps = []
                    cursor: Optional[int] = succ
                    while parent[cursor] is not None:
                        prev, via = parent[cursor]  # type: ignore[misc]
                        steps.append(via)
                        cursor = prev
                    steps.reverse()
                    return PLAN_FOUND, steps, expanded
        frontier = nxt
        depth += 1
    return NO_PLAN, None, expanded


def min_switch_cost(
    inst: PlanningInstance,
    charged_ops: Iterable[int],
    budget: SearchBudget = SearchBudget(),
) -> Optional[int]:
    """Minimum number of charged-operator applications over all valid plans.

    Uniform-cost search where charged operators cost 1 and everything
    else costs 0; the queue is keyed by (cost, insertion order) so
    results are deterministic, and every state is settled exactly once,
    so zero-cost cycles terminate. Returns None when no valid plan
    exists; raises BudgetExceededError when the budget runs out first.
    """
    charged = frozenset(charged_ops)
    for idx in charged:
        if not 0 <= idx < len(inst.operators):
            raise StructuralError(f"charged operator index {idx} out of range")
    ops = compile_operators(inst)
    goal_mask, goal_bits = goal_condition(inst)
    counter = 0
    heap: list[tuple[int, int, int]] = [(0, counter, inst.init.bits)]
    best = {inst.init.bits: 0}
    settled: set[int] = set()
    while heap:
        cost, _, state = heapq.heappop(heap)
        if state in settled:
            continue
        settled.add(state)
        if len(settled) > budget.max_states:
            raise BudgetExceededError(len(settled))
        if state & goal_mask == goal_bits:
            return cost
        for op_idx, (mask, bits, clear, setb) in enumerate(ops):
            if state & mask != bits:
                continue
            succ = (state & clear) | setb
            if succ in settled:
                continue
            succ_cost = cost + (1 if op_idx in charged else 0)
            if succ_cost < best.get(succ, succ_cost + 1):
                best[succ] = succ_cost
                counter += 1
                heapq.heappush(heap, (succ_cost, counter, succ))
    return None


def count_reachable(
    inst: PlanningInstance, budget: SearchBudget = SearchBudget()
) -> int:
    """Number of distinct total states reachable from the initial state.

    With a max_steps budget the count covers states within that depth.
    Raises BudgetExceededError once more than max_states are seen.
    """
    ops = compile_operators(inst)
    visited = {inst.init.bits}
    frontier = [inst.init.bits]
    depth = 0
    while frontier:
        if budget.max_steps is not None and depth >= budget.max_steps:
            break
        nxt = []
        for mask, bits, clear, setb in ops:
            for state in frontier:
                if state & mask != bits:
                    continue
                succ = (state & clear) | setb
                if succ not in visited:
                    visited.add(succ)
                    if len(visited) > budget.max_states:
                        raise BudgetExceededError(len(visited))
                    nxt.append(succ)
        frontier = nxt
        depth += 1
    return len(visited)
