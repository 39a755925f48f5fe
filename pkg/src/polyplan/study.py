"""Seeded formula sample and the satisfiability/plan-existence study.

The default sample pairs each (variables, clauses) combination with 20
seeds, giving 200 formulas. Combinations keep the reduced state space at
or below 2^17 packed states and stay coverable (a formula with n
variables needs at least n/3 clauses so every variable can occur), which
pins the structural quantities the checks rely on.

For each formula the study records brute-force satisfiability and, per
goal mode, whether the exhaustive search finds a plan for the reduced
instance. For the plain and swapped goal modes plan existence must agree
with satisfiability; the fully totalized goal taken literally has no
asserted outcome and is simply measured.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, TextIO

from .cnf import Assignment, CnfFormula, sat_brute_force, sample_formula
from .core import Plan
from .reduction import TotalizeMode, reduce_formula
from .search import NO_PLAN, PLAN_FOUND, SearchBudget, find_shortest_plan

#: (num_vars, num_clauses) pairs used by the default sample.
DEFAULT_COMBOS: tuple[tuple[int, int], ...] = (
    (1, 1), (2, 1), (3, 1),
    (1, 2), (2, 2), (3, 2), (4, 2),
    (1, 3), (2, 3), (3, 3),
)
SEEDS_PER_COMBO = 20

ALL_MODES = (TotalizeMode.NONE, TotalizeMode.SWAPPED, TotalizeMode.PAPER)


@dataclass(frozen=True)
class SampleCase:
    num_vars: int
    num_clauses: int
    seed: int

    @property
    def label(self) -> str:
        return f"n{self.num_vars}_k{self.num_clauses}_s{self.seed}"


@dataclass
class StudyRow:
    case: SampleCase
    formula: CnfFormula
    satisfiable: bool
    assignment: Optional[Assignment]
    plan_found: dict[TotalizeMode, bool]
    plans: dict[TotalizeMode, Optional[Plan]]

    def agrees(self, mode: TotalizeMode) -> bool:
        return self.plan_found[mode] == self.satisfiable


def default_cases(seeds_per_combo: int = SEEDS_PER_COMBO) -> list[SampleCase]:
    cases = []
    for n, k in DEFAULT_COMBOS:
        for s in range(seeds_per_combo):
            cases.append(SampleCase(n, k, seed=n * 1000 + k * 100 + s))
    return cases


def case_formula(case: SampleCase) -> CnfFormula:
    return sample_formula(case.num_vars, case.num_clauses, case.seed)


def run_study(
    cases: Iterable[SampleCase],
    modes: Sequence[TotalizeMode] = ALL_MODES,
    budget: SearchBudget = SearchBudget(),
) -> list[StudyRow]:
    rows = []
    for case in cases:
        formula = case_formula(case)
        assignment = sat_brute_force(formula)
        plan_found: dict[TotalizeMode, bool] = {}
        plans: dict[TotalizeMode, Optional[Plan]] = {}
        for mode in modes:
            instance, _ = reduce_formula(formula, mode)
            result = find_shortest_plan(instance, budget)
            if result.outcome not in (PLAN_FOUND, NO_PLAN):
                raise RuntimeError(
                    f"search budget exhausted on {case.label} mode={mode.value}"
                )
            plan_found[mode] = result.outcome == PLAN_FOUND
            plans[mode] = result.plan
        rows.append(
            StudyRow(case, formula, assignment is not None, assignment, plan_found, plans)
        )
    return rows


def write_report_csv(rows: Sequence[StudyRow], stream: TextIO) -> None:
    modes = list(rows[0].plan_found) if rows else list(ALL_MODES)
    header = ["id", "vars", "clauses", "seed", "sat"]
    for mode in modes:
        header.append(f"plan_{mode.value}")
        if mode is not TotalizeMode.PAPER:
            header.append(f"agree_{mode.value}")
    writer = csv.writer(stream)
    writer.writerow(header)
    for row in rows:
        record = [
            row.case.label,
            row.case.num_vars,
            row.case.num_clauses,
            row.case.seed,
            int(row.satisfiable),
        ]
        for mode in modes:
            record.append(int(row.plan_found[mode]))
            if mode is not TotalizeMode.PAPER:
                record.append(int(row.agrees(mode)))
        writer.writerow(record)


def summarize(rows: Sequence[StudyRow]) -> list[str]:
    lines = [f"formulas: {len(rows)}"]
    sat_count = sum(r.satisfiable for r in rows)
    lines.append(f"satisfiable: {sat_count}/{len(rows)}")
    modes = list(rows[0].plan_found) if rows else []
    for mode in modes:
        if mode is TotalizeMode.PAPER:
            found = sum(r.plan_found[mode] for r in rows)
            lines.append(f"mode {mode.value}: plan found {found}/{len(rows)}")
            by_k: dict[int, tuple[int, int]] = {}
            for r in rows:
                if not r.satisfiable:
                    continue
                hit, total = by_k.get(r.case.num_clauses, (0, 0))
                by_k[r.case.num_clauses] = (hit + r.plan_found[mode], total + 1)
            for k in sorted(by_k):
                hit, total = by_k[k]
                lines.append(
                    f"mode {mode.value}: satisfiable with {k} clause(s) "
                    f"solvable {hit}/{total}"
                )
        else:
            agree = sum(r.agrees(mode) for r in rows)
            lines.append(f"mode {mode.value}: agree {agree}/{len(rows)}")
    return lines
