"""CNF formulas with at most three distinct variables per clause.

Includes the DIMACS reader/writer, a brute-force satisfiability scan
used as the ground truth in equivalence checks, and a seeded random
formula generator. Assignments are plain dicts mapping the 1-based
formula variable to 0 or 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import ParseError

Assignment = dict[int, int]

MAX_CLAUSE_VARS = 3
BRUTE_FORCE_MAX_VARS = 24


@dataclass(frozen=True)
class Literal:
    var: int
    negated: bool = False

    def __post_init__(self):
        if self.var < 1:
            raise ValueError(f"literal variable must be >= 1, got {self.var}")

    def __repr__(self):
        return f"{'-' if self.negated else ''}x{self.var}"


Clause = tuple[Literal, ...]


def _normalize_clause(clause: Sequence[Literal]) -> Clause:
    """Drop duplicate literals, keep first-occurrence order."""
    seen = set()
    out = []
    for lit in clause:
        key = (lit.var, lit.negated)
        if key not in seen:
            seen.add(key)
            out.append(lit)
    return tuple(out)


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError("num_vars must be >= 0")
        normalized = tuple(_normalize_clause(c) for c in self.clauses)
        object.__setattr__(self, "clauses", normalized)
        for clause in normalized:
            if not clause:
                raise ValueError("empty clause")
            variables = {lit.var for lit in clause}
            if len(variables) > MAX_CLAUSE_VARS:
                raise ValueError(
                    f"clause has {len(variables)} distinct variables, "
                    f"at most {MAX_CLAUSE_VARS} supported"
                )
            polarities: dict[int, bool] = {}
            for lit in clause:
                if lit.var > self.num_vars:
                    raise ValueError(f"literal x{lit.var} exceeds num_vars={self.num_vars}")
                if lit.var in polarities and polarities[lit.var] != lit.negated:
                    raise ValueError(f"tautological clause on x{lit.var}")
                polarities[lit.var] = lit.negated

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


def clause_vars(clause: Clause) -> tuple[int, ...]:
    """Distinct variables of a clause, ascending."""
    return tuple(sorted({lit.var for lit in clause}))


def clause_satisfied(clause: Clause, assignment: Mapping[int, int]) -> bool:
    return any(assignment[lit.var] == (0 if lit.negated else 1) for lit in clause)


def satisfies(formula: CnfFormula, assignment: Mapping[int, int]) -> bool:
    return all(clause_satisfied(c, assignment) for c in formula.clauses)


def sat_brute_force(formula: CnfFormula) -> Optional[Assignment]:
    """First satisfying assignment in lexicographic order (x1 most significant).

    Ground-truth oracle: a plain scan of all 2^n assignments, independent
    of any planning machinery. Refuses formulas beyond the enumeration
    budget.
    """
    n = formula.num_vars
    if n > BRUTE_FORCE_MAX_VARS:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_MAX_VARS} variables, got {n}")
    for word in range(1 << n):
        assignment = {v: (word >> (n - v)) & 1 for v in range(1, n + 1)}
        if satisfies(formula, assignment):
            return assignment
    return None


def parse_dimacs(text: str) -> CnfFormula:
    """Parse standard DIMACS CNF.

    'c' lines are comments; the 'p cnf <vars> <clauses>' header is
    mandatory and both counts are enforced. Clauses are runs of nonzero
    integers terminated by 0 and may span lines. Duplicate literals are
    dropped; tautological clauses and clauses with more than three
    distinct variables are rejected.
    """
    num_vars: Optional[int] = None
    num_clauses: Optional[int] = None
    clauses: list[Clause] = []
    pending: list[Literal] = []
    pending_vars: dict[int, bool] = {}
    pending_line = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if num_vars is not None:
                raise ParseError("duplicate header", lineno)
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise ParseError(f"bad header {line!r}", lineno)
            try:
                num_vars, num_clauses = int(fields[2]), int(fields[3])
            except ValueError:
                raise ParseError(f"bad header {line!r}", lineno) from None
            if num_vars < 0 or num_clauses < 0:
                raise ParseError("negative counts in header", lineno)
            continue
        if num_vars is None:
            raise ParseError("clause data before 'p cnf' header", lineno)
        for token in line.split():
            try:
                value = int(token)
            except ValueError:
                raise ParseError(f"bad token {token!r}", lineno) from None
            if value == 0:
                if not pending:
                    raise ParseError("empty clause", lineno)
                if len(clauses) == num_clauses:
                    raise ParseError("more clauses than the header declares", lineno)
                if len(set(pending_vars)) > MAX_CLAUSE_VARS:
                    raise ParseError(
                        f"clause has {len(pending_vars)} distinct variables, "
                        f"at most {MAX_CLAUSE_VARS} supported",
                        pending_line,
                    )
                clauses.append(tuple(pending))
                pending = []
                pending_vars = {}
                continue
            var, negated = abs(value), value < 0
            if var > num_vars:
                raise ParseError(f"variable x{var} exceeds header count {num_vars}", lineno)
            if not pending:
                pending_line = lineno
            if var in pending_vars and pending_vars[var] != negated:
                raise ParseError(f"tautological clause on x{var}", lineno)
            if var not in pending_vars:
                pending_vars[var] = negated
                pending.append(Literal(var, negated))

    if num_vars is None:
        raise ParseError("missing 'p cnf' header")
    if pending:
        raise ParseError("unterminated clause at end of input", pending_line)
    if len(clauses) != num_clauses:
        raise ParseError(
            f"header declares {num_clauses} clauses, found {len(clauses)}"
        )
    return CnfFormula(num_vars, tuple(clauses))


def render_dimacs(formula: CnfFormula, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {formula.num_vars} {formula.num_clauses}")
    for clause in formula.clauses:
        lits = " ".join(f"{'-' if l.negated else ''}{l.var}" for l in clause)
        lines.append(f"{lits} 0")
    return "\n".join(lines) + "\n"


def sample_formula(num_vars: int, num_clauses: int, seed: int) -> CnfFormula:
    """Seeded random formula with mixed clause widths 1..3.

    Every variable is guaranteed to occur in at least one clause (the
    draw is repeated until that holds), so structural quantities such as
    the reduction's bottleneck indegree depend only on (num_vars,
    num_clauses). Requires num_vars <= 3 * num_clauses, otherwise no
    draw can cover all variables.
    """
    if num_vars < 1 or num_clauses < 1:
        raise ValueError("need at least one variable and one clause")
    if num_vars > 3 * num_clauses:
        raise ValueError(
            f"{num_clauses} clauses of width <= 3 cannot cover {num_vars} variables"
        )
    rng = random.Random(seed)
    for _ in range(100_000):
        clauses = []
        used: set[int] = set()
        for _ in range(num_clauses):
            width = min(1 + rng.randrange(3), num_vars)
            chosen: list[int] = []
            while len(chosen) < width:
                var = 1 + rng.randrange(num_vars)
                if var not in chosen:
                    chosen.append(var)
            clauses.append(tuple(Literal(v, rng.randrange(2) == 1) for v in chosen))
            used.update(chosen)
        if len(used) == num_vars:
            return CnfFormula(num_vars, tuple(clauses))
    raise RuntimeError("sampling failed to cover all variables")  # pragma: no cover
