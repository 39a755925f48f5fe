"""Exception types shared across the toolkit."""

from __future__ import annotations


class PlanningError(Exception):
    """Base class for all toolkit-specific failures."""


class StructuralError(PlanningError):
    """An instance, state, or reference is malformed.

    Raised for unknown variables, dangling operator references,
    duplicate names, and similar wiring problems. Distinct from
    ApplicationError, which reports a precondition violation on a
    structurally sound instance.
    """


class ApplicationError(PlanningError):
    """An operator was applied in a state where it is not applicable."""

    def __init__(self, op_name: str, message: str | None = None):
        self.op_name = op_name
        super().__init__(message or f"operator {op_name!r} is not applicable")


class BudgetExceededError(PlanningError):
    """A search ran out of its state budget before reaching an answer."""

    def __init__(self, states_expanded: int, message: str | None = None):
        self.states_expanded = states_expanded
        super().__init__(
            message or f"search budget exhausted after {states_expanded} states"
        )


class ParseError(PlanningError):
    """A text input could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
