"""Planning model for binary state variables and unary operators.

A state variable holds 0 or 1. An operator carries prevail conditions
(variables it reads but never writes) and a single post-condition
``post_var <- post_val``. The pre-condition on the written variable is
implicit: writing value b requires the variable to currently hold 1 - b,
so every applied operator actually flips its variable. Partial states
merge with right preference, and a plan is valid when simulating it from
the initial state applies every step and ends in a state containing the
goal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union

from .errors import ApplicationError, StructuralError

#: Validation failure causes reported by validate_plan.
REASON_INAPPLICABLE = "inapplicable"
REASON_GOAL_UNMET = "goal_unmet"


def _check_bit(value: int) -> int:
    if value not in (0, 1):
        raise StructuralError(f"expected a 0/1 value, got {value!r}")
    return value


@dataclass(frozen=True)
class VariableId:
    """A state variable: ordinal into the instance table plus a name."""

    index: int
    name: str

    def __post_init__(self):
        if self.index < 0:
            raise StructuralError(f"variable index must be >= 0, got {self.index}")
        if not self.name or any(c.isspace() for c in self.name):
            raise StructuralError(f"bad variable name {self.name!r}")

    def __repr__(self):
        return f"VariableId({self.index}, {self.name!r})"


class PartialState:
    """Immutable assignment of 0/1 values to a subset of variables."""

    __slots__ = ("_bindings",)

    def __init__(
        self,
        bindings: Union[Mapping[VariableId, int], Iterable[tuple[VariableId, int]]] = (),
    ):
        items = bindings.items() if isinstance(bindings, Mapping) else bindings
        d: dict[VariableId, int] = {}
        for var, value in items:
            if not isinstance(var, VariableId):
                raise StructuralError(f"partial-state key {var!r} is not a VariableId")
            if var in d and d[var] != value:
                raise StructuralError(f"variable {var.name!r} bound twice")
            d[var] = _check_bit(value)
        object.__setattr__(self, "_bindings", d)

    def __setattr__(self, name, value):
        raise AttributeError("PartialState is immutable")

    def variables(self) -> frozenset[VariableId]:
        return frozenset(self._bindings)

    def items(self) -> list[tuple[VariableId, int]]:
        """Bindings sorted by variable ordinal, for deterministic output."""
        return sorted(self._bindings.items(), key=lambda kv: kv[0].index)

    def get(self, var: VariableId, default: Optional[int] = None) -> Optional[int]:
        return self._bindings.get(var, default)

    def __contains__(self, var: VariableId) -> bool:
        return var in self._bindings

    def __len__(self) -> int:
        return len(self._bindings)

    def __bool__(self) -> bool:
        return bool(self._bindings)

    def __iter__(self) -> Iterator[VariableId]:
        return iter(self._bindings)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartialState):
            return NotImplemented
        return self._bindings == other._bindings

    def __hash__(self) -> int:
        return hash(frozenset(self._bindings.items()))

    def __repr__(self):
        inner = ", ".join(f"{v.name}={b}" for v, b in self.items())
        return f"{{{inner}}}"


class TotalState:
    """Total assignment packed as an integer bitmask.

    Bit i of ``bits`` is the value of the variable with ordinal i. The
    packed form is what the search oracle hashes, so it is exposed
    directly.
    """

    __slots__ = ("_bits", "_width")

    def __init__(self, bits: int, width: int):
        if width < 0:
            raise StructuralError("width must be >= 0")
        if bits < 0 or bits >> width:
            raise StructuralError(f"bits {bits:#x} out of range for width {width}")
        object.__setattr__(self, "_bits", bits)
        object.__setattr__(self, "_width", width)

    def __setattr__(self, name, value):
        raise AttributeError("TotalState is immutable")

    @classmethod
    def from_values(cls, values: Iterable[int]) -> "TotalState":
        bits = 0
        width = 0
        for value in values:
            bits |= _check_bit(value) << width
            width += 1
        return cls(bits, width)

    @property
    def bits(self) -> int:
        return self._bits

    @property
    def width(self) -> int:
        return self._width

    def value(self, var: VariableId) -> int:
        if var.index >= self._width:
            raise StructuralError(f"variable {var.name!r} outside state of width {self._width}")
        return (self._bits >> var.index) & 1

    def values(self) -> tuple[int, ...]:
        return tuple((self._bits >> i) & 1 for i in range(self._width))

    def with_value(self, var: VariableId, value: int) -> "TotalState":
        if var.index >= self._width:
            raise StructuralError(f"variable {var.name!r} outside state of width {self._width}")
        bit = 1 << var.index
        bits = (self._bits | bit) if _check_bit(value) else (self._bits & ~bit)
        return TotalState(bits, self._width)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TotalState):
            return NotImplemented
        return self._bits == other._bits and self._width == other._width

    def __hash__(self) -> int:
        return hash((self._bits, self._width))

    def __repr__(self):
        return f"TotalState({''.join(str(b) for b in self.values())})"


@dataclass(frozen=True)
class Operator:
    """Unary operator: prevail conditions plus one post-condition.

    The pre-condition is never stored; it is always derived from the
    post-condition (see implicit_pre), which keeps the two from drifting
    apart.
    """

    name: str
    prv: PartialState
    post_var: VariableId
    post_val: int

    def __post_init__(self):
        if not self.name or any(c.isspace() for c in self.name):
            raise StructuralError(f"bad operator name {self.name!r}")
        _check_bit(self.post_val)
        if self.post_var in self.prv:
            raise StructuralError(
                f"operator {self.name!r}: post variable {self.post_var.name!r} "
                "also appears in the prevail conditions"
            )


@dataclass(frozen=True)
class Plan:
    """Sequence of operator references (indices into the instance table)."""

    steps: tuple[int, ...]

    @classmethod
    def of(cls, steps: Iterable[int]) -> "Plan":
        return cls(tuple(steps))

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of simulating a plan.

    valid is true exactly when failed_step and reason are both absent.
    final_state is the state reached by the longest applicable prefix.
    """

    valid: bool
    failed_step: Optional[int]
    reason: Optional[str]
    final_state: TotalState


@dataclass(frozen=True)
class PlanningInstance:
    """Variables, operators, a total initial state, and a partial goal."""

    variables: tuple[VariableId, ...]
    operators: tuple[Operator, ...]
    init: TotalState
    goal: PartialState

    def __post_init__(self):
        names = set()
        for pos, var in enumerate(self.variables):
            if var.index != pos:
                raise StructuralError(
                    f"variable {var.name!r} has index {var.index}, expected {pos}"
                )
            if var.name in names:
                raise StructuralError(f"duplicate variable name {var.name!r}")
            names.add(var.name)
        if self.init.width != len(self.variables):
            raise StructuralError(
                f"initial state covers {self.init.width} variables, "
                f"instance has {len(self.variables)}"
            )
        for var in self.goal:
            self._resolve(var)
        op_names = set()
        for op in self.operators:
            if op.name in op_names:
                raise StructuralError(f"duplicate operator name {op.name!r}")
            op_names.add(op.name)
            self._resolve(op.post_var)
            for var in op.prv:
                self._resolve(var)

    def _resolve(self, var: VariableId) -> VariableId:
        if var.index >= len(self.variables) or self.variables[var.index] != var:
            raise StructuralError(f"variable {var.name!r} is not in the instance table")
        return var

    @property
    def num_vars(self) -> int:
        return len(self.variables)

    def variable(self, name: str) -> VariableId:
        for var in self.variables:
            if var.name == name:
                return var
        raise StructuralError(f"no variable named {name!r}")

    def operator_index(self, name: str) -> int:
        for idx, op in enumerate(self.operators):
            if op.name == name:
                return idx
        raise StructuralError(f"no operator named {name!r}")

    def resolve_step(self, step: int) -> Operator:
        if not 0 <= step < len(self.operators):
            raise StructuralError(f"plan step {step} does not resolve to an operator")
        return self.operators[step]

    def partial(self, **bindings: int) -> PartialState:
        """Build a partial state from variable names, mostly for tests."""
        return PartialState({self.variable(n): b for n, b in bindings.items()})


def merge(s: PartialState, s2: PartialState) -> PartialState:
    """Overlay s2 onto s; where both bind a variable, s2 wins."""
    combined = dict(s.items())
    combined.update(s2.items())
    return PartialState(combined)


def subsumes(s: PartialState, t: Union[PartialState, TotalState]) -> bool:
    """True iff every binding of s is present in t with the same value."""
    if isinstance(t, TotalState):
        return all(t.value(var) == val for var, val in s.items())
    return all(t.get(var) == val for var, val in s.items())


def implicit_pre(op: Operator) -> PartialState:
    """The derived pre-condition: the post variable holds the flipped value."""
    return PartialState({op.post_var: 1 - op.post_val})


def applicable(op: Operator, state: TotalState) -> bool:
    """True iff both the prevail conditions and the implicit pre-condition hold."""
    return subsumes(op.prv, state) and state.value(op.post_var) == 1 - op.post_val


def apply(op: Operator, state: TotalState) -> TotalState:
    """Apply op to state, flipping its post variable.

    Raises ApplicationError when op is not applicable; the result always
    differs from state in exactly the post variable.
    """
    if not applicable(op, state):
        raise ApplicationError(op.name)
    return state.with_value(op.post_var, op.post_val)


def validate_plan(inst: PlanningInstance, plan: Plan) -> ValidationReport:
    """Simulate plan from inst.init and check the goal at the end.

    Application failures become invalid reports naming the first failing
    step; unresolvable step references raise StructuralError instead.
    """
    state = inst.init
    for pos, step in enumerate(plan.steps):
        op = inst.resolve_step(step)
        if not applicable(op, state):
            return ValidationReport(False, pos, REASON_INAPPLICABLE, state)
        state = state.with_value(op.post_var, op.post_val)
    if subsumes(inst.goal, state):
        return ValidationReport(True, None, None, state)
    return ValidationReport(False, None, REASON_GOAL_UNMET, state)


def cpnet_translatable(inst: PlanningInstance) -> bool:
    """Check the structural precondition for rewriting as a CP-net query.

    Fails exactly when two operators write the same variable with
    opposite values under identical prevail conditions.
    """
    seen: dict[tuple[int, frozenset], set[int]] = {}
    for op in inst.operators:
        key = (op.post_var.index, frozenset((v.index, b) for v, b in op.prv.items()))
        vals = seen.setdefault(key, set())
        if (1 - op.post_val) in vals:
            return False
        vals.add(op.post_val)
    return True
