"""Planning toolkit for binary variables, unary operators, and polytree
causal graphs: instance model, causal-graph analysis, the switch-chain
gadget, a CNF-to-planning reduction compiler with witness/extraction,
and an exhaustive search oracle."""

from .causal import CausalGraph, GraphReport, build_causal_graph, classify, indegree, to_dot
from .chain import (
    build_chain_instance,
    change_profile,
    chain_variables,
    optimal_chain_plan,
    switch_count,
)
from .cnf import (
    Assignment,
    CnfFormula,
    Literal,
    parse_dimacs,
    render_dimacs,
    sample_formula,
    sat_brute_force,
    satisfies,
)
from .core import (
    Operator,
    PartialState,
    Plan,
    PlanningInstance,
    TotalState,
    ValidationReport,
    VariableId,
    applicable,
    apply,
    cpnet_translatable,
    implicit_pre,
    merge,
    subsumes,
    validate_plan,
)
from .errors import (
    ApplicationError,
    BudgetExceededError,
    ParseError,
    PlanningError,
    StructuralError,
)
from .reduction import (
    OpFamily,
    OpInfo,
    ReductionMap,
    TotalizeMode,
    extract_assignment,
    reduce_formula,
    satisfy_op_prevail,
    witness_plan,
)
from .search import (
    BUDGET_EXCEEDED,
    NO_PLAN,
    PLAN_FOUND,
    SearchBudget,
    SearchResult,
    count_reachable,
    find_shortest_plan,
    min_switch_cost,
)

__version__ = "0.1.0"
