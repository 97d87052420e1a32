"""Horn-clause representation, parsing, and SLD resolution."""
from .engine import (
    BudgetExceeded,
    ComparisonError,
    SolveLimits,
    Subst,
    UnknownPredicate,
    query_variables,
    resolve,
    solve,
    unify,
    walk,
)
from .parser import ProgramSyntaxError, parse_goals, parse_program
from .terms import (
    COMPARISON_OPS,
    ArityError,
    Atom,
    Clause,
    LogicError,
    NonGroundFact,
    Num,
    Program,
    Struct,
    Term,
    Var,
    assert_fact,
    extend,
    format_clause,
    format_program,
    format_term,
)

__all__ = [
    "ArityError",
    "Atom",
    "BudgetExceeded",
    "COMPARISON_OPS",
    "Clause",
    "ComparisonError",
    "LogicError",
    "NonGroundFact",
    "Num",
    "Program",
    "ProgramSyntaxError",
    "SolveLimits",
    "Struct",
    "Subst",
    "Term",
    "UnknownPredicate",
    "Var",
    "assert_fact",
    "extend",
    "format_clause",
    "format_program",
    "format_term",
    "parse_goals",
    "parse_program",
    "query_variables",
    "resolve",
    "solve",
    "unify",
    "walk",
]
