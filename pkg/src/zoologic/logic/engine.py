"""Unification and SLD resolution over clause programs.

The solver explores the search tree depth first, selecting the leftmost
goal and trying clauses in program order, so solutions stream out in
textual clause order. Substitutions are built lazily during the search
and fully resolved only when a solution is emitted.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, Optional, Sequence

from .terms import (
    COMPARISON_OPS,
    Atom,
    Clause,
    LogicError,
    Num,
    Program,
    Struct,
    Term,
    Var,
)

Subst = Dict[str, Term]


class BudgetExceeded(LogicError):
    """The resolution step or depth budget ran out before the search finished."""


class UnknownPredicate(LogicError):
    """A goal referenced a predicate with no clauses; usually a mismatch
    between the rule set and the grounded facts."""

    def __init__(self, functor: str, arity: int):
        super().__init__(f"unknown predicate {functor}/{arity}")
        self.functor = functor
        self.arity = arity


class ComparisonError(LogicError):
    """An arithmetic comparison was applied to a non-numeric or unbound term."""


@dataclass(frozen=True)
class SolveLimits:
    """Budget for one solve call. Both bounds must be positive."""

    max_steps: int = 100_000
    max_depth: int = 10_000


def walk(term: Term, subst: Subst) -> Term:
    """Follow variable bindings until a non-variable or unbound variable."""
    while isinstance(term, Var):
        bound = subst.get(term.name)
        if bound is None:
            return term
        term = bound
    return term


def resolve(term: Term, subst: Subst) -> Term:
    """Apply a substitution all the way down, rebuilding compounds."""
    term = walk(term, subst)
    if isinstance(term, Struct):
        return Struct(term.functor, tuple(resolve(a, subst) for a in term.args))
    return term


def occurs(name: str, term: Term, subst: Subst) -> bool:
    term = walk(term, subst)
    if isinstance(term, Var):
        return term.name == name
    if isinstance(term, Struct):
        return any(occurs(name, a, subst) for a in term.args)
    return False


def _nums_equal(a: Num, b: Num) -> bool:
    # Unification is syntactic: 3 and 3.0 are different terms.
    return type(a.value) is type(b.value) and a.value == b.value


def unify(t1: Term, t2: Term, subst: Optional[Subst] = None) -> Optional[Subst]:
    """Most general unifier extending ``subst``, or None on failure.

    Failure is an ordinary value, not an error. The occurs check is
    always on, so no binding ever contains its own variable.
    """
    if subst is None:
        subst = {}
    t1 = walk(t1, subst)
    t2 = walk(t2, subst)
    if isinstance(t1, Var):
        if isinstance(t2, Var) and t2.name == t1.name:
            return subst
        if occurs(t1.name, t2, subst):
            return None
        out = dict(subst)
        out[t1.name] = t2
        return out
    if isinstance(t2, Var):
        if occurs(t2.name, t1, subst):
            return None
        out = dict(subst)
        out[t2.name] = t1
        return out
    if isinstance(t1, Atom) and isinstance(t2, Atom):
        return subst if t1.name == t2.name else None
    if isinstance(t1, Num) and isinstance(t2, Num):
        return subst if _nums_equal(t1, t2) else None
    if isinstance(t1, Struct) and isinstance(t2, Struct):
        if t1.functor != t2.functor or len(t1.args) != len(t2.args):
            return None
        for a, b in zip(t1.args, t2.args):
            subst = unify(a, b, subst)
            if subst is None:
                return None
        return subst
    return None


def _rename_term(term: Term, mapping: Dict[str, Var]) -> Term:
    if isinstance(term, Var):
        return mapping[term.name]
    if isinstance(term, Struct):
        return Struct(term.functor, tuple(_rename_term(a, mapping) for a in term.args))
    return term


def _rename_clause(clause: Clause, serial: int) -> Clause:
    if not clause.variables:
        return clause
    mapping = {name: Var(f"_R{serial}_{name}") for name in clause.variables}
    head = _rename_term(clause.head, mapping)
    body = tuple(_rename_term(g, mapping) for g in clause.body)
    return Clause(head, body)


def _eval_comparison(goal: Struct, subst: Subst) -> Optional[Subst]:
    op = goal.functor
    left = walk(goal.args[0], subst)
    right = walk(goal.args[1], subst)
    if op == "=":
        return unify(left, right, subst)
    left = resolve(left, subst)
    right = resolve(right, subst)
    if not isinstance(left, Num) or not isinstance(right, Num):
        raise ComparisonError(f"cannot evaluate {left} {op} {right}: both sides must be numbers")
    a, b = left.value, right.value
    if op == ">=":
        ok = a >= b
    elif op == ">":
        ok = a > b
    elif op == "=<":
        ok = a <= b
    elif op == "<":
        ok = a < b
    elif op == "=:=":
        ok = a == b
    else:  # pragma: no cover - functor validation forbids this
        raise ComparisonError(f"unknown comparison {op!r}")
    return subst if ok else None


def query_variables(goals: Sequence[Struct]) -> tuple[str, ...]:
    """Variable names across the goals, first occurrence first."""
    names: list[str] = []
    seen: set[str] = set()
    for goal in goals:
        stack: list[Term] = [goal]
        while stack:
            t = stack.pop(0)
            if isinstance(t, Var):
                if t.name not in seen:
                    seen.add(t.name)
                    names.append(t.name)
            elif isinstance(t, Struct):
                stack[0:0] = list(t.args)
    return tuple(names)


def solve(
    program: Program,
    goals: Sequence[Struct],
    limits: Optional[SolveLimits] = None,
) -> Iterator[Subst]:
    """Enumerate solutions to a goal conjunction, lazily.

    Each solution maps the query's variable names to fully resolved
    terms, so applying it twice changes nothing. Raises UnknownPredicate
    when a selected goal has no defining clauses, and BudgetExceeded when
    the step or depth budget runs out mid-search.
    """
    if limits is None:
        limits = SolveLimits()
    if limits.max_steps <= 0 or limits.max_depth <= 0:
        raise ValueError("solve limits must be positive")
    goals = tuple(goals)
    qvars = query_variables(goals)
    steps = [0]
    serial = [0]

    def charge() -> None:
        steps[0] += 1
        if steps[0] > limits.max_steps:
            raise BudgetExceeded(f"step budget of {limits.max_steps} exhausted")

    def expand(pending: tuple, subst: Subst) -> Iterator[tuple]:
        goal = pending[0]
        rest = pending[1:]
        if goal.functor in COMPARISON_OPS:
            charge()
            nxt = _eval_comparison(goal, subst)
            if nxt is not None:
                yield (rest, nxt)
            return
        arity = len(goal.args)
        first = walk(goal.args[0], subst)
        clauses = program.candidates(
            goal.functor, arity, first.name if isinstance(first, Atom) else None
        )
        if clauses is None:
            raise UnknownPredicate(goal.functor, arity)
        for clause in clauses:
            charge()
            serial[0] += 1
            renamed = _rename_clause(clause, serial[0])
            nxt = unify(goal, renamed.head, subst)
            if nxt is not None:
                yield (renamed.body + rest, nxt)

    sentinel = object()
    stack: list[Iterator[tuple]] = [iter(((goals, {}),))]
    while stack:
        node = next(stack[-1], sentinel)
        if node is sentinel:
            stack.pop()
            continue
        pending, subst = node
        if not pending:
            yield {name: resolve(Var(name), subst) for name in qvars}
            continue
        if len(stack) >= limits.max_depth:
            raise BudgetExceeded(f"depth budget of {limits.max_depth} exhausted")
        stack.append(expand(pending, subst))
