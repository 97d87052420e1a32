"""Answers parsed questions against a grounded knowledge base.

Each task becomes a fixed query shape over the KB (counts from
``animal/2``, existence through the ``animal_exists/2`` rule, boxes from
``animal_bbox/5``) and every answered class carries a proof trace.
Failure is an answer here, not an error: a class with no facts counts 0,
does not exist, and occupies no boxes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple, Union

from .grounding import SymbolicKB
from .language import ParsedQuery
from .logic import (
    Atom,
    Struct,
    UnknownPredicate,
    Var,
    query_variables,
    resolve,
    solve,
    unify,
)

# Failed queries trace the clause heads they were tried against; cap the
# list so a miss on a huge KB cannot bloat the answer payload.
FAILURE_TRACE_CAP = 20

Box = Tuple[float, float, float, float]
ResultValue = Union[int, bool, List[Box]]


class ReasonerError(Exception):
    """Base class for answer-time errors."""


class NoEntities(ReasonerError):
    """The question mentioned no animal class the lexicon knows."""


class InternalTaskError(ReasonerError):
    """Task flags were not one-hot; the parser upstream is broken."""


@dataclass(frozen=True)
class TraceStep:
    """One consulted clause: the goal asked, what happened, and the head
    of the fact or rule involved (empty when the predicate has no
    clauses at all)."""

    goal: str
    outcome: str
    clause: str


@dataclass(frozen=True)
class Answer:
    task: str
    per_class: Dict[str, ResultValue]
    trace: Tuple[TraceStep, ...]

    @property
    def entities(self) -> List[str]:
        return list(self.per_class.keys())


def _bindings_text(names, solution) -> str:
    if not names:
        return "success"
    pairs = ", ".join(f"{name}={solution[name]}" for name in names)
    return f"success: {pairs}"


def _run_goal(kb: SymbolicKB, goal: Struct):
    """Solve one goal, producing (solutions, trace steps).

    An undefined predicate means the KB simply holds nothing of that
    shape (empty images ground to rules-only programs), so it is
    reported as a plain failure step rather than an error.
    """
    try:
        solutions = list(solve(kb.program, (goal,)))
    except UnknownPredicate:
        return [], [TraceStep(goal=str(goal), outcome="failure", clause="")]
    arity = len(goal.args)
    clauses = kb.program.clauses_for(goal.functor, arity) or []
    steps: List[TraceStep] = []
    if solutions:
        first = goal.args[0]
        candidates = kb.program.candidates(
            goal.functor, arity, first.name if isinstance(first, Atom) else None
        )
        # A solved fact goal resolves to the fact itself, so most clause
        # references are one dict hit; only rule-derived solutions fall
        # back to scanning heads with unification.
        ground_heads = {c.head: c for c in candidates if not c.variables}
        goal_text = str(goal)
        names = query_variables((goal,))
        for sol in solutions:
            resolved = resolve(goal, sol)
            hit = ground_heads.get(resolved)
            if hit is not None:
                clause_ref = str(hit.head)
            else:
                clause_ref = ""
                for clause in candidates:
                    if unify(resolved, clause.head) is not None:
                        clause_ref = str(clause.head)
                        break
            steps.append(
                TraceStep(goal=goal_text, outcome=_bindings_text(names, sol), clause=clause_ref)
            )
    else:
        for clause in clauses[:FAILURE_TRACE_CAP]:
            steps.append(TraceStep(goal=str(goal), outcome="failure", clause=str(clause.head)))
        if not clauses:
            steps.append(TraceStep(goal=str(goal), outcome="failure", clause=""))
    return solutions, steps


def _require_entities(entities: Sequence[str]) -> List[str]:
    out = list(entities)
    if not out:
        raise NoEntities("the question mentions no known animal class")
    return out


def answer_count(kb: SymbolicKB, entities: Sequence[str]) -> Answer:
    """How many of each class: the count fact's value, or 0."""
    per_class: Dict[str, ResultValue] = {}
    trace: List[TraceStep] = []
    for label in _require_entities(entities):
        goal = Struct("animal", (Atom(label), Var("C")))
        solutions, steps = _run_goal(kb, goal)
        per_class[label] = solutions[0]["C"].value if solutions else 0
        trace.extend(steps)
    return Answer("counting", per_class, tuple(trace))


def answer_exists(kb: SymbolicKB, entities: Sequence[str]) -> Answer:
    """Whether each class is present, via the existence rule."""
    per_class: Dict[str, ResultValue] = {}
    trace: List[TraceStep] = []
    for label in _require_entities(entities):
        goal = Struct("animal_exists", (Atom(label), Var("C")))
        solutions, steps = _run_goal(kb, goal)
        per_class[label] = bool(solutions)
        trace.extend(steps)
    return Answer("existence", per_class, tuple(trace))


def answer_location(kb: SymbolicKB, entities: Sequence[str]) -> Answer:
    """All boxes per class, in assertion order; empty list when absent."""
    per_class: Dict[str, ResultValue] = {}
    trace: List[TraceStep] = []
    for label in _require_entities(entities):
        goal = Struct(
            "animal_bbox",
            (Atom(label), Var("X1"), Var("Y1"), Var("X2"), Var("Y2")),
        )
        solutions, steps = _run_goal(kb, goal)
        per_class[label] = [
            (s["X1"].value, s["Y1"].value, s["X2"].value, s["Y2"].value) for s in solutions
        ]
        trace.extend(steps)
    return Answer("location", per_class, tuple(trace))


_DISPATCH = {
    "counting": answer_count,
    "existence": answer_exists,
    "location": answer_location,
}


def answer(kb: SymbolicKB, query: ParsedQuery) -> Answer:
    """Dispatch on the (one-hot) task flags."""
    active = query.task.active()
    if len(active) != 1 or active[0] not in _DISPATCH:
        raise InternalTaskError(f"task flags are not one-hot: {active}")
    return _DISPATCH[active[0]](kb, query.entities)


def answer_payload(ans: Answer) -> Dict[str, object]:
    """Answer as plain JSON-ready data."""
    results: Dict[str, object] = {}
    for label, value in ans.per_class.items():
        if isinstance(value, list):
            results[label] = [list(box) for box in value]
        else:
            results[label] = value
    return {
        "task": ans.task,
        "entities": ans.entities,
        "results": results,
        "trace": [
            {"goal": s.goal, "outcome": s.outcome, "clause": s.clause} for s in ans.trace
        ],
    }


def canonical_json(payload) -> str:
    """The one JSON serialization used everywhere answers travel:
    sorted keys, compact separators. Byte-stable for equal payloads."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def answer_json(ans: Answer) -> str:
    return canonical_json(answer_payload(ans))
