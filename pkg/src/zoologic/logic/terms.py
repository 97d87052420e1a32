"""Term algebra, clauses, and clause programs for the Horn-clause engine.

Terms are immutable. A Program is an immutable ordered collection of
clauses indexed by (functor, arity); adding a fact produces a new Program.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Union

ATOM_NAME = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")
VAR_NAME = re.compile(r"[A-Z_][a-zA-Z0-9_]*\Z")

# Comparison built-ins usable as goals. "=" is unification; the rest are
# arithmetic and require both sides to be numbers at evaluation time.
COMPARISON_OPS = (">=", ">", "=<", "<", "=:=", "=")


class LogicError(Exception):
    """Base class for all engine errors."""


class ArityError(LogicError):
    """A comparison built-in was used with an arity other than 2."""


class NonGroundFact(LogicError):
    """A bodyless clause contained an unbound variable."""


@dataclass(frozen=True)
class Atom:
    """A constant symbol, e.g. ``zebra``."""

    name: str

    def __post_init__(self) -> None:
        if not ATOM_NAME.match(self.name):
            raise ValueError(f"invalid atom name: {self.name!r}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Num:
    """A finite numeric constant. Ints stay exact; floats print via repr."""

    value: Union[int, float]

    def __post_init__(self) -> None:
        if isinstance(self.value, bool) or not isinstance(self.value, (int, float)):
            raise ValueError(f"not a number: {self.value!r}")
        if not math.isfinite(self.value):
            raise ValueError(f"number must be finite: {self.value!r}")

    def __str__(self) -> str:
        return repr(self.value) if isinstance(self.value, float) else str(self.value)


@dataclass(frozen=True)
class Var:
    """A logic variable. Names starting with ``_R`` are reserved for
    clause renaming inside the solver."""

    name: str

    def __post_init__(self) -> None:
        if not VAR_NAME.match(self.name):
            raise ValueError(f"invalid variable name: {self.name!r}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Struct:
    """A compound term ``functor(arg1, ..., argN)`` with arity >= 1.

    Comparison operators are represented as Structs whose functor is the
    operator; those must have exactly two arguments.
    """

    functor: str
    args: tuple

    def __post_init__(self) -> None:
        if not self.args:
            raise ValueError(f"compound term needs at least one argument: {self.functor}")
        if self.functor in COMPARISON_OPS:
            if len(self.args) != 2:
                raise ArityError(
                    f"comparison {self.functor!r} takes 2 arguments, got {len(self.args)}"
                )
        elif not ATOM_NAME.match(self.functor):
            raise ValueError(f"invalid functor: {self.functor!r}")

    def __str__(self) -> str:
        if self.functor in COMPARISON_OPS:
            return f"{self.args[0]} {self.functor} {self.args[1]}"
        return f"{self.functor}({', '.join(str(a) for a in self.args)})"


Term = Union[Atom, Num, Var, Struct]


def term_variables(term: Term) -> tuple[str, ...]:
    """Variable names in a term, in first-occurrence order."""
    out: list[str] = []
    seen: set[str] = set()
    stack = [term]
    while stack:
        t = stack.pop(0)
        if isinstance(t, Var):
            if t.name not in seen:
                seen.add(t.name)
                out.append(t.name)
        elif isinstance(t, Struct):
            stack[0:0] = list(t.args)
    return tuple(out)


@dataclass(frozen=True)
class Clause:
    """A Horn clause ``head :- body``. An empty body makes it a fact."""

    head: Struct
    body: tuple = ()
    variables: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.head.functor in COMPARISON_OPS:
            raise ValueError("a comparison cannot be a clause head")
        names: list[str] = []
        seen: set[str] = set()
        for term in (self.head, *self.body):
            for name in term_variables(term):
                if name not in seen:
                    seen.add(name)
                    names.append(name)
        object.__setattr__(self, "variables", tuple(names))

    @property
    def is_fact(self) -> bool:
        return not self.body

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(str(g) for g in self.body)}."


def _check_ground_fact(clause: Clause) -> None:
    if clause.is_fact and clause.variables:
        raise NonGroundFact(f"fact contains variables {clause.variables}: {clause}")


@dataclass(frozen=True)
class Program:
    """An ordered clause collection indexed by (functor, arity).

    Insertion order is preserved per predicate and drives the solver's
    clause selection order. Facts must be ground. A second index keyed
    by a ground atom in first-argument position lets the solver skip
    clauses that could never unify; candidate order still follows the
    program text.
    """

    clauses: tuple = ()
    _index: dict = field(init=False, repr=False, compare=False)
    _arg_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        index: dict[tuple[str, int], list[Clause]] = {}
        arg_index: dict[tuple[str, int], tuple[dict, list]] = {}
        for clause in self.clauses:
            _check_ground_fact(clause)
            key = (clause.head.functor, len(clause.head.args))
            index.setdefault(key, []).append(clause)
            buckets, fallback = arg_index.setdefault(key, ({}, []))
            first = clause.head.args[0]
            if isinstance(first, Atom):
                if first.name not in buckets:
                    buckets[first.name] = list(fallback)
                buckets[first.name].append(clause)
            else:
                # Var (or any non-atom) first argument: could match any
                # goal, so it belongs to every bucket.
                fallback.append(clause)
                for bucket in buckets.values():
                    bucket.append(clause)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_arg_index", arg_index)

    def clauses_for(self, functor: str, arity: int):
        """Clauses defining functor/arity, or None if undefined."""
        return self._index.get((functor, arity))

    def candidates(self, functor: str, arity: int, first_atom=None):
        """Clauses worth trying against a goal, or None if undefined.

        With a ground atom in the goal's first argument, clauses whose
        first head argument is a different constant are filtered out;
        the result can be empty when nothing could match.
        """
        key = (functor, arity)
        if first_atom is None:
            return self._index.get(key)
        entry = self._arg_index.get(key)
        if entry is None:
            return None
        buckets, fallback = entry
        return buckets.get(first_atom, fallback)

    def defines(self, functor: str, arity: int) -> bool:
        return (functor, arity) in self._index

    def predicates(self) -> tuple:
        return tuple(self._index.keys())

    def __len__(self) -> int:
        return len(self.clauses)


def assert_fact(program: Program, fact: Clause) -> Program:
    """Extend a program with one ground fact, preserving order."""
    if not fact.is_fact:
        raise ValueError(f"not a fact: {fact}")
    _check_ground_fact(fact)
    return Program(program.clauses + (fact,))


def extend(program: Program, clauses: Iterable[Clause]) -> Program:
    """Extend a program with many clauses in one indexing pass."""
    return Program(program.clauses + tuple(clauses))


def format_term(term: Term) -> str:
    return str(term)


def format_clause(clause: Clause) -> str:
    return str(clause)


def format_program(program: Program) -> str:
    """One clause per line; output re-parses to an equal program."""
    return "".join(f"{clause}\n" for clause in program.clauses)
