"""Parser for the textual clause syntax.

Grammar:

    program    := clause*
    clause     := struct ( ':-' goal (',' goal)* )? '.'
    goal       := term OP term | struct | OP '(' term ',' ... ')'
    term       := atom | number | variable | struct
    struct     := name '(' term (',' term)* ')'

``%`` starts a comment running to end of line. OP is one of the six
comparison built-ins; the prefix form OP '(' ... ')' must carry exactly
two arguments. Errors report 1-based line and column.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .terms import (
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
    _check_ground_fact,
)

_OPS_BY_LENGTH = ("=:=", ">=", "=<", ">", "<", "=")


class ProgramSyntaxError(LogicError):
    """Malformed clause text, with position information."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # NAME VAR NUMBER OP LPAREN RPAREN COMMA DOT IMPLIES EOF
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch == ":" and text[i : i + 2] == ":-":
            tokens.append(Token("IMPLIES", ":-", start_line, start_col))
            i += 2
            col += 2
            continue
        op = next((o for o in _OPS_BY_LENGTH if text.startswith(o, i)), None)
        if op is not None:
            tokens.append(Token("OP", op, start_line, start_col))
            i += len(op)
            col += len(op)
            continue
        if ch == "(":
            tokens.append(Token("LPAREN", ch, start_line, start_col))
            i += 1
            col += 1
            continue
        if ch == ")":
            tokens.append(Token("RPAREN", ch, start_line, start_col))
            i += 1
            col += 1
            continue
        if ch == ",":
            tokens.append(Token("COMMA", ch, start_line, start_col))
            i += 1
            col += 1
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            is_float = False
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                is_float = True
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
            if j < n and text[j] in "eE":
                k = j + 1
                if k < n and text[k] in "+-":
                    k += 1
                if k < n and text[k].isdigit():
                    is_float = True
                    j = k + 1
                    while j < n and text[j].isdigit():
                        j += 1
            lit = text[i:j]
            kind = "FLOAT" if is_float else "INT"
            tokens.append(Token(kind, lit, start_line, start_col))
            col += j - i
            i = j
            continue
        if ch == ".":
            tokens.append(Token("DOT", ch, start_line, start_col))
            i += 1
            col += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word[0].islower():
                kind = "NAME"
            elif word[0].isupper() or word[0] == "_":
                kind = "VAR"
            else:
                raise ProgramSyntaxError(f"unexpected character {ch!r}", start_line, start_col)
            tokens.append(Token(kind, word, start_line, start_col))
            col += j - i
            i = j
            continue
        raise ProgramSyntaxError(f"unexpected character {ch!r}", start_line, start_col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


class _Stream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ProgramSyntaxError(
                f"expected {what}, found {tok.text!r}" if tok.text else f"expected {what}, found end of input",
                tok.line,
                tok.column,
            )
        return self.next()


def _parse_number(tok: Token) -> Num:
    if tok.kind == "INT":
        return Num(int(tok.text))
    value = float(tok.text)
    if not math.isfinite(value):
        raise ProgramSyntaxError(f"number out of range: {tok.text}", tok.line, tok.column)
    return Num(value)


def _parse_term(s: _Stream) -> Term:
    tok = s.peek()
    if tok.kind == "NAME":
        s.next()
        if s.peek().kind == "LPAREN":
            return _parse_struct_args(s, tok)
        return Atom(tok.text)
    if tok.kind == "VAR":
        s.next()
        return Var(tok.text)
    if tok.kind in ("INT", "FLOAT"):
        s.next()
        return _parse_number(tok)
    raise ProgramSyntaxError(
        f"expected a term, found {tok.text!r}" if tok.text else "expected a term, found end of input",
        tok.line,
        tok.column,
    )


def _parse_struct_args(s: _Stream, name_tok: Token) -> Struct:
    s.expect("LPAREN", "'('")
    args = [_parse_term(s)]
    while s.peek().kind == "COMMA":
        s.next()
        args.append(_parse_term(s))
    s.expect("RPAREN", "')'")
    if name_tok.kind == "OP" and len(args) != 2:
        raise ArityError(
            f"line {name_tok.line}, column {name_tok.column}: "
            f"comparison {name_tok.text!r} takes 2 arguments, got {len(args)}"
        )
    return Struct(name_tok.text, tuple(args))


def _parse_goal(s: _Stream) -> Struct:
    tok = s.peek()
    if tok.kind == "OP":
        s.next()
        return _parse_struct_args(s, tok)
    left = _parse_term(s)
    nxt = s.peek()
    if nxt.kind == "OP":
        s.next()
        right = _parse_term(s)
        return Struct(nxt.text, (left, right))
    if isinstance(left, Struct):
        return left
    raise ProgramSyntaxError(
        f"expected a predicate or comparison goal near {tok.text!r}", tok.line, tok.column
    )


def _parse_clause(s: _Stream) -> Clause:
    head_tok = s.expect("NAME", "a predicate name")
    head = _parse_struct_args(s, head_tok)
    tok = s.peek()
    if tok.kind == "DOT":
        s.next()
        clause = Clause(head)
        try:
            _check_ground_fact(clause)
        except NonGroundFact as exc:
            raise NonGroundFact(
                f"line {head_tok.line}, column {head_tok.column}: {exc}"
            ) from None
        return clause
    if tok.kind == "IMPLIES":
        s.next()
        goals = [_parse_goal(s)]
        while s.peek().kind == "COMMA":
            s.next()
            goals.append(_parse_goal(s))
        s.expect("DOT", "'.'")
        return Clause(head, tuple(goals))
    raise ProgramSyntaxError(
        f"expected '.' or ':-', found {tok.text!r}" if tok.text else "expected '.' or ':-', found end of input",
        tok.line,
        tok.column,
    )


def parse_program(text: str) -> Program:
    """Parse clause text into a Program. Facts must be ground."""
    s = _Stream(tokenize(text))
    clauses: list[Clause] = []
    while s.peek().kind != "EOF":
        clauses.append(_parse_clause(s))
    return Program(tuple(clauses))


def parse_goals(text: str) -> list[Struct]:
    """Parse a comma-separated goal list (no trailing dot). Test helper
    and REPL convenience."""
    s = _Stream(tokenize(text))
    goals = [_parse_goal(s)]
    while s.peek().kind == "COMMA":
        s.next()
        goals.append(_parse_goal(s))
    tok = s.peek()
    if tok.kind == "DOT":
        s.next()
        tok = s.peek()
    if tok.kind != "EOF":
        raise ProgramSyntaxError(f"unexpected trailing input {tok.text!r}", tok.line, tok.column)
    return goals
