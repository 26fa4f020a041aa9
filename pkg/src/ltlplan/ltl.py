"""LTL formulas: abstract syntax, parser, printer and negation normal form.

Concrete syntax (ASCII)::

    true  false  p  !f  X f  F f  G f  f U g  f R g  f && g  f || g  f -> g

Precedence from tightest to loosest: unary operators, ``U``/``R``
(right-associative), ``&&``, ``||``, ``->`` (right-associative).
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __str__(self):
        return to_text(self)

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True, repr=False)
class TrueConst(Formula):
    def __repr__(self):
        return "True"


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class Next(Formula):
    operand: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    operand: Formula


@dataclass(frozen=True)
class Always(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula


TRUE = TrueConst()
# canonical false: there is no dedicated node
FALSE = Not(TRUE)

UNARY = (Not, Next, Eventually, Always)
BINARY = (And, Or, Implies, Until, Release)
SUGAR = (Implies, Eventually, Always)

KEYWORDS = frozenset({"true", "false", "X", "U", "R", "F", "G"})
IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def is_false(f: Formula) -> bool:
    return isinstance(f, Not) and isinstance(f.operand, TrueConst)


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, UNARY):
        return (f.operand,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return ()


def subformulas(f: Formula) -> list[Formula]:
    """All distinct subformulas, children before parents."""
    seen: dict[Formula, None] = {}

    def walk(g):
        if g in seen:
            return
        for c in children(g):
            walk(c)
        seen[g] = None

    walk(f)
    return list(seen)


def atoms_of(f: Formula) -> frozenset[str]:
    """Names of the atomic propositions occurring in ``f``."""
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Atom))


def depth(f: Formula) -> int:
    """Operator nesting depth; constants and atoms have depth 0."""
    cs = children(f)
    if not cs:
        return 0
    return 1 + max(depth(c) for c in cs)


# ---------------------------------------------------------------------------
# printing

_BINOP_TEXT = {And: "&&", Or: "||", Implies: "->", Until: "U", Release: "R"}
_UNOP_TEXT = {Not: "!", Next: "X ", Eventually: "F ", Always: "G "}


def to_text(f: Formula) -> str:
    """Render ``f`` in the concrete syntax; binary nodes are parenthesized."""
    if isinstance(f, TrueConst):
        return "true"
    if is_false(f):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, UNARY):
        return _UNOP_TEXT[type(f)] + to_text(f.operand)
    if isinstance(f, BINARY):
        return f"({to_text(f.left)} {_BINOP_TEXT[type(f)]} {to_text(f.right)})"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# parsing


class LTLSyntaxError(ValueError):
    """Malformed formula text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<op>&&|\|\||->|!|\(|\))|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise LTLSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        value = m.group()
        if kind == "ws":
            for i, ch in enumerate(value):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        else:
            tokens.append((value, line, pos - line_start + 1))
        pos = m.end()
    tokens.append(("<end>", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i][0]

    def fail(self, message):
        _, line, col = self.tokens[self.i]
        raise LTLSyntaxError(message, line, col)

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self):
        if self.tok == "<end>":
            self.fail("empty formula")
        f = self.implication()
        if self.tok == ")":
            self.fail("unbalanced ')'")
        if self.tok != "<end>":
            self.fail(f"unexpected token {self.tok!r}")
        return f

    def implication(self):
        left = self.disjunction()
        if self.tok == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        f = self.conjunction()
        while self.tok == "||":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.temporal()
        while self.tok == "&&":
            self.take()
            f = And(f, self.temporal())
        return f

    def temporal(self):
        left = self.unary()
        if self.tok == "U":
            self.take()
            return Until(left, self.temporal())
        if self.tok == "R":
            self.take()
            return Release(left, self.temporal())
        return left

    def unary(self):
        tok = self.tok
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok in ("X", "F", "G"):
            self.take()
            node = {"X": Next, "F": Eventually, "G": Always}[tok]
            return node(self.unary())
        return self.primary()

    def primary(self):
        tok, line, col = self.tokens[self.i]
        if tok == "(":
            self.take()
            f = self.implication()
            if self.tok != ")":
                if self.tok == "<end>":
                    raise LTLSyntaxError("unbalanced '('", line, col)
                self.fail(f"expected ')' but found {self.tok!r}")
            self.take()
            return f
        if tok == "true":
            self.take()
            return TRUE
        if tok == "false":
            self.take()
            return FALSE
        if tok == "<end>":
            self.fail("unexpected end of formula")
        if tok in KEYWORDS or not IDENT_RE.fullmatch(tok):
            self.fail(f"unexpected token {tok!r}")
        self.take()
        return Atom(tok)


def parse_ltl(text: str) -> Formula:
    """Parse formula text; sugar (``F``, ``G``, ``->``) is kept in the tree.

    >>> parse_ltl("p1 U p2 U p3")
    Until(left=Atom('p1'), right=Until(left=Atom('p2'), right=Atom('p3')))
    """
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# normal form


def to_nnf(f: Formula) -> Formula:
    """Remove sugar and push negations down to atoms.

    Negation survives only directly above an ``Atom`` or above ``true``
    (the canonical ``false``).
    """
    return _nnf(f, False)


def _nnf(f: Formula, neg: bool) -> Formula:
    if isinstance(f, (TrueConst, Atom)):
        return Not(f) if neg else f
    if isinstance(f, Not):
        return _nnf(f.operand, not neg)
    if isinstance(f, Next):
        return Next(_nnf(f.operand, neg))
    if isinstance(f, And):
        cls = Or if neg else And
        return cls(_nnf(f.left, neg), _nnf(f.right, neg))
    if isinstance(f, Or):
        cls = And if neg else Or
        return cls(_nnf(f.left, neg), _nnf(f.right, neg))
    if isinstance(f, Implies):
        if neg:
            return And(_nnf(f.left, False), _nnf(f.right, True))
        return Or(_nnf(f.left, True), _nnf(f.right, False))
    if isinstance(f, Until):
        cls = Release if neg else Until
        return cls(_nnf(f.left, neg), _nnf(f.right, neg))
    if isinstance(f, Release):
        cls = Until if neg else Release
        return cls(_nnf(f.left, neg), _nnf(f.right, neg))
    if isinstance(f, Eventually):
        # F a = true U a ;  !F a = false R !a
        if neg:
            return Release(FALSE, _nnf(f.operand, True))
        return Until(TRUE, _nnf(f.operand, False))
    if isinstance(f, Always):
        # G a = false R a ;  !G a = true U !a
        if neg:
            return Until(TRUE, _nnf(f.operand, True))
        return Release(FALSE, _nnf(f.operand, False))
    raise TypeError(f"not a formula: {f!r}")


def is_nnf(f: Formula) -> bool:
    for g in subformulas(f):
        if isinstance(g, SUGAR):
            return False
        if isinstance(g, Not) and not isinstance(g.operand, (Atom, TrueConst)):
            return False
    return True


def conjuncts(f: Formula) -> list[Formula]:
    """Flatten top-level conjunctions."""
    if isinstance(f, And):
        return conjuncts(f.left) + conjuncts(f.right)
    return [f]
