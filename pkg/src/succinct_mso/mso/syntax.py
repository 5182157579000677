"""MSO formula AST, quantifier rank and the pretty-printer."""

from __future__ import annotations

from dataclasses import dataclass


class Formula:
    __slots__ = ()

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Eq(Formula):
    x: str
    y: str


@dataclass(frozen=True)
class Arc(Formula):
    sym: str
    x: str
    y: str


@dataclass(frozen=True)
class InSet(Formula):
    x: str
    X: str


@dataclass(frozen=True)
class Unary(Formula):
    sym: str
    x: str


@dataclass(frozen=True)
class ColorIs(Formula):
    color: int
    x: str


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


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
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class ExistsV(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ForallV(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ExistsS(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ForallS(Formula):
    var: str
    body: Formula


ATOMS = (Top, Bottom, Eq, Arc, InSet, Unary, ColorIs)
BINARY = (And, Or, Implies, Iff)
VERTEX_QUANTIFIERS = (ExistsV, ForallV)
SET_QUANTIFIERS = (ExistsS, ForallS)
QUANTIFIERS = VERTEX_QUANTIFIERS + SET_QUANTIFIERS


def rank(f: Formula) -> int:
    """Quantifier nesting depth; vertex and set quantifiers count alike."""
    if isinstance(f, QUANTIFIERS):
        return 1 + rank(f.body)
    if isinstance(f, Not):
        return rank(f.body)
    if isinstance(f, BINARY):
        return max(rank(f.left), rank(f.right))
    return 0


def free_variables(f: Formula) -> set[str]:
    if isinstance(f, (Top, Bottom)):
        return set()
    if isinstance(f, (Eq, Arc)):
        return {f.x, f.y}
    if isinstance(f, InSet):
        return {f.x, f.X}
    if isinstance(f, (Unary, ColorIs)):
        return {f.x}
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, BINARY):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, QUANTIFIERS):
        return free_variables(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def has_set_quantifier(f: Formula) -> bool:
    if isinstance(f, SET_QUANTIFIERS):
        return True
    if isinstance(f, (Not,) + VERTEX_QUANTIFIERS):
        return has_set_quantifier(f.body)
    if isinstance(f, BINARY):
        return has_set_quantifier(f.left) or has_set_quantifier(f.right)
    return False


def symbols_used(f: Formula) -> tuple[set, set, set]:
    """(arc symbols, unary symbols, colors) mentioned by f."""
    arcs, unary, colors = set(), set(), set()

    def walk(g):
        if isinstance(g, Arc):
            arcs.add(g.sym)
        elif isinstance(g, Unary):
            unary.add(g.sym)
        elif isinstance(g, ColorIs):
            colors.add(g.color)
        elif isinstance(g, (Not,) + QUANTIFIERS):
            walk(g.body)
        elif isinstance(g, BINARY):
            walk(g.left)
            walk(g.right)

    walk(f)
    return arcs, unary, colors


# -- printing ----------------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_OPS = {Iff: "<=>", Implies: "=>", Or: "|", And: "&"}
_QWORD = {ExistsV: "exists", ForallV: "forall", ExistsS: "existsS", ForallS: "forallS"}


def _prec(f: Formula) -> int:
    if isinstance(f, QUANTIFIERS):
        return 0
    if isinstance(f, BINARY):
        return _PREC[type(f)]
    if isinstance(f, Not):
        return 5
    return 6


def to_text(f: Formula) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Eq):
        return f"{f.x} = {f.y}"
    if isinstance(f, Arc):
        return f"arc({f.sym}, {f.x}, {f.y})"
    if isinstance(f, InSet):
        return f"{f.x} in {f.X}"
    if isinstance(f, Unary):
        return f"pred({f.sym}, {f.x})"
    if isinstance(f, ColorIs):
        return f"color({f.color}, {f.x})"
    if isinstance(f, QUANTIFIERS):
        return f"{_QWORD[type(f)]} {f.var}. {to_text(f.body)}"
    if isinstance(f, Not):
        inner = to_text(f.body)
        return "!" + (f"({inner})" if _prec(f.body) < 5 else inner)
    if isinstance(f, BINARY):
        p = _PREC[type(f)]
        right_assoc = isinstance(f, Implies)
        lp, rp = _prec(f.left), _prec(f.right)
        left = to_text(f.left)
        right = to_text(f.right)
        if lp == 0 or (lp < p or (right_assoc and lp == p)):
            left = f"({left})"
        if rp == 0 or (rp < p or (not right_assoc and rp == p)):
            right = f"({right})"
        return f"{left} {_OPS[type(f)]} {right}"
    raise TypeError(f"not a formula: {f!r}")


def conj(*parts: Formula) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out
