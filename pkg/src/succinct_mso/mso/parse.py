"""Recursive-descent parser for the formula text syntax.

Grammar (lowest to highest precedence)::

    formula  := quant | iff
    quant    := ('exists'|'forall'|'existsS'|'forallS') NAME '.' formula
    iff      := implies ('<=>' implies)*
    implies  := or ('=>' implies)?
    or       := and ('|' and)*
    and      := unary ('&' unary)*
    unary    := '!' unary | quant | atom | '(' formula ')'
    atom     := 'true' | 'false' | NAME '=' NAME | NAME 'in' NAME
              | 'arc(' SYM ',' NAME ',' NAME ')' | 'pred(' SYM ',' NAME ')'
              | 'color(' INT ',' NAME ')'
"""

from __future__ import annotations

import re

from ..structures import Signature
from .syntax import (
    And, Arc, Bottom, ColorIs, Eq, ExistsS, ExistsV, ForallS, ForallV, Formula,
    Iff, Implies, InSet, Not, Or, Top, Unary,
)

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_QUANT = {"exists": ExistsV, "forall": ForallV, "existsS": ExistsS, "forallS": ForallS}
_KEYWORDS = set(_QUANT) | {"in", "true", "false", "arc", "pred", "color"}


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class UnknownSymbolError(ValueError):
    pass


class UnboundVariableError(ValueError):
    pass


class _Parser:
    def __init__(self, text: str, signature: Signature | None):
        self.text = text
        self.pos = 0
        self.sig = signature
        self.scope: list[tuple[str, str]] = []  # (name, 'v' | 's')

    # -- lexing helpers
    def ws(self):
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch.isspace():
                self.pos += 1
            elif ch == "#":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self.pos += 1
            else:
                break

    def peek(self, s: str) -> bool:
        self.ws()
        return self.text.startswith(s, self.pos)

    def peek_word(self, word: str) -> bool:
        self.ws()
        m = _NAME.match(self.text, self.pos)
        return bool(m) and m.group() == word

    def expect(self, s: str):
        if not self.peek(s):
            self.fail(f"expected {s!r}")
        self.pos += len(s)

    def name(self) -> str:
        self.ws()
        m = _NAME.match(self.text, self.pos)
        if not m or m.group() in _KEYWORDS:
            self.fail("expected a variable name")
        self.pos = m.end()
        return m.group()

    def raw_arg(self) -> str:
        self.ws()
        end = self.text.find(",", self.pos)
        if end < 0:
            self.fail("expected ','")
        arg = self.text[self.pos:end].strip()
        if not arg:
            self.fail("empty symbol")
        self.pos = end
        return arg

    def fail(self, msg: str):
        raise FormulaSyntaxError(msg, self.pos)

    # -- scoping
    def kind_of(self, name: str) -> str:
        for n, k in reversed(self.scope):
            if n == name:
                return k
        raise UnboundVariableError(f"unbound variable {name!r}")

    def vertex_var(self, name: str) -> str:
        if self.kind_of(name) != "v":
            raise FormulaSyntaxError(f"{name!r} is a set variable, expected a vertex", self.pos)
        return name

    # -- grammar
    def formula(self) -> Formula:
        self.ws()
        for word, cls in _QUANT.items():
            if self.peek_word(word):
                return self.quant(word, cls)
        return self.iff()

    def quant(self, word, cls) -> Formula:
        self.pos += len(word)
        var = self.name()
        self.expect(".")
        self.scope.append((var, "s" if cls in (ExistsS, ForallS) else "v"))
        try:
            body = self.formula()
        finally:
            self.scope.pop()
        return cls(var, body)

    def iff(self) -> Formula:
        left = self.implies()
        while self.peek("<=>"):
            self.pos += 3
            left = Iff(left, self.implies())
        return left

    def implies(self) -> Formula:
        left = self.or_()
        if self.peek("=>"):
            self.pos += 2
            return Implies(left, self.implies_rhs())
        return left

    def implies_rhs(self) -> Formula:
        self.ws()
        for word, cls in _QUANT.items():
            if self.peek_word(word):
                return self.quant(word, cls)
        return self.implies()

    def or_(self) -> Formula:
        left = self.and_()
        while self.peek("|"):
            self.pos += 1
            left = Or(left, self.and_())
        return left

    def and_(self) -> Formula:
        left = self.unary()
        while self.peek("&"):
            self.pos += 1
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        self.ws()
        if self.peek("!"):
            self.pos += 1
            return Not(self.unary())
        for word, cls in _QUANT.items():
            if self.peek_word(word):
                return self.quant(word, cls)
        if self.peek("("):
            self.pos += 1
            f = self.formula()
            self.expect(")")
            return f
        return self.atom()

    def atom(self) -> Formula:
        self.ws()
        start = self.pos
        if self.peek_word("true"):
            self.pos += 4
            return Top()
        if self.peek_word("false"):
            self.pos += 5
            return Bottom()
        if self.peek_word("arc"):
            self.pos += 3
            self.expect("(")
            sym = self.raw_arg()
            self.expect(",")
            x = self.vertex_var(self.name())
            self.expect(",")
            y = self.vertex_var(self.name())
            self.expect(")")
            if self.sig is not None and sym not in self.sig.arc_symbols:
                raise UnknownSymbolError(f"unknown arc symbol {sym!r}")
            return Arc(sym, x, y)
        if self.peek_word("pred"):
            self.pos += 4
            self.expect("(")
            sym = self.raw_arg()
            self.expect(",")
            x = self.vertex_var(self.name())
            self.expect(")")
            if self.sig is not None and sym not in self.sig.unary_symbols:
                raise UnknownSymbolError(f"unknown unary symbol {sym!r}")
            return Unary(sym, x)
        if self.peek_word("color"):
            self.pos += 5
            self.expect("(")
            raw = self.raw_arg()
            if not raw.isdigit():
                self.fail("color must be a non-negative integer")
            self.expect(",")
            x = self.vertex_var(self.name())
            self.expect(")")
            c = int(raw)
            if self.sig is not None and c >= self.sig.num_colors:
                raise UnknownSymbolError(f"color {c} outside [0, {self.sig.num_colors})")
            return ColorIs(c, x)
        x = self.name()
        if self.peek("=") and not self.peek("=>"):
            self.pos += 1
            y = self.name()
            return Eq(self.vertex_var(x), self.vertex_var(y))
        if self.peek_word("in"):
            self.pos += 2
            X = self.name()
            self.vertex_var(x)
            if self.kind_of(X) != "s":
                raise FormulaSyntaxError(f"{X!r} is not a set variable", self.pos)
            return InSet(x, X)
        self.pos = start
        self.fail("expected an atom")


def parse(text: str, signature: Signature | None = None) -> Formula:
    p = _Parser(text, signature)
    f = p.formula()
    p.ws()
    if p.pos != len(text):
        p.fail("unexpected trailing input")
    return f
