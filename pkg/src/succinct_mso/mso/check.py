"""Brute-force model checking.

First-order variables become tensor axes: every subformula evaluates to a
boolean array with one axis of length n per vertex variable in scope, so a
vertex quantifier is a reduction along its axis.  Set quantifiers enumerate
all subsets in binary-counter order.  This is exhaustive semantics, just
evaluated a whole axis at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..structures import ColoredGraph, R2Graph
from .syntax import (
    And, Arc, Bottom, ColorIs, Eq, ExistsS, ExistsV, ForallS, ForallV, Formula,
    Iff, Implies, InSet, Not, Or, Top, Unary, free_variables, has_set_quantifier,
)


class OpenFormulaError(ValueError):
    pass


class SizeGuardError(RuntimeError):
    pass


@dataclass(frozen=True)
class SizeGuard:
    set_vertices: int = 8
    fo_vertices: int = 64

    def check(self, n: int, uses_sets: bool):
        limit = self.set_vertices if uses_sets else self.fo_vertices
        if n > limit:
            kind = "with" if uses_sets else "without"
            raise SizeGuardError(
                f"graph has {n} vertices; guard for formulas {kind} set "
                f"quantifiers is {limit}"
            )


DEFAULT_GUARD = SizeGuard()
RELAXED_GUARD = SizeGuard(set_vertices=10, fo_vertices=1024)


class _Compiled:
    """Formula with each vertex binder mapped to its own axis."""

    def __init__(self, f: Formula):
        self.axes = 0
        self.tree = self._walk(f, {})

    def _walk(self, f, env):
        if isinstance(f, (ExistsV, ForallV)):
            ax = self.axes
            self.axes += 1
            body = self._walk(f.body, {**env, f.var: ("v", ax)})
            return (type(f), ax, body)
        if isinstance(f, (ExistsS, ForallS)):
            body = self._walk(f.body, {**env, f.var: ("s", id(f))})
            return (type(f), id(f), body)
        if isinstance(f, Not):
            return (Not, self._walk(f.body, env))
        if isinstance(f, (And, Or, Implies, Iff)):
            return (type(f), self._walk(f.left, env), self._walk(f.right, env))
        if isinstance(f, (Top, Bottom)):
            return (type(f),)
        if isinstance(f, Eq):
            return (Eq, env[f.x][1], env[f.y][1])
        if isinstance(f, Arc):
            return (Arc, f.sym, env[f.x][1], env[f.y][1])
        if isinstance(f, InSet):
            return (InSet, env[f.x][1], env[f.X][1])
        if isinstance(f, Unary):
            return (Unary, f.sym, env[f.x][1])
        if isinstance(f, ColorIs):
            return (ColorIs, f.color, env[f.x][1])
        raise TypeError(f"not a formula: {f!r}")


class _Evaluator:
    def __init__(self, g: R2Graph | ColoredGraph, axes: int):
        if isinstance(g, ColoredGraph):
            self.colors = np.asarray(g.coloring, dtype=np.int64)
            g = g.graph
        else:
            self.colors = None
        self.g = g
        self.n = n = g.n
        self.D = max(axes, 1)
        self.adj = {}
        for s in g.arc_symbols:
            m = np.zeros((n, n), dtype=bool)
            self.adj[s] = m
        for s, u, v in g.arcs:
            self.adj[s][u, v] = True
        self.unary = {}
        for s in g.unary_symbols:
            vec = np.zeros(n, dtype=bool)
            self.unary[s] = vec
        for s, v in g.unary:
            self.unary[s][v] = True
        self.eye = np.eye(n, dtype=bool)

    def shape(self, *axes):
        shp = [1] * self.D
        for a in axes:
            shp[a] = self.n
        return shp

    def vec(self, ax, v):
        return v.reshape(self.shape(ax))

    def mat(self, a, b, m):
        if a == b:
            return self.vec(a, np.diagonal(m).copy())
        if a < b:
            return m.reshape(self.shape(a, b))
        return m.T.reshape(self.shape(a, b))

    def const(self, value: bool):
        return np.full([1] * self.D, value, dtype=bool)

    def ev(self, t, sets):
        op = t[0]
        if op is ExistsV or op is ForallV:
            ax = t[1]
            arr = self.ev(t[2], sets)
            shp = list(arr.shape)
            shp[ax] = self.n
            arr = np.broadcast_to(arr, shp)
            if op is ExistsV:
                return arr.any(axis=ax, keepdims=True)
            return arr.all(axis=ax, keepdims=True)
        if op is ExistsS or op is ForallS:
            want = op is ExistsS
            acc = None
            for mask in range(1 << self.n):
                member = np.array([(mask >> i) & 1 for i in range(self.n)], dtype=bool)
                r = self.ev(t[2], {**sets, t[1]: member})
                if acc is None:
                    acc = r
                else:
                    acc = (acc | r) if want else (acc & r)
                if acc.size == 1 and bool(acc.flat[0]) == want:
                    break
            if acc is None:  # unreachable: the empty set always exists
                return self.const(not want)
            return acc
        if op is Not:
            return ~self.ev(t[1], sets)
        if op is And:
            left = self.ev(t[1], sets)
            if left.size == 1 and not left.flat[0]:
                return left
            return left & self.ev(t[2], sets)
        if op is Or:
            left = self.ev(t[1], sets)
            if left.size == 1 and left.flat[0]:
                return left
            return left | self.ev(t[2], sets)
        if op is Implies:
            return ~self.ev(t[1], sets) | self.ev(t[2], sets)
        if op is Iff:
            return self.ev(t[1], sets) == self.ev(t[2], sets)
        if op is Top:
            return self.const(True)
        if op is Bottom:
            return self.const(False)
        if op is Eq:
            return self.mat(t[1], t[2], self.eye)
        if op is Arc:
            return self.mat(t[2], t[3], self.adj[t[1]])
        if op is InSet:
            return self.vec(t[1], sets[t[2]])
        if op is Unary:
            return self.vec(t[2], self.unary[t[1]])
        if op is ColorIs:
            if self.colors is None:
                raise ValueError("color atoms need a colored graph")
            return self.vec(t[2], self.colors == t[1])
        raise TypeError(op)


_COMPILED: dict = {}


def _compile(f: Formula) -> _Compiled:
    c = _COMPILED.get(f)
    if c is None:
        c = _COMPILED[f] = _Compiled(f)
    return c


def models(g: R2Graph | ColoredGraph, f: Formula, guard: SizeGuard = DEFAULT_GUARD) -> bool:
    """Truth of the closed formula f in g, by exhaustive expansion."""
    free = free_variables(f)
    if free:
        raise OpenFormulaError(f"formula has free variables {sorted(free)}")
    graph = g.graph if isinstance(g, ColoredGraph) else g
    guard.check(graph.n, has_set_quantifier(f))
    comp = _compile(f)
    for sym in _arc_symbols(f):
        if sym not in graph.arc_symbols:
            raise ValueError(f"formula uses arc symbol {sym!r} absent from the graph signature")
    res = _Evaluator(g, comp.axes).ev(comp.tree, {})
    return bool(res.reshape(-1)[0])


def _arc_symbols(f: Formula):
    from .syntax import symbols_used
    return symbols_used(f)[0]


def spectrum_sample(f: Formula, graphs: Iterable[R2Graph], bound: int | None = None,
                    guard: SizeGuard = DEFAULT_GUARD) -> set[int]:
    """Sizes of the models of f among the generated graphs (at most ``bound``)."""
    out = set()
    for g in graphs:
        if bound is not None and g.n > bound:
            continue
        if g.n not in out and models(g, f, guard):
            out.add(g.n)
    return out


@dataclass(frozen=True)
class PairReport:
    models: int
    counter_models: int
    shared_sizes: frozenset

    def line(self) -> str:
        return (f"models={self.models} counter_models={self.counter_models} "
                f"shared_sizes={sorted(self.shared_sizes)}")


def classify_pair(psi: Formula, chi: Formula, universe: Iterable[R2Graph],
                  guard: SizeGuard = DEFAULT_GUARD) -> PairReport:
    pos, neg = 0, 0
    pos_sizes, neg_sizes = set(), set()
    for g in universe:
        if not models(g, chi, guard):
            continue
        if models(g, psi, guard):
            pos += 1
            pos_sizes.add(g.n)
        else:
            neg += 1
            neg_sizes.add(g.n)
    return PairReport(pos, neg, frozenset(pos_sizes & neg_sizes))
