"""Naive reference semantics used by the tests.

Both evaluators here are written straight from the definitions, with no
vectorization, memoization or shared code with the package.
"""

from __future__ import annotations

from itertools import combinations

from succinct_mso.cwd import Const, Join, Marked, Recolor
from succinct_mso.mso.syntax import (
    And, Arc, Bottom, ColorIs, Eq, ExistsS, ExistsV, ForallS, ForallV, Iff, Implies,
    InSet, Not, Or, Top, Unary,
)
from succinct_mso.structures import ColoredGraph


def all_subsets(n):
    for r in range(n + 1):
        for c in combinations(range(n), r):
            yield frozenset(c)


def holds(g, f, env=None) -> bool:
    env = env or {}
    coloring = None
    if isinstance(g, ColoredGraph):
        coloring, g = g.coloring, g.graph
    return _holds(g, coloring, f, env)


def _holds(g, coloring, f, env):
    rec = lambda h, e=env: _holds(g, coloring, h, e)  # noqa: E731
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Eq):
        return env[f.x] == env[f.y]
    if isinstance(f, Arc):
        return (f.sym, env[f.x], env[f.y]) in g.arcs
    if isinstance(f, InSet):
        return env[f.x] in env[f.X]
    if isinstance(f, Unary):
        return (f.sym, env[f.x]) in g.unary
    if isinstance(f, ColorIs):
        return coloring is not None and coloring[env[f.x]] == f.color
    if isinstance(f, Not):
        return not rec(f.body)
    if isinstance(f, And):
        return rec(f.left) and rec(f.right)
    if isinstance(f, Or):
        return rec(f.left) or rec(f.right)
    if isinstance(f, Implies):
        return (not rec(f.left)) or rec(f.right)
    if isinstance(f, Iff):
        return rec(f.left) == rec(f.right)
    if isinstance(f, ExistsV):
        return any(rec(f.body, {**env, f.var: v}) for v in range(g.n))
    if isinstance(f, ForallV):
        return all(rec(f.body, {**env, f.var: v}) for v in range(g.n))
    if isinstance(f, ExistsS):
        return any(rec(f.body, {**env, f.var: s}) for s in all_subsets(g.n))
    if isinstance(f, ForallS):
        return all(rec(f.body, {**env, f.var: s}) for s in all_subsets(g.n))
    raise TypeError(f)


def naive_eval(c):
    """(colors, arcs) of an unmarked decomposition, vertices in left-to-right leaf order."""
    if isinstance(c, Const):
        return [c.color], {(s, 0, 0) for s in c.loops}
    if isinstance(c, Marked):
        raise ValueError("marked")
    if isinstance(c, Recolor):
        cols, arcs = naive_eval(c.child)
        return [c.fmap[x] for x in cols], arcs
    lc, la = naive_eval(c.left)
    rc, ra = naive_eval(c.right)
    off = len(lc)
    arcs = set(la) | {(s, u + off, v + off) for s, u, v in ra}
    for sym, side, a, b in c.M:
        for u, cu in enumerate(lc):
            for v, cv in enumerate(rc):
                if side == "right" and cu == a and cv == b:
                    arcs.add((sym, u, v + off))
                if side == "left" and cv == a and cu == b:
                    arcs.add((sym, v + off, u))
    return lc + rc, arcs


def naive_circuit(c, bits):
    """Evaluate a gate list by recursion on the output gates, no memo."""
    def val(i):
        g = c.gates[i]
        op = g[0]
        if op == "INPUT":
            return bits[g[1]]
        if op == "CONST":
            return g[1]
        if op == "NOT":
            return 1 - val(g[1])
        if op == "AND":
            return val(g[1]) & val(g[2])
        return val(g[1]) | val(g[2])
    return [val(o) for o in c.outputs]
