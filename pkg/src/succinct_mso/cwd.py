"""Clique-decomposition trees: evaluation, width, gluing and recoloring.

A decomposition is a tree of :class:`Const`, :class:`Marked` (the ``□``
placeholder), :class:`Recolor` and :class:`Join` nodes.  Colors are
0-based.  ``Join.M`` holds entries ``(symbol, side, c1, c2)``:

* ``(r, "right", cu, cv)`` adds ``(r, u, v)`` for ``u`` on the left with
  color ``cu`` and ``v`` on the right with color ``cv``;
* ``(r, "left", cv, cu)`` adds ``(r, v, u)`` for ``v`` on the right with
  color ``cv`` and ``u`` on the left with color ``cu``.

Vertices of an evaluated tree are numbered in left-to-right leaf order.
"""

from __future__ import annotations

import itertools
import json
import math
import random
import sys
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .structures import DEFAULT_ARC, ColoredGraph, R2Graph

sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class Const:
    color: int
    loops: frozenset = frozenset()
    tag: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "loops", frozenset(self.loops))


@dataclass(frozen=True)
class Marked:
    pass


@dataclass(frozen=True)
class Recolor:
    fmap: tuple
    child: object

    def __post_init__(self):
        object.__setattr__(self, "fmap", tuple(self.fmap))


@dataclass(frozen=True)
class Join:
    M: frozenset
    left: object
    right: object

    def __post_init__(self):
        entries = frozenset(tuple(e) for e in self.M)
        for sym, side, a, b in entries:
            if side not in ("left", "right"):
                raise DecompositionError(f"join side must be left/right, got {side!r}")
        object.__setattr__(self, "M", entries)


MARKED = Marked()
Node = Const | Marked | Recolor | Join


def children(node) -> tuple:
    if isinstance(node, Join):
        return (node.left, node.right)
    if isinstance(node, Recolor):
        return (node.child,)
    return ()


def iter_nodes(c) -> Iterator:
    """Pre-order traversal, left child first."""
    stack = [c]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def leaves(c) -> list:
    return [n for n in iter_nodes(c) if isinstance(n, (Const, Marked))]


def size(c) -> int:
    """Number of Constant leaves, i.e. the vertex count of the decomposition."""
    return sum(1 for n in iter_nodes(c) if isinstance(n, Const))


def marked_count(c) -> int:
    return sum(1 for n in iter_nodes(c) if isinstance(n, Marked))


def is_marked(c) -> bool:
    m = marked_count(c)
    if m > 1:
        raise DecompositionError("a decomposition may carry at most one marked leaf")
    return m == 1


def arc_symbols(c) -> set:
    out = set()
    for n in iter_nodes(c):
        if isinstance(n, Const):
            out |= n.loops
        elif isinstance(n, Join):
            out |= {e[0] for e in n.M}
    return out


def num_colors(c) -> int:
    """Smallest k consistent with every color and recolor map in the tree."""
    k = 1
    for n in iter_nodes(c):
        if isinstance(n, Const):
            k = max(k, n.color + 1)
        elif isinstance(n, Recolor):
            k = max(k, len(n.fmap), max(n.fmap, default=0) + 1)
        elif isinstance(n, Join):
            for _, _, a, b in n.M:
                k = max(k, a + 1, b + 1)
    return k


def validate(c, k: int | None = None) -> int:
    k = num_colors(c) if k is None else k
    for n in iter_nodes(c):
        if isinstance(n, Const) and not 0 <= n.color < k:
            raise DecompositionError(f"color {n.color} out of range [0, {k})")
        if isinstance(n, Recolor):
            if len(n.fmap) != k or any(not 0 <= x < k for x in n.fmap):
                raise DecompositionError(f"recolor map {n.fmap} is not a map on [0, {k})")
        if isinstance(n, Join):
            for e in n.M:
                if not (0 <= e[2] < k and 0 <= e[3] < k):
                    raise DecompositionError(f"join entry {e} uses a color outside [0, {k})")
    is_marked(c)
    return k


# -- evaluation ----------------------------------------------------------------

def _evaluate(c, symbols, k):
    """Return (coloring, arcs, leaf_nodes) with vertices in DFS leaf order."""
    if is_marked(c):
        raise DecompositionError("cannot evaluate a marked decomposition")
    k = validate(c, k)
    for s in arc_symbols(c):
        if s not in symbols:
            raise DecompositionError(f"arc symbol {s!r} not in signature {symbols}")
    leaf_nodes = []
    arcs = set()
    # post-order with explicit stack; each result maps color -> vertex list
    results = []
    stack = [(c, False)]
    while stack:
        node, done = stack.pop()
        if isinstance(node, Const):
            v = len(leaf_nodes)
            leaf_nodes.append(node)
            arcs.update((s, v, v) for s in node.loops)
            results.append({node.color: [v]})
            continue
        if not done:
            stack.append((node, True))
            for ch in reversed(children(node)):
                stack.append((ch, False))
            continue
        if isinstance(node, Recolor):
            groups = results.pop()
            out = {}
            for col, vs in groups.items():
                out.setdefault(node.fmap[col], []).extend(vs)
            results.append(out)
        else:
            right = results.pop()
            left = results.pop()
            for sym, side, a, b in node.M:
                if side == "right":
                    for u in left.get(a, ()):
                        arcs.update((sym, u, v) for v in right.get(b, ()))
                else:
                    for v in right.get(a, ()):
                        arcs.update((sym, v, u) for u in left.get(b, ()))
            merged = {col: list(vs) for col, vs in left.items()}
            for col, vs in right.items():
                merged.setdefault(col, []).extend(vs)
            results.append(merged)
    (groups,) = results
    coloring = [0] * len(leaf_nodes)
    for col, vs in groups.items():
        for v in vs:
            coloring[v] = col
    return coloring, arcs, leaf_nodes, k


def eval_decomposition(c, symbols: Sequence[str] = (DEFAULT_ARC,),
                       k: int | None = None) -> ColoredGraph:
    coloring, arcs, _, k = _evaluate(c, tuple(symbols), k)
    return ColoredGraph(R2Graph(len(coloring), arcs, arc_symbols=tuple(symbols)),
                        coloring, k)


def width(c) -> int:
    """Number of colors carried by some vertex at some node of the evaluation."""
    if is_marked(c):
        raise DecompositionError("width is defined on unmarked decompositions")
    used = set()
    results = []
    stack = [(c, False)]
    while stack:
        node, done = stack.pop()
        if isinstance(node, Const):
            results.append({node.color})
            used.add(node.color)
            continue
        if not done:
            stack.append((node, True))
            stack.extend((ch, False) for ch in reversed(children(node)))
            continue
        if isinstance(node, Recolor):
            cols = {node.fmap[x] for x in results.pop()}
        else:
            cols = results.pop() | results.pop()
        used |= cols
        results.append(cols)
    return len(used)


def join_depth(c) -> int:
    best = 0
    stack = [(c, 0)]
    while stack:
        node, d = stack.pop()
        if isinstance(node, Join):
            d += 1
        best = max(best, d)
        stack.extend((ch, d) for ch in children(node))
    return best


# -- addressing, gluing ------------------------------------------------------

def subtree(c, path: Sequence[int]):
    for i in path:
        c = children(c)[i]
    return c


def replace(c, path: Sequence[int], new):
    """Copy of c with the node at ``path`` replaced by ``new``."""
    spine = [c]
    for i in path:
        spine.append(children(spine[-1])[i])
    out = new
    for node, i in zip(reversed(spine[:-1]), reversed(list(path))):
        if isinstance(node, Recolor):
            out = Recolor(node.fmap, out)
        elif i == 0:
            out = Join(node.M, out, node.right)
        else:
            out = Join(node.M, node.left, out)
    return out


def marked_path(c) -> tuple:
    stack = [(c, ())]
    while stack:
        node, path = stack.pop()
        if isinstance(node, Marked):
            return path
        for i, ch in enumerate(children(node)):
            stack.append((ch, path + (i,)))
    raise DecompositionError("decomposition has no marked leaf")


def glue(c, d):
    """Substitute d for the marked leaf of c."""
    if not is_marked(c):
        raise DecompositionError("the left operand of a gluing must be marked")
    return replace(c, marked_path(c), d)


def delta(gamma: Mapping, word: Sequence):
    """Left fold of :func:`glue` over the pieces named by ``word``."""
    if not word:
        raise DecompositionError("delta needs a non-empty word")
    for letter in word[:-1]:
        if not is_marked(gamma[letter]):
            raise DecompositionError(f"piece {letter!r} must be marked to be glued into")
    # gluing the spine bottom-up avoids re-walking the growing tree
    out = gamma[word[-1]]
    for letter in reversed(word[:-1]):
        out = glue(gamma[letter], out)
    return out


def retag(c, tag):
    """Copy of c whose Constant leaves carry ``tag``."""
    if isinstance(c, Const):
        return Const(c.color, c.loops, tag)
    if isinstance(c, Marked):
        return c
    if isinstance(c, Recolor):
        return Recolor(c.fmap, retag(c.child, tag))
    return Join(c.M, retag(c.left, tag), retag(c.right, tag))


def eval_delta_blocks(gamma: Mapping, word: Sequence, symbols: Sequence[str] = (DEFAULT_ARC,),
                      k: int | None = None) -> R2Graph:
    """Graph of ``delta(gamma, word)`` numbered block by block.

    Vertices of the first piece come first (in its own leaf order, skipping
    the marked leaf), then those of the second piece, and so on.
    """
    return eval_delta_blocks_colored(gamma, word, symbols, k)[0].graph


def eval_delta_blocks_colored(gamma: Mapping, word: Sequence,
                              symbols: Sequence[str] = (DEFAULT_ARC,), k: int | None = None):
    """As :func:`eval_delta_blocks`, also returning each vertex's (block, offset)."""
    tagged = {}
    pieces = {}
    for i, letter in enumerate(word):
        pieces[i] = retag(gamma[letter], i)
    tree = delta(pieces, list(range(len(word))))
    coloring, arcs, leaf_nodes, k = _evaluate(tree, tuple(symbols), k)
    order = sorted(range(len(leaf_nodes)), key=lambda v: (leaf_nodes[v].tag, v))
    perm = [0] * len(order)
    position = []
    counts = {}
    for new, old in enumerate(order):
        perm[old] = new
        blk = leaf_nodes[old].tag
        position.append((blk, counts.get(blk, 0)))
        counts[blk] = counts.get(blk, 0) + 1
    del tagged
    g = R2Graph(len(order), {(s, perm[u], perm[v]) for s, u, v in arcs},
                arc_symbols=tuple(symbols))
    colors = [0] * len(order)
    for old, col in enumerate(coloring):
        colors[perm[old]] = col
    return ColoredGraph(g, colors, k), position


# -- recoloring maps ----------------------------------------------------------

def identity_map(k: int) -> tuple:
    return tuple(range(k))


def compose(f: Sequence[int], g: Sequence[int]) -> tuple:
    """The map ``x -> f[g[x]]``."""
    return tuple(f[x] for x in g)


def power(f: Sequence[int], n: int) -> tuple:
    out = identity_map(len(f))
    for _ in range(n):
        out = compose(f, out)
    return out


def recoloring(c, k: int | None = None) -> tuple:
    """Composition of the recolor maps on the path from the marked leaf to the root."""
    if not is_marked(c):
        raise DecompositionError("recoloring is defined on marked decompositions")
    k = num_colors(c) if k is None else k
    path = marked_path(c)
    spine = [c]
    for i in path:
        spine.append(children(spine[-1])[i])
    f = identity_map(k)
    for node in reversed(spine):
        if isinstance(node, Recolor):
            f = compose(node.fmap, f)
    return f


def is_idempotent(f: Sequence[int]) -> bool:
    return compose(f, f) == tuple(f)


def idempotent_power(f: Sequence[int]) -> int:
    k = len(f)
    bound = math.factorial(k) + 1
    g = tuple(f)
    for n in range(1, bound + 1):
        if is_idempotent(g):
            return n
        g = compose(f, g)
    raise AssertionError("no idempotent power found below k!+1")  # impossible


def widen(c, k_new: int):
    """Extend every recolor map to ``k_new`` colors, fixing the new ones."""
    if isinstance(c, (Const, Marked)):
        return c
    if isinstance(c, Recolor):
        fmap = c.fmap + tuple(range(len(c.fmap), k_new))
        return Recolor(fmap, widen(c.child, k_new))
    return Join(c.M, widen(c.left, k_new), widen(c.right, k_new))


def self_glue(c, times: int):
    """``c ▷ c ▷ ... ▷ c`` (times >= 1 copies); stays marked."""
    if times < 1:
        raise DecompositionError("need at least one copy")
    return delta({0: c}, [0] * times)


def disjoint_chain(pieces: Sequence):
    """Left-deep ``join_∅`` of the given unmarked decompositions."""
    out = pieces[0]
    for p in pieces[1:]:
        out = Join(frozenset(), out, p)
    return out


# -- enumeration --------------------------------------------------------------

def _subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def _recolor_maps(k: int):
    ident = identity_map(k)
    return [m for m in itertools.product(range(k), repeat=k) if m != ident]


def enumerate_decompositions(k: int, max_leaves: int, symbols: Sequence[str] = (DEFAULT_ARC,),
                             seed: int | None = None, count: int | None = None,
                             recolor: bool = True) -> Iterator:
    """Unmarked decompositions over colors [0, k).

    Without a seed: every tree with at most ``max_leaves`` leaves, where a
    Recolor (non-identity map) may sit directly above a leaf or a join, and
    joins range over all entry sets.  With a seed: ``count`` random trees.
    """
    if seed is not None:
        rng = random.Random(seed)
        for _ in range(count if count is not None else 100):
            yield random_decomposition(rng, k, rng.randint(1, max_leaves), symbols, recolor)
        return
    maps = _recolor_maps(k) if recolor else []
    entries = [(s, side, a, b) for s in symbols for side in ("right", "left")
               for a in range(k) for b in range(k)]
    all_M = [frozenset(m) for m in _subsets(entries)]
    memo: dict[int, list] = {}

    def trees(n):
        if n in memo:
            return memo[n]
        base = []
        if n == 1:
            for col in range(k):
                for loops in _subsets(symbols):
                    base.append(Const(col, frozenset(loops)))
        else:
            for nl in range(1, n):
                for lt in trees(nl):
                    for rt in trees(n - nl):
                        for M in all_M:
                            base.append(Join(M, lt, rt))
        out = list(base)
        for t in base:
            out.extend(Recolor(f, t) for f in maps)
        memo[n] = out
        return out

    for n in range(1, max_leaves + 1):
        yield from trees(n)


def random_decomposition(rng: random.Random, k: int, leaves_count: int,
                         symbols: Sequence[str] = (DEFAULT_ARC,), recolor: bool = True,
                         marked: bool = False):
    """Random tree with ``leaves_count`` leaves; one of them is □ if marked."""
    mark_at = rng.randrange(leaves_count) if marked else -1
    counter = itertools.count()

    def build(n):
        if n == 1:
            if next(counter) == mark_at:
                node = MARKED
            else:
                loops = frozenset(s for s in symbols if rng.random() < 0.4)
                node = Const(rng.randrange(k), loops)
        else:
            nl = rng.randint(1, n - 1)
            left = build(nl)
            right = build(n - nl)
            entries = [(s, side, a, b) for s in symbols for side in ("right", "left")
                       for a in range(k) for b in range(k)]
            M = frozenset(e for e in entries if rng.random() < 0.3)
            node = Join(M, left, right)
        if recolor and k > 1 and rng.random() < 0.3:
            node = Recolor(tuple(rng.randrange(k) for _ in range(k)), node)
        return node

    return build(leaves_count)


# -- JSON tree format -----------------------------------------------------------

def node_to_json(c, base: int = 0):
    if isinstance(c, Const):
        return {"op": "const", "color": c.color + base, "loops": sorted(c.loops)}
    if isinstance(c, Marked):
        return {"op": "marked"}
    if isinstance(c, Recolor):
        return {"op": "recolor", "map": [x + base for x in c.fmap],
                "child": node_to_json(c.child, base)}
    return {"op": "join",
            "M": [[s, side, a + base, b + base] for s, side, a, b in sorted(c.M)],
            "left": node_to_json(c.left, base), "right": node_to_json(c.right, base)}


def node_from_json(obj, base: int = 0, ids: list | None = None):
    op = obj.get("op")
    if op == "const":
        if ids is not None and "id" in obj:
            ids.append(obj["id"])
        elif ids is not None:
            ids.append(None)
        return Const(int(obj["color"]) - base, frozenset(obj.get("loops", ())))
    if op == "marked":
        return MARKED
    if op == "recolor":
        return Recolor(tuple(int(x) - base for x in obj["map"]),
                       node_from_json(obj["child"], base, ids))
    if op == "join":
        M = frozenset((e[0], e[1], int(e[2]) - base, int(e[3]) - base) for e in obj.get("M", ()))
        left = node_from_json(obj["left"], base, ids)
        right = node_from_json(obj["right"], base, ids)
        return Join(M, left, right)
    raise DecompositionError(f"unknown node op {op!r}")


def dumps(c, k: int | None = None, symbols: Sequence[str] | None = None) -> str:
    k = num_colors(c) if k is None else k
    doc = {"k": k, "tree": node_to_json(c)}
    if symbols is not None:
        doc["symbols"] = list(symbols)
    return json.dumps(doc, indent=1, sort_keys=True)


def loads(text: str):
    """Parse a decomposition file; returns ``(tree, k)``.

    Accepts a bare node or ``{"k":..., "base":0|1, "tree":...}``.  Leaf ids,
    where present, must match left-to-right leaf order.
    """
    obj = json.loads(text)
    if "op" in obj:
        obj = {"tree": obj}
    base = int(obj.get("base", 0))
    ids: list = []
    tree = node_from_json(obj["tree"], base, ids)
    expected = [i for i in range(len(ids))]
    given = [(i, x) for i, x in enumerate(ids) if x is not None]
    for pos, x in given:
        if int(x) != expected[pos]:
            raise DecompositionError(
                f"leaf id {x} does not match its left-to-right position {pos}")
    k = int(obj["k"]) if "k" in obj else num_colors(tree)
    validate(tree, k)
    return tree, k


# -- small builders -----------------------------------------------------------

def const(color: int = 0, loops=()) -> Const:
    return Const(color, frozenset(loops))


def join(entries, left, right) -> Join:
    return Join(frozenset(tuple(e) for e in entries), left, right)


def recolor(fmap, child) -> Recolor:
    return Recolor(tuple(fmap), child)
