"""Finite labeled graphs over binary (and optional unary) relation symbols.

Vertices are always the dense integers ``0..n-1``.  Graphs are immutable
values; every operation here returns a fresh graph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

DEFAULT_ARC = "->"


class SignatureError(ValueError):
    pass


class GraphFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    arc_symbols: tuple[str, ...] = (DEFAULT_ARC,)
    unary_symbols: tuple[str, ...] = ()
    num_colors: int = 1

    def __post_init__(self):
        object.__setattr__(self, "arc_symbols", tuple(self.arc_symbols))
        object.__setattr__(self, "unary_symbols", tuple(self.unary_symbols))
        if not self.arc_symbols:
            raise SignatureError("a signature needs at least one arc symbol")
        names = self.arc_symbols + self.unary_symbols
        if len(set(names)) != len(names):
            raise SignatureError(f"duplicate symbol names in {names}")
        if self.num_colors < 1:
            raise SignatureError("num_colors must be >= 1")


@dataclass(frozen=True)
class R2Graph:
    """Graph whose arcs are triples ``(symbol, source, target)``."""

    n: int
    arcs: frozenset = frozenset()
    unary: frozenset = frozenset()  # pairs (symbol, vertex)
    arc_symbols: tuple[str, ...] = (DEFAULT_ARC,)
    unary_symbols: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "arcs", frozenset(self.arcs))
        object.__setattr__(self, "unary", frozenset(self.unary))
        object.__setattr__(self, "arc_symbols", tuple(self.arc_symbols))
        object.__setattr__(self, "unary_symbols", tuple(self.unary_symbols))
        if self.n < 0:
            raise ValueError("negative vertex count")
        for sym, u, v in self.arcs:
            if sym not in self.arc_symbols:
                raise SignatureError(f"unknown arc symbol {sym!r}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc ({sym}, {u}, {v}) out of range for n={self.n}")
        for sym, v in self.unary:
            if sym not in self.unary_symbols:
                raise SignatureError(f"unknown unary symbol {sym!r}")
            if not 0 <= v < self.n:
                raise ValueError(f"unary fact ({sym}, {v}) out of range")

    @property
    def signature(self) -> Signature:
        return Signature(self.arc_symbols, self.unary_symbols)

    def has_arc(self, sym: str, u: int, v: int) -> bool:
        return (sym, u, v) in self.arcs

    def unary_set(self, sym: str) -> frozenset:
        return frozenset(v for s, v in self.unary if s == sym)

    def __len__(self):
        return self.n

    def relabel(self, perm) -> "R2Graph":
        """Image of the graph under the vertex map ``v -> perm[v]``."""
        return R2Graph(
            self.n,
            {(s, perm[u], perm[v]) for s, u, v in self.arcs},
            {(s, perm[v]) for s, v in self.unary},
            self.arc_symbols,
            self.unary_symbols,
        )

    def key(self):
        return (self.n, self.arcs, self.unary, self.arc_symbols, self.unary_symbols)


@dataclass(frozen=True)
class ColoredGraph:
    graph: R2Graph
    coloring: tuple[int, ...]
    k: int = field(default=0)

    def __post_init__(self):
        coloring = tuple(self.coloring)
        object.__setattr__(self, "coloring", coloring)
        if self.k == 0:
            object.__setattr__(self, "k", max(coloring, default=0) + 1)
        if len(coloring) != self.graph.n:
            raise ValueError("coloring must be defined on exactly the vertex set")
        if any(not 0 <= c < self.k for c in coloring):
            raise ValueError(f"colors must lie in [0, {self.k})")

    @property
    def n(self) -> int:
        return self.graph.n

    def __len__(self):
        return self.graph.n


def _same_signature(g: R2Graph, h: R2Graph):
    if g.arc_symbols != h.arc_symbols or g.unary_symbols != h.unary_symbols:
        raise SignatureError(
            f"signature mismatch: {g.signature} vs {h.signature}"
        )


def disjoint_union(g: R2Graph, h: R2Graph) -> R2Graph:
    _same_signature(g, h)
    off = g.n
    return R2Graph(
        g.n + h.n,
        g.arcs | {(s, u + off, v + off) for s, u, v in h.arcs},
        g.unary | {(s, v + off) for s, v in h.unary},
        g.arc_symbols,
        g.unary_symbols,
    )


def union_all(graphs: Iterable[R2Graph], signature: Signature | None = None) -> R2Graph:
    graphs = list(graphs)
    if not graphs:
        sig = signature or Signature()
        return R2Graph(0, arc_symbols=sig.arc_symbols, unary_symbols=sig.unary_symbols)
    out = graphs[0]
    for h in graphs[1:]:
        out = disjoint_union(out, h)
    return out


def copies(g: R2Graph, count: int) -> R2Graph:
    return union_all([g] * count, g.signature) if count else R2Graph(
        0, arc_symbols=g.arc_symbols, unary_symbols=g.unary_symbols)


def colored_union(g: ColoredGraph, h: ColoredGraph) -> ColoredGraph:
    return ColoredGraph(disjoint_union(g.graph, h.graph), g.coloring + h.coloring,
                        max(g.k, h.k))


def graph_equal(g: R2Graph, h: R2Graph) -> bool:
    return g.n == h.n and g.arcs == h.arcs and g.unary == h.unary


def isomorphic_small(g: R2Graph, h: R2Graph, bound: int = 8) -> bool:
    """Brute force over all vertex bijections."""
    if g.n > bound or h.n > bound:
        raise ValueError(f"isomorphic_small limited to n <= {bound}")
    if g.n != h.n or len(g.arcs) != len(h.arcs) or len(g.unary) != len(h.unary):
        return False
    for perm in itertools.permutations(range(g.n)):
        if all((s, perm[u], perm[v]) in h.arcs for s, u, v in g.arcs) and all(
            (s, perm[v]) in h.unary for s, v in g.unary
        ):
            return True
    return False


# -- small named graphs ------------------------------------------------------

def edgeless(n: int, symbols=(DEFAULT_ARC,)) -> R2Graph:
    return R2Graph(n, arc_symbols=symbols)


def complete(n: int, loops: bool = True, sym: str = DEFAULT_ARC, symbols=None) -> R2Graph:
    arcs = {(sym, u, v) for u in range(n) for v in range(n) if loops or u != v}
    return R2Graph(n, arcs, arc_symbols=symbols or (sym,))


def directed_path(n: int, sym: str = DEFAULT_ARC) -> R2Graph:
    return R2Graph(n, {(sym, i, i + 1) for i in range(n - 1)}, arc_symbols=(sym,))


def cycle(n: int, sym: str = DEFAULT_ARC) -> R2Graph:
    """Undirected cycle: symmetric arcs between i and i+1 mod n."""
    arcs = set()
    for i in range(n):
        j = (i + 1) % n
        arcs.add((sym, i, j))
        arcs.add((sym, j, i))
    return R2Graph(n, arcs, arc_symbols=(sym,))


def undirected_path(n: int, sym: str = DEFAULT_ARC) -> R2Graph:
    arcs = set()
    for i in range(n - 1):
        arcs |= {(sym, i, i + 1), (sym, i + 1, i)}
    return R2Graph(n, arcs, arc_symbols=(sym,))


def all_graphs(n: int, symbols=(DEFAULT_ARC,), loops: bool = True) -> Iterator[R2Graph]:
    """Every labeled graph on n vertices (binary-counter order over arc slots)."""
    slots = [(s, u, v) for s in symbols for u in range(n) for v in range(n)
             if loops or u != v]
    for mask in range(1 << len(slots)):
        yield R2Graph(n, {slots[i] for i in range(len(slots)) if mask >> i & 1},
                      arc_symbols=tuple(symbols))


# -- text format -------------------------------------------------------------

def dump_graph(g: R2Graph) -> str:
    header = f"graph n={g.n} sig={','.join(g.arc_symbols)}"
    if g.unary_symbols:
        header += f" unary={','.join(g.unary_symbols)}"
    lines = [header]
    lines += [f"arc {s} {u} {v}" for s, u, v in sorted(g.arcs, key=lambda a: (
        g.arc_symbols.index(a[0]), a[1], a[2]))]
    lines += [f"set {s} {v}" for s, v in sorted(g.unary)]
    return "\n".join(lines) + "\n"


def _fields(line: str) -> dict:
    out = {}
    for tok in line.split()[1:]:
        if "=" not in tok:
            raise GraphFormatError(f"bad header token {tok!r}")
        k, v = tok.split("=", 1)
        out[k] = v
    return out


def parse_graph(text: str) -> R2Graph:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("graph"):
        raise GraphFormatError("missing 'graph n=<N> sig=<...>' header")
    head = _fields(lines[0])
    try:
        n = int(head["n"])
    except (KeyError, ValueError):
        raise GraphFormatError("header needs an integer n=<N>") from None
    symbols = tuple(head.get("sig", DEFAULT_ARC).split(","))
    unary_symbols = tuple(s for s in head.get("unary", "").split(",") if s)
    arcs, unary = set(), set()
    for ln in lines[1:]:
        parts = ln.split()
        try:
            if parts[0] == "arc" and len(parts) == 4:
                arcs.add((parts[1], int(parts[2]), int(parts[3])))
            elif parts[0] == "set" and len(parts) == 3:
                unary.add((parts[1], int(parts[2])))
            else:
                raise GraphFormatError(f"cannot parse line {ln!r}")
        except ValueError as exc:
            raise GraphFormatError(f"bad line {ln!r}: {exc}") from None
    try:
        return R2Graph(n, arcs, unary, symbols, unary_symbols)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None
