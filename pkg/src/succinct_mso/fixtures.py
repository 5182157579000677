"""Named decompositions, universes and formula pairs used by the checks."""

from __future__ import annotations

from dataclasses import dataclass

from . import cwd
from .cwd import MARKED, const, join, recolor
from .mso.corpus import formula
from .mso.syntax import Formula

BOTH = [("->", "right", 0, 0), ("->", "left", 0, 0)]


def four_vertex_example():
    """Four-vertex example tree of width 2 (0-based colors)."""
    inner = join([("->", "right", 0, 1)], const(0), const(1, ["->"]))
    mid = join([("->", "right", 1, 0), ("->", "left", 0, 0)], inner, const(0))
    return join([("->", "left", 1, 0)], recolor((0, 0), mid), const(1))


FOUR_VERTEX_ARCS = frozenset({
    ("->", 0, 1), ("->", 1, 1), ("->", 1, 2), ("->", 2, 0),
    ("->", 3, 0), ("->", 3, 1), ("->", 3, 2),
})


def edgeless_chain(n: int):
    return cwd.disjoint_chain([const(0) for _ in range(n)])


def looped_chain(n: int):
    return cwd.disjoint_chain([const(0, ["->"]) for _ in range(n)])


def clique_chain(n: int, loops: bool = True):
    """Complete graph, every new vertex joined both ways to all earlier ones."""
    leaf = lambda: const(0, ["->"] if loops else [])  # noqa: E731
    out = leaf()
    for _ in range(n - 1):
        out = join(BOTH, out, leaf())
    return out


def tournament_chain(n: int):
    """Transitive tournament: each new vertex receives arcs from all earlier ones."""
    out = const(0)
    for _ in range(n - 1):
        out = recolor((0, 0), join([("->", "right", 0, 1)], out, const(1)))
    return out


def two_cycle():
    return join(BOTH, const(0), const(0))


def single_arc():
    return join([("->", "right", 0, 0)], const(0), const(0))


def functional_universe():
    """Decompositions of every functional graph on at most two vertices."""
    loop = const(0, ["->"])
    return [
        loop,
        join([], loop, loop),
        join([("->", "right", 0, 0)], const(0), loop),   # 0 -> 1, 1 -> 1
        join([("->", "left", 0, 0)], loop, const(0)),    # 0 -> 0, 1 -> 0
        two_cycle(),
    ]


def arc_universe():
    """One vertex, and one arc between two vertices."""
    return [const(0), single_arc()]


@dataclass(frozen=True)
class PumpFixture:
    name: str
    decomposition: object
    phi: Formula
    m: int


def pump_fixtures() -> list[PumpFixture]:
    return [
        PumpFixture("loops", looped_chain(5), formula("has_loop"), 2),
        PumpFixture("tournament", tournament_chain(6), formula("psi1"), 2),
    ]


@dataclass(frozen=True)
class StableFixture:
    name: str
    psi: Formula
    chi: Formula
    universe: list
    pump_models: list
    m: int


def stable_fixtures() -> list[StableFixture]:
    return [
        StableFixture("psi1-top", formula("psi1"), formula("top"), arc_universe(),
                      [edgeless_chain(4)], 2),
        StableFixture("loop-deterministic", formula("has_loop"), formula("deterministic"),
                      functional_universe(), [cwd.disjoint_chain([two_cycle()] * 6)], 2),
    ]


def clique_pairs(sizes=(3, 4)) -> list:
    """(looped clique, edgeless) decomposition pairs of equal size."""
    return [(clique_chain(n), edgeless_chain(n)) for n in sizes]


def marked_examples():
    """A few marked trees used by tests and the CLI demo."""
    return {
        "box": MARKED,
        "recolor-box": recolor((0, 0), MARKED),
        "join-box": join([("->", "right", 0, 0)], const(0), MARKED),
    }
