"""Compilers from pumping data to succinct graphs.

Vertex v of a pumped graph lives in block ``i`` (0 for s, 1..ell for the
repeat pieces, ell+1 for e) at offset ``rel``.  Whether an arc joins u and
v is a function of the two block kinds, the two offsets and the block gap
clamped to [-2, 2]; the clamp is sound because the repeat recoloring is
idempotent, so crossing two or more repeat blocks acts like crossing one.
That function is tabulated by evaluating short words and then compiled
into a lookup circuit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .. import cwd
from ..pumping import PumpError, PumpPair, PumpQuad, PumpTriple, words
from ..structures import R2Graph
from .cnf import CnfInstance
from .gadgets import (
    bits_for, clamped_gap, cnf_eval, gap_code, less_than, mux, num_copy_relative,
    table_lookup,
)
from .ir import BoolCircuit, Builder, CircuitError, eval_circuit
from .succinct import SuccinctGraph

# (in_s, in_e, is_b) per block kind
KIND_BITS = {"s": (1, 0, 0), "e": (0, 1, 0), "r": (0, 0, 0), "g": (0, 0, 0), "b": (0, 0, 1)}


class ConsistencyViolation(CircuitError):
    pass


@dataclass(frozen=True)
class EdgeCaseTable:
    sizes: tuple           # (|s|, |repeat piece|, |e|)
    symbols: tuple
    rel_width: int
    entries: dict          # key tuple -> tuple of output bits, one per symbol

    def packed(self) -> dict:
        return {pack_key(k, self.rel_width): v for k, v in self.entries.items()}

    def lookup(self, kind_u, kind_v, rel_u, rel_v, gap) -> tuple:
        return self.entries[(kind_u, kind_v, rel_u, rel_v, max(-2, min(2, gap)))]


def pack_key(key: tuple, rel_width: int) -> int:
    """Integer whose bits are the circuit's table-lookup key, little-endian."""
    kind_u, kind_v, rel_u, rel_v, gap = key
    bits = []
    for kind, rel in ((kind_u, rel_u), (kind_v, rel_v)):
        bits += KIND_BITS[kind]
        bits += [rel >> j & 1 for j in range(rel_width)]
    bits += gap_code(gap)
    return sum(bit << j for j, bit in enumerate(bits))


def edge_case_table(gamma: dict, repeat_kinds: Sequence[str], symbols: Sequence[str],
                    k: int, max_middle: int = 3) -> EdgeCaseTable:
    """Tabulate arcs of s w e for every word w over ``repeat_kinds`` up to ``max_middle``."""
    symbols = tuple(symbols)
    S, E = cwd.size(gamma["s"]), cwd.size(gamma["e"])
    reps = {cwd.size(gamma[x]) for x in repeat_kinds}
    if len(reps) != 1:
        raise CircuitError("repeat pieces must have equal size")
    R = reps.pop()
    rw = bits_for(max(S, R, E, 1))
    entries: dict = {}
    for w in words(repeat_kinds, max_middle):
        word = ["s", *w, "e"]
        cg, pos = cwd.eval_delta_blocks_colored(gamma, word, symbols, k)
        g = cg.graph
        arcs = g.arcs
        n = g.n
        for u in range(n):
            bu, ru = pos[u]
            for v in range(n):
                bv, rv = pos[v]
                key = (word[bu], word[bv], ru, rv, max(-2, min(2, bv - bu)))
                bits = tuple(int((s, u, v) in arcs) for s in symbols)
                old = entries.setdefault(key, bits)
                if old != bits:
                    raise ConsistencyViolation(
                        f"key {key} observed with {old} and {bits} (word {''.join(word)})")
    return EdgeCaseTable((S, R, E), symbols, rw, entries)


def triple_table(t: PumpTriple, max_middle: int = 3) -> EdgeCaseTable:
    return edge_case_table(t.gamma(), ["r"], t.symbols, t.k, max_middle)


def quad_table(q: PumpQuad, max_middle: int = 3) -> EdgeCaseTable:
    return edge_case_table(q.gamma(), ["g", "b"], q.symbols, q.k, max_middle)


# -- circuit assembly -------------------------------------------------------------

def _vertex_fields(b: Builder, v, sizes, ell, kind_bit):
    f = num_copy_relative(b, v, sizes, ell)
    is_b = kind_bit(f) if kind_bit else b.const(0)
    return f, is_b


def _arc_outputs(b: Builder, table: EdgeCaseTable, ell: int, w: int, kind_bit=None):
    u, v = b.inputs[:w], b.inputs[w:]
    fu, bu = _vertex_fields(b, u, table.sizes, ell, kind_bit)
    fv, bv = _vertex_fields(b, v, table.sizes, ell, kind_bit)
    if len(fu["rel"]) != table.rel_width:
        raise CircuitError("relative-index width disagrees with the table")
    key = ([fu["in_s"], fu["in_e"], bu] + fu["rel"] + [fv["in_s"], fv["in_e"], bv] + fv["rel"]
           + clamped_gap(b, fu["i"], fv["i"]))
    return table_lookup(b, key, table.packed(), len(table.symbols))


def _meta(kind, N, circuit, **extra):
    return {"construction": kind, "N": N, "bits": bits_for(N), "gates": circuit.size, **extra}


def pump_circuit(t: PumpTriple, ell: int, table: EdgeCaseTable | None = None) -> SuccinctGraph:
    """Succinct encoding of the block-ordered graph of s r^ell e."""
    if ell < 0:
        raise CircuitError("ell must be non-negative")
    if not cwd.is_idempotent(cwd.recoloring(t.r, t.k)):
        raise CircuitError("pump_circuit needs an idempotent repeat recoloring")
    table = table or triple_table(t)
    S, R, E = table.sizes
    N = S + ell * R + E
    if N < 1:
        raise CircuitError("the pumped graph is empty")
    w = bits_for(N)
    b = Builder(2 * w)
    outs = _arc_outputs(b, table, ell, w)
    circ = b.build(outs)
    return SuccinctGraph(N, circ, table.symbols, meta=_meta("pump", N, circ, ell=ell))


def sat_word(cnf: CnfInstance) -> list:
    """Middle word: copy i is b exactly when i-1 encodes a satisfying assignment."""
    return ["b" if cnf.holds(a) else "g" for a in range(1 << cnf.n)]


def sat_reduction(q: PumpQuad, cnf: CnfInstance, table: EdgeCaseTable | None = None) -> SuccinctGraph:
    table = table or quad_table(q)
    S, R, E = table.sizes
    ell = 1 << cnf.n
    N = S + ell * R + E
    w = bits_for(N)
    b = Builder(2 * w)

    def kind_bit(f):
        return b.and_(f["middle"], cnf_eval(b, f["q"][:cnf.n], cnf.clauses))

    outs = _arc_outputs(b, table, ell, w, kind_bit)
    circ = b.build(outs)
    return SuccinctGraph(N, circ, table.symbols,
                         meta=_meta("sat", N, circ, ell=ell, variables=cnf.n,
                                    clauses=len(cnf.clauses)))


def sat_expected(q: PumpQuad, cnf: CnfInstance) -> R2Graph:
    return q.graph(sat_word(cnf))


# -- CVP ------------------------------------------------------------------------

@dataclass(frozen=True)
class CvpInstance:
    circuit: BoolCircuit

    def __post_init__(self):
        if len(self.circuit.outputs) != 1:
            raise CircuitError("a CVP instance has exactly one output")

    @property
    def n(self) -> int:
        return self.circuit.width

    @property
    def size(self) -> int:
        return self.circuit.size

    def value(self) -> int:
        return eval_circuit(self.circuit, [0] * self.circuit.width)[0]


def random_cvp(rng: random.Random, n: int = 2, max_gates: int = 8) -> CvpInstance:
    """Random circuit with n inputs and at most ``max_gates`` gates in total."""
    if not 0 <= n < max_gates:
        raise CircuitError("need room for at least one non-input gate")
    total = rng.randint(n + 1, max_gates)
    b = Builder(n)
    while len(b.gates) < total:
        cur = len(b.gates)
        op = rng.choice(["AND", "OR", "NOT", "CONST"] if cur else ["CONST"])
        if op == "CONST":
            b.const(rng.randint(0, 1))
        elif op == "NOT":
            b.not_(rng.randrange(cur))
        elif op == "AND":
            b.and_(rng.randrange(cur), rng.randrange(cur))
        else:
            b.or_(rng.randrange(cur), rng.randrange(cur))
    return CvpInstance(b.build([len(b.gates) - 1]))


def cvp_reduction(p: PumpPair, cvp: CvpInstance) -> SuccinctGraph:
    """Multiplex the two pump circuits on the value S(0^n); 1 selects the positive side."""
    ell = cvp.size
    pos, neg = pump_circuit(p.pos, ell), pump_circuit(p.neg, ell)
    if pos.N != neg.N:
        raise PumpError(f"pair sides disagree on N: {pos.N} vs {neg.N}")
    if pos.symbols != neg.symbols:
        raise CircuitError("pair sides disagree on the signature")
    w = pos.bits
    b = Builder(2 * w)
    zeros = [b.const(0) for _ in range(cvp.n)]
    sel = b.embed(cvp.circuit, zeros)[0]
    a_pos = b.embed(pos.arc_circuit, b.inputs)
    a_neg = b.embed(neg.arc_circuit, b.inputs)
    circ = b.build(mux(b, sel, a_neg, a_pos))
    return SuccinctGraph(pos.N, circ, pos.symbols,
                         meta=_meta("cvp", pos.N, circ, ell=ell, cvp_gates=cvp.size))


# -- minimum-order ------------------------------------------------------------------

MIN_ORDER_SYMBOLS = ("->", "<=")


def min_order_reduction(cnf: CnfInstance) -> SuccinctGraph:
    """Loops on satisfying valuations; an order putting them before the rest."""
    if cnf.n < 1:
        raise CircuitError("min_order_reduction needs n >= 1")
    n = cnf.n
    N = 1 << n
    b = Builder(2 * n)
    u, v = b.inputs[:n], b.inputs[n:]
    su, sv = cnf_eval(b, u, cnf.clauses), cnf_eval(b, v, cnf.clauses)
    same = b.all_of([b.not_(b.xor(x, y)) for x, y in zip(u, v)])
    loop = b.and_(same, su)
    sat_first = b.and_(su, b.not_(sv))
    agree = b.not_(b.xor(su, sv))
    by_value = b.and_(agree, b.not_(less_than(b, v, u)))
    le = b.or_(sat_first, by_value)
    circ = b.build([loop, le])
    return SuccinctGraph(N, circ, MIN_ORDER_SYMBOLS,
                         meta=_meta("min-order", N, circ, variables=n, clauses=len(cnf.clauses)))
