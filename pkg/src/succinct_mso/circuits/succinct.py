"""Succinct graphs: a vertex count N plus a circuit deciding the arcs.

The arc circuit reads the two vertex numbers little-endian, source bits
first, and has one output per arc symbol.  Encodings of numbers >= N are
never queried.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..structures import DEFAULT_ARC, GraphFormatError, R2Graph
from .gadgets import bits_for, table_lookup
from .ir import BoolCircuit, Builder, CircuitError, dump_netlist, eval_batch, parse_netlist_lines

DECODE_GUARD = 1 << 12
_CHUNK = 1 << 16


class DecodeGuardError(RuntimeError):
    pass


@dataclass(frozen=True)
class SuccinctGraph:
    N: int
    arc_circuit: BoolCircuit
    symbols: tuple = (DEFAULT_ARC,)
    unary_circuit: BoolCircuit | None = None
    unary_symbols: tuple = ()
    meta: dict | None = None

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        object.__setattr__(self, "unary_symbols", tuple(self.unary_symbols))
        if self.N < 1:
            raise CircuitError("a succinct graph needs N >= 1")
        w = bits_for(self.N)
        if self.arc_circuit.width != 2 * w:
            raise CircuitError(f"arc circuit must read {2 * w} bits, reads {self.arc_circuit.width}")
        if len(self.arc_circuit.outputs) != len(self.symbols):
            raise CircuitError("arc circuit needs one output per arc symbol")
        if self.unary_circuit is not None:
            if self.unary_circuit.width != w:
                raise CircuitError(f"unary circuit must read {w} bits")
            if len(self.unary_circuit.outputs) != len(self.unary_symbols):
                raise CircuitError("unary circuit needs one output per unary symbol")

    @property
    def bits(self) -> int:
        return bits_for(self.N)

    @property
    def gates(self) -> int:
        return self.arc_circuit.size + (self.unary_circuit.size if self.unary_circuit else 0)


def _bit_matrix(values: np.ndarray, w: int) -> np.ndarray:
    return ((values[:, None] >> np.arange(w)) & 1).astype(bool)


def decode(sg: SuccinctGraph, guard: int = DECODE_GUARD) -> R2Graph:
    """Explicit graph obtained by querying every ordered vertex pair."""
    N, w = sg.N, sg.bits
    if N > guard:
        raise DecodeGuardError(f"N={N} exceeds the decode guard {guard}")
    arcs = set()
    total = N * N
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        u, v = idx // N, idx % N
        inp = np.concatenate([_bit_matrix(u, w), _bit_matrix(v, w)], axis=1)
        out = eval_batch(sg.arc_circuit, inp)
        for j, sym in enumerate(sg.symbols):
            hit = np.nonzero(out[:, j])[0]
            arcs.update((sym, int(u[h]), int(v[h])) for h in hit)
    unary = set()
    if sg.unary_circuit is not None:
        vs = np.arange(N, dtype=np.int64)
        out = eval_batch(sg.unary_circuit, _bit_matrix(vs, w))
        for j, sym in enumerate(sg.unary_symbols):
            unary.update((sym, int(x)) for x in np.nonzero(out[:, j])[0])
    return R2Graph(N, arcs, unary, sg.symbols, sg.unary_symbols)


def encode_explicit(g: R2Graph) -> SuccinctGraph:
    """Lookup-table circuits reproducing g exactly."""
    if g.n < 1:
        raise CircuitError("encode_explicit needs at least one vertex")
    w = bits_for(g.n)
    b = Builder(2 * w)
    table = {}
    index = {s: j for j, s in enumerate(g.arc_symbols)}
    for s, u, v in g.arcs:
        key = u | v << w
        row = table.setdefault(key, [0] * len(g.arc_symbols))
        row[index[s]] = 1
    outs = table_lookup(b, b.inputs, table, len(g.arc_symbols))
    arc_circuit = b.build(outs)
    unary_circuit = None
    if g.unary_symbols:
        ub = Builder(w)
        utable = {}
        uindex = {s: j for j, s in enumerate(g.unary_symbols)}
        for s, v in g.unary:
            utable.setdefault(v, [0] * len(g.unary_symbols))[uindex[s]] = 1
        unary_circuit = ub.build(table_lookup(ub, ub.inputs, utable, len(g.unary_symbols)))
    return SuccinctGraph(g.n, arc_circuit, g.arc_symbols, unary_circuit, g.unary_symbols)


# -- file format ----------------------------------------------------------------

def dump_succinct(sg: SuccinctGraph) -> str:
    out = f"succinct N={sg.N} sig={','.join(sg.symbols)}\n" + dump_netlist(sg.arc_circuit)
    if sg.unary_circuit is not None:
        out += f"unary sig={','.join(sg.unary_symbols)}\n" + dump_netlist(sg.unary_circuit)
    return out


def parse_succinct(text: str) -> SuccinctGraph:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("succinct"):
        raise GraphFormatError("missing 'succinct N=<N> sig=<...>' header")
    head = dict(tok.split("=", 1) for tok in lines[0].split()[1:] if "=" in tok)
    try:
        N = int(head["N"])
    except (KeyError, ValueError):
        raise GraphFormatError("header needs N=<int>") from None
    symbols = tuple(head.get("sig", DEFAULT_ARC).split(","))
    body = lines[1:]
    split = next((i for i, ln in enumerate(body) if ln.startswith("unary")), None)
    arc_lines = body if split is None else body[:split]
    try:
        arc = parse_netlist_lines(arc_lines)
        unary, unary_symbols = None, ()
        if split is not None:
            uhead = dict(tok.split("=", 1) for tok in body[split].split()[1:] if "=" in tok)
            unary_symbols = tuple(s for s in uhead.get("sig", "").split(",") if s)
            unary = parse_netlist_lines(body[split + 1:])
        return SuccinctGraph(N, arc, symbols, unary, unary_symbols)
    except CircuitError as exc:
        raise GraphFormatError(str(exc)) from None
