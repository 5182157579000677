"""Boolean circuits as gate lists in topological order.

Gates are tuples ``("INPUT", i)``, ``("CONST", b)``, ``("NOT", a)``,
``("AND", a, b)`` and ``("OR", a, b)`` whose operands are indices of
earlier gates.  Fan-out is unbounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


class CircuitError(ValueError):
    pass


@dataclass(frozen=True)
class BoolCircuit:
    width: int
    gates: tuple
    outputs: tuple

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(tuple(g) for g in self.gates))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        validate(self)

    def __len__(self):
        return len(self.gates)

    @property
    def size(self) -> int:
        return len(self.gates)


_ARITY = {"INPUT": 1, "CONST": 1, "NOT": 1, "AND": 2, "OR": 2}


def validate(c: BoolCircuit):
    if c.width < 0:
        raise CircuitError("negative input width")
    for i, g in enumerate(c.gates):
        op = g[0]
        if op not in _ARITY or len(g) != _ARITY[op] + 1:
            raise CircuitError(f"gate {i}: malformed {g}")
        if op == "INPUT":
            if not 0 <= g[1] < c.width:
                raise CircuitError(f"gate {i}: input index {g[1]} out of range")
        elif op == "CONST":
            if g[1] not in (0, 1):
                raise CircuitError(f"gate {i}: constant must be 0 or 1")
        else:
            for a in g[1:]:
                if not 0 <= a < i:
                    raise CircuitError(f"gate {i}: operand {a} is not an earlier gate")
    if not c.outputs:
        raise CircuitError("a circuit needs at least one output")
    for o in c.outputs:
        if not 0 <= o < len(c.gates):
            raise CircuitError(f"output {o} is not a gate")


class Builder:
    """Appends gates; the first ``width`` gates are the inputs."""

    def __init__(self, width: int):
        self.width = width
        self.gates: list[tuple] = [("INPUT", i) for i in range(width)]

    @property
    def inputs(self) -> list[int]:
        return list(range(self.width))

    def _add(self, g) -> int:
        self.gates.append(g)
        return len(self.gates) - 1

    def const(self, bit: int) -> int:
        return self._add(("CONST", int(bool(bit))))

    def not_(self, a: int) -> int:
        return self._add(("NOT", a))

    def and_(self, a: int, b: int) -> int:
        return self._add(("AND", a, b))

    def or_(self, a: int, b: int) -> int:
        return self._add(("OR", a, b))

    def xor(self, a: int, b: int) -> int:
        return self.or_(self.and_(a, self.not_(b)), self.and_(self.not_(a), b))

    def all_of(self, bits: Sequence[int]) -> int:
        if not bits:
            return self.const(1)
        out = bits[0]
        for b in bits[1:]:
            out = self.and_(out, b)
        return out

    def any_of(self, bits: Sequence[int]) -> int:
        if not bits:
            return self.const(0)
        out = bits[0]
        for b in bits[1:]:
            out = self.or_(out, b)
        return out

    def embed(self, other: BoolCircuit, inputs: Sequence[int]) -> list[int]:
        """Copy ``other`` with its inputs wired to the given gates; returns its outputs."""
        if len(inputs) != other.width:
            raise CircuitError(f"embed: expected {other.width} inputs, got {len(inputs)}")
        remap = []
        for g in other.gates:
            op = g[0]
            if op == "INPUT":
                remap.append(inputs[g[1]])
            elif op == "CONST":
                remap.append(self.const(g[1]))
            elif op == "NOT":
                remap.append(self.not_(remap[g[1]]))
            else:
                remap.append(self._add((op, remap[g[1]], remap[g[2]])))
        return [remap[o] for o in other.outputs]

    def build(self, outputs: Sequence[int]) -> BoolCircuit:
        return BoolCircuit(self.width, tuple(self.gates), tuple(outputs))


def eval_circuit(c: BoolCircuit, bits: Sequence[int]) -> list[int]:
    if len(bits) != c.width:
        raise CircuitError(f"expected {c.width} input bits, got {len(bits)}")
    val: list[int] = []
    for g in c.gates:
        op = g[0]
        if op == "INPUT":
            val.append(int(bits[g[1]]) & 1)
        elif op == "CONST":
            val.append(g[1])
        elif op == "NOT":
            val.append(1 - val[g[1]])
        elif op == "AND":
            val.append(val[g[1]] & val[g[2]])
        else:
            val.append(val[g[1]] | val[g[2]])
    return [val[o] for o in c.outputs]


def eval_batch(c: BoolCircuit, bits: np.ndarray) -> np.ndarray:
    """Evaluate on every row of a (B, width) boolean array; returns (B, outputs)."""
    bits = np.asarray(bits, dtype=bool)
    if bits.ndim != 2 or bits.shape[1] != c.width:
        raise CircuitError(f"expected shape (B, {c.width}), got {bits.shape}")
    B = bits.shape[0]
    ones = np.ones(B, dtype=bool)
    zeros = np.zeros(B, dtype=bool)
    val: list = []
    for g in c.gates:
        op = g[0]
        if op == "INPUT":
            val.append(bits[:, g[1]])
        elif op == "CONST":
            val.append(ones if g[1] else zeros)
        elif op == "NOT":
            val.append(~val[g[1]])
        elif op == "AND":
            val.append(val[g[1]] & val[g[2]])
        else:
            val.append(val[g[1]] | val[g[2]])
    if not c.outputs:
        return np.zeros((B, 0), dtype=bool)
    return np.stack([val[o] for o in c.outputs], axis=1)


def gate_counts(c: BoolCircuit) -> dict:
    out: dict[str, int] = {}
    for g in c.gates:
        out[g[0]] = out.get(g[0], 0) + 1
    return out


# -- netlist text ---------------------------------------------------------------

def dump_netlist(c: BoolCircuit) -> str:
    lines = [f"inputs {c.width}"]
    for i, g in enumerate(c.gates):
        op = g[0]
        if op in ("INPUT", "CONST"):
            lines.append(f"g{i} = {op} {g[1]}")
        else:
            lines.append(f"g{i} = {op} " + " ".join(f"g{a}" for a in g[1:]))
    lines.append("outputs " + " ".join(f"g{o}" for o in c.outputs))
    return "\n".join(lines) + "\n"


def _gate_ref(tok: str) -> int:
    if not tok.startswith("g"):
        raise CircuitError(f"expected a gate reference, got {tok!r}")
    return int(tok[1:])


def parse_netlist(text: str) -> BoolCircuit:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    return parse_netlist_lines(lines)


def parse_netlist_lines(lines: Sequence[str]) -> BoolCircuit:
    if not lines or not lines[0].startswith("inputs"):
        raise CircuitError("netlist must start with 'inputs <w>'")
    try:
        width = int(lines[0].split()[1])
        gates, outputs = [], None
        for ln in lines[1:]:
            parts = ln.split()
            if parts[0] == "outputs":
                outputs = [_gate_ref(t) for t in parts[1:]]
                continue
            if outputs is not None:
                raise CircuitError("gates after the outputs line")
            if len(parts) < 3 or parts[1] != "=":
                raise CircuitError(f"cannot parse gate line {ln!r}")
            idx = _gate_ref(parts[0])
            if idx != len(gates):
                raise CircuitError(f"gate g{idx} out of order (expected g{len(gates)})")
            op = parts[2].upper()
            if op in ("INPUT", "CONST"):
                gates.append((op, int(parts[3])))
            else:
                gates.append((op, *(_gate_ref(t) for t in parts[3:])))
    except (IndexError, ValueError) as exc:
        if isinstance(exc, CircuitError):
            raise
        raise CircuitError(f"malformed netlist: {exc}") from None
    if outputs is None:
        raise CircuitError("missing 'outputs' line")
    return BoolCircuit(width, tuple(gates), tuple(outputs))
