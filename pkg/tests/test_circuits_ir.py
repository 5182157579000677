import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import naive_circuit
from succinct_mso.circuits.ir import (
    BoolCircuit, Builder, CircuitError, dump_netlist, eval_batch, eval_circuit,
    gate_counts, parse_netlist,
)


def xor_circuit():
    b = Builder(2)
    x, y = b.inputs
    return b.build([b.xor(x, y), b.and_(x, y)])


@pytest.mark.parametrize("bits,want", [((0, 0), [0, 0]), ((1, 0), [1, 0]),
                                      ((0, 1), [1, 0]), ((1, 1), [0, 1])])
def test_eval_examples(bits, want):
    assert eval_circuit(xor_circuit(), bits) == want


def test_constant_and_not():
    b = Builder(0)
    one = b.const(1)
    c = b.build([one, b.not_(one)])
    assert eval_circuit(c, []) == [1, 0]


def test_validation():
    with pytest.raises(CircuitError):
        BoolCircuit(1, (("INPUT", 0), ("AND", 0, 1)), (1,))
    with pytest.raises(CircuitError):
        BoolCircuit(1, (("INPUT", 3),), (0,))
    with pytest.raises(CircuitError):
        BoolCircuit(1, (("INPUT", 0),), ())
    with pytest.raises(CircuitError):
        BoolCircuit(0, (("CONST", 2),), (0,))
    with pytest.raises(CircuitError):
        eval_circuit(xor_circuit(), [1])


def test_netlist_round_trip_and_format():
    c = xor_circuit()
    text = dump_netlist(c)
    assert text.splitlines()[0] == "inputs 2"
    assert text.splitlines()[-1].startswith("outputs ")
    assert parse_netlist(text) == c
    assert parse_netlist("# comment\n" + text) == c


@pytest.mark.parametrize("text", [
    "", "gates 2\n", "inputs 1\ng0 = INPUT 0\n", "inputs 1\ng1 = INPUT 0\noutputs g1\n",
    "inputs 1\ng0 = INPUT 0\noutputs g0\ng1 = NOT g0\n", "inputs 1\ng0 = XOR g0\noutputs g0\n",
])
def test_netlist_errors(text):
    with pytest.raises(CircuitError):
        parse_netlist(text)


def test_gate_counts():
    counts = gate_counts(xor_circuit())
    assert counts["INPUT"] == 2
    assert sum(counts.values()) == xor_circuit().size


@st.composite
def circuits(draw):
    w = draw(st.integers(0, 4))
    b = Builder(w)
    for _ in range(draw(st.integers(1, 12))):
        cur = len(b.gates)
        ops = ["CONST"] + (["NOT", "AND", "OR"] if cur else [])
        op = draw(st.sampled_from(ops))
        if op == "CONST":
            b.const(draw(st.integers(0, 1)))
        elif op == "NOT":
            b.not_(draw(st.integers(0, cur - 1)))
        else:
            a, c = draw(st.integers(0, cur - 1)), draw(st.integers(0, cur - 1))
            (b.and_ if op == "AND" else b.or_)(a, c)
    n = len(b.gates)
    outs = draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=3))
    return b.build(outs)


@given(circuits(), st.data())
def test_eval_matches_naive_oracle(c, data):
    bits = data.draw(st.lists(st.integers(0, 1), min_size=c.width, max_size=c.width))
    assert eval_circuit(c, bits) == naive_circuit(c, bits)


@given(circuits())
def test_batch_matches_single(c):
    rows = np.array([[x >> j & 1 for j in range(c.width)] for x in range(1 << c.width)],
                    dtype=np.uint8).reshape(1 << c.width, c.width)
    out = eval_batch(c, rows)
    for x, row in enumerate(rows):
        assert list(out[x]) == eval_circuit(c, list(row))


@given(circuits())
def test_netlist_round_trip_property(c):
    assert parse_netlist(dump_netlist(c)) == c


def test_embed():
    inner = xor_circuit()
    b = Builder(3)
    x, y, z = b.inputs
    outs = b.embed(inner, [x, z])
    c = b.build(outs)
    assert eval_circuit(c, [1, 0, 1]) == [0, 1]
    assert eval_circuit(c, [1, 1, 0]) == [1, 0]
