import pytest
from hypothesis import given

from strategies import graphs
from succinct_mso import cwd
from succinct_mso import fixtures as F
from succinct_mso.circuits import (
    DecodeGuardError, SuccinctGraph, decode, dump_succinct, encode_explicit, parse_succinct,
)
from succinct_mso.circuits.gadgets import equal
from succinct_mso.circuits.ir import Builder, CircuitError
from succinct_mso.structures import GraphFormatError, R2Graph, complete, graph_equal


def test_constant_one_is_looped_clique():
    b = Builder(2)
    sg = SuccinctGraph(2, b.build([b.const(1)]))
    assert graph_equal(decode(sg), complete(2))


def test_equality_gives_loops_only():
    b = Builder(4)
    sg = SuccinctGraph(4, b.build([equal(b, b.inputs[:2], b.inputs[2:])]))
    assert decode(sg).arcs == {("->", v, v) for v in range(4)}


def test_width_mismatch():
    b = Builder(3)
    with pytest.raises(CircuitError):
        SuccinctGraph(4, b.build([b.const(0)]))
    with pytest.raises(CircuitError):
        SuccinctGraph(0, Builder(2).build([0]))


def test_decode_guard():
    w = 7
    b = Builder(2 * w)
    sg = SuccinctGraph(100, b.build([b.const(0)]))
    with pytest.raises(DecodeGuardError):
        decode(sg, guard=50)
    assert decode(sg).n == 100


def test_single_vertex_uses_one_bit():
    g = R2Graph(1, set())
    sg = encode_explicit(g)
    assert sg.bits == 1 and sg.arc_circuit.width == 2
    assert graph_equal(decode(sg), g)


def test_four_vertex_example_round_trip():
    g = cwd.eval_decomposition(F.four_vertex_example()).graph
    assert graph_equal(decode(encode_explicit(g)), g)


@given(graphs(max_n=5))
def test_encode_decode_round_trip(g):
    if g.n == 0:
        return
    assert graph_equal(decode(encode_explicit(g)), g)


@given(graphs(max_n=3, symbols=("->", "<=")))
def test_round_trip_two_symbols(g):
    if g.n == 0:
        return
    sg = encode_explicit(g)
    assert sg.symbols == ("->", "<=")
    assert graph_equal(decode(parse_succinct(dump_succinct(sg))), g)


def test_unary_round_trip():
    g = R2Graph(3, {("->", 0, 2)}, {("P", 1)}, ("->",), ("P",))
    sg = encode_explicit(g)
    text = dump_succinct(sg)
    assert "unary sig=P" in text
    assert graph_equal(decode(parse_succinct(text)), g)


def test_file_header():
    sg = encode_explicit(complete(3))
    assert dump_succinct(sg).splitlines()[0] == "succinct N=3 sig=->"


@pytest.mark.parametrize("text", [
    "", "inputs 2\n", "succinct sig=->\ninputs 2\n", "succinct N=x\n",
    "succinct N=4 sig=->\ninputs 2\ng0 = CONST 1\ng1 = INPUT 0\ng2 = INPUT 1\noutputs g0\n",
])
def test_parse_errors(text):
    with pytest.raises(GraphFormatError):
        parse_succinct(text)
