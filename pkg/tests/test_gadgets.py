from hypothesis import given, strategies as st

from succinct_mso.circuits.gadgets import (
    add, add_const, bits_for, clamped_gap, cnf_eval, div_mod_const, eq_const, gap_code,
    less_than, mux, num_copy_relative, sub, table_lookup,
)
from succinct_mso.circuits.ir import Builder, eval_circuit


def run(width_in, build, value_bits):
    """Build a circuit over width_in inputs and evaluate it on the given bits."""
    b = Builder(width_in)
    outs = build(b, b.inputs)
    return eval_circuit(b.build(outs), value_bits)


def to_bits(x, w):
    return [x >> j & 1 for j in range(w)]


def from_bits(bits):
    return sum(v << j for j, v in enumerate(bits))


def test_bits_for():
    assert [bits_for(n) for n in (1, 2, 3, 4, 5, 8, 9)] == [1, 1, 2, 2, 3, 3, 4]


def test_less_than_examples():
    for x, y, want in ((2, 5, 1), (5, 2, 0), (3, 3, 0)):
        out = run(6, lambda b, i: [less_than(b, i[:3], i[3:])], to_bits(x, 3) + to_bits(y, 3))
        assert out == [want]


def test_div_mod_example():
    out = run(3, lambda b, i: sum(div_mod_const(b, i, 3), []), to_bits(7, 3))
    assert from_bits(out[:3]) == 2 and from_bits(out[3:]) == 1


def test_num_copy_relative_examples():
    sizes, ell = (2, 3, 1), 2
    N = 2 + 2 * 3 + 1
    w = bits_for(N)
    for v, (blk, rel) in ((0, (0, 0)), (4, (1, 2)), (8, (3, 0))):
        def build(b, i):
            f = num_copy_relative(b, i, sizes, ell)
            return f["i"] + f["rel"]
        out = run(w, build, to_bits(v, w))
        assert from_bits(out[:w + 1]) == blk
        assert from_bits(out[w + 1:]) == rel


W = st.integers(1, 5)


@given(W, st.data())
def test_add_sub(w, data):
    x, y = data.draw(st.integers(0, (1 << w) - 1)), data.draw(st.integers(0, (1 << w) - 1))
    bits = to_bits(x, w) + to_bits(y, w)
    s = run(2 * w, lambda b, i: sum([add(b, i[:w], i[w:])[0], [add(b, i[:w], i[w:])[1]]], []), bits)
    assert from_bits(s) == x + y
    d = run(2 * w, lambda b, i: sum([sub(b, i[:w], i[w:])[0], [sub(b, i[:w], i[w:])[1]]], []), bits)
    assert from_bits(d[:w]) == (x - y) % (1 << w) and d[w] == int(x >= y)


@given(W, st.data())
def test_compare_and_equal(w, data):
    x, y = data.draw(st.integers(0, (1 << w) - 1)), data.draw(st.integers(0, (1 << w) - 1))
    out = run(w, lambda b, i: [less_than(b, i, [b.const(y >> j & 1) for j in range(w)]),
                               eq_const(b, i, y)], to_bits(x, w))
    assert out == [int(x < y), int(x == y)]


@given(W, st.integers(0, 40), st.data())
def test_add_const(w, c, data):
    x = data.draw(st.integers(0, (1 << w) - 1))
    out = run(w, lambda b, i: add_const(b, i, c), to_bits(x, w))
    assert from_bits(out) == (x + c) % (1 << w)


@given(W, st.integers(1, 9), st.data())
def test_div_mod(w, m, data):
    x = data.draw(st.integers(0, (1 << w) - 1))
    out = run(w, lambda b, i: sum(div_mod_const(b, i, m), []), to_bits(x, w))
    assert from_bits(out[:w]) == x // m
    assert from_bits(out[w:]) == x % m


@given(st.integers(0, 1), st.integers(0, 7), st.integers(0, 7))
def test_mux(sel, a, c):
    out = run(7, lambda b, i: mux(b, i[0], i[1:4], i[4:7]), [sel] + to_bits(a, 3) + to_bits(c, 3))
    assert from_bits(out) == (c if sel else a)


@given(st.integers(0, 9), st.integers(0, 9))
def test_clamped_gap(iu, iv):
    out = run(8, lambda b, i: clamped_gap(b, i[:4], i[4:]), to_bits(iu, 4) + to_bits(iv, 4))
    assert tuple(out) == gap_code(iv - iu)


@given(st.dictionaries(st.integers(0, 15), st.tuples(st.integers(0, 1), st.integers(0, 1))),
       st.integers(0, 15))
def test_table_lookup(table, key):
    out = run(4, lambda b, i: table_lookup(b, i, table, 2), to_bits(key, 4))
    assert tuple(out) == table.get(key, (0, 0))


@given(st.lists(st.lists(st.integers(1, 3).flatmap(
    lambda v: st.sampled_from([v, -v])), min_size=1, max_size=3), max_size=4),
    st.integers(0, 7))
def test_cnf_eval(clauses, a):
    out = run(3, lambda b, i: [cnf_eval(b, i, clauses)], to_bits(a, 3))
    want = all(any((a >> (abs(l) - 1) & 1) == (l > 0) for l in c) for c in clauses)
    assert out == [int(want)]


@given(st.integers(0, 3), st.integers(1, 3), st.integers(0, 3), st.integers(0, 5), st.data())
def test_num_copy_relative_property(S, R, E, ell, data):
    N = S + ell * R + E
    if N < 1:
        return
    v = data.draw(st.integers(0, N - 1))
    w = bits_for(N)

    def build(b, i):
        f = num_copy_relative(b, i, (S, R, E), ell)
        return [f["in_s"], f["in_e"], f["middle"]] + f["i"] + f["rel"]

    out = run(w, build, to_bits(v, w))
    if v < S:
        blk, rel = 0, v
    elif v >= S + ell * R:
        blk, rel = ell + 1, v - S - ell * R
    else:
        blk, rel = 1 + (v - S) // R, (v - S) % R
    assert out[:3] == [int(v < S), int(v >= S + ell * R), int(S <= v < S + ell * R)]
    assert from_bits(out[3:3 + w + 1]) == blk
    assert from_bits(out[4 + w:]) == rel


def test_uniform_gate_count():
    # constants become gates, so only widths matter
    def size(c):
        b = Builder(4)
        add_const(b, b.inputs, c)
        div_mod_const(b, b.inputs, 5)
        return len(b.gates)
    assert len({size(c) for c in range(16)}) == 1
