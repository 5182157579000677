"""Arithmetic gadgets over little-endian bit vectors of gate ids.

Every gadget whose arguments may depend on the pump length is uniform: its
gate count depends only on the bit widths involved, never on the values of
the constants (constants become CONST gates).  This keeps the total gate
count of a pump circuit an affine function of the vertex bit-width.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .ir import Builder, CircuitError

Bits = list


def bits_for(n: int) -> int:
    """Bits needed to encode 0..n-1, at least one."""
    return max(1, (n - 1).bit_length())


def const_bits(b: Builder, value: int, width: int) -> Bits:
    if value < 0 or value >> width:
        raise CircuitError(f"constant {value} does not fit in {width} bits")
    return [b.const(value >> i & 1) for i in range(width)]


def fit(b: Builder, x: Sequence[int], width: int) -> Bits:
    """Zero-extend or truncate to ``width`` bits."""
    x = list(x[:width])
    while len(x) < width:
        x.append(b.const(0))
    return x


def add(b: Builder, x: Sequence[int], y: Sequence[int], carry: int | None = None):
    """Ripple-carry sum of equal-width vectors: (sum bits, carry out)."""
    if len(x) != len(y):
        raise CircuitError("add: width mismatch")
    c = b.const(0) if carry is None else carry
    out = []
    for a, d in zip(x, y):
        t = b.xor(a, d)
        out.append(b.xor(t, c))
        c = b.or_(b.and_(a, d), b.and_(c, t))
    return out, c


def add_const(b: Builder, x: Sequence[int], value: int) -> Bits:
    """x + value modulo 2^len(x)."""
    return add(b, x, const_bits(b, value % (1 << len(x)), len(x)))[0]


def sub(b: Builder, x: Sequence[int], y: Sequence[int]):
    """(x - y mod 2^w, no_borrow) where no_borrow means x >= y."""
    ny = [b.not_(a) for a in y]
    return add(b, x, ny, b.const(1))


def sub_const(b: Builder, x: Sequence[int], value: int):
    return sub(b, x, const_bits(b, value, len(x)))


def less_than(b: Builder, x: Sequence[int], y: Sequence[int]) -> int:
    width = max(len(x), len(y))
    _, no_borrow = sub(b, fit(b, x, width), fit(b, y, width))
    return b.not_(no_borrow)


def less_than_const(b: Builder, x: Sequence[int], value: int) -> int:
    return less_than(b, x, const_bits(b, value, len(x)))


comparator_const = less_than_const


def equal(b: Builder, x: Sequence[int], y: Sequence[int]) -> int:
    if len(x) != len(y):
        raise CircuitError("equal: width mismatch")
    return b.all_of([b.not_(b.xor(a, d)) for a, d in zip(x, y)])


def eq_const(b: Builder, x: Sequence[int], value: int) -> int:
    return equal(b, x, const_bits(b, value, len(x)))


def mux(b: Builder, sel: int, a: Sequence[int], c: Sequence[int]) -> Bits:
    """``a`` when sel is 0, ``c`` when sel is 1 (bitwise)."""
    if len(a) != len(c):
        raise CircuitError("mux: width mismatch")
    ns = b.not_(sel)
    return [b.or_(b.and_(ns, x), b.and_(sel, y)) for x, y in zip(a, c)]


def mux_bit(b: Builder, sel: int, a: int, c: int) -> int:
    return mux(b, sel, [a], [c])[0]


def div_mod_const(b: Builder, x: Sequence[int], m: int):
    """Restoring division by a constant m >= 1: (quotient bits, remainder bits)."""
    if m < 1:
        raise CircuitError("division by a constant below 1")
    R = m.bit_length()
    rem = const_bits(b, 0, R)
    q = [0] * len(x)
    for i in reversed(range(len(x))):
        t = [x[i]] + rem            # 2*rem + x_i, R+1 bits
        ge = b.not_(less_than_const(b, t, m))
        diff, _ = sub_const(b, t, m)
        rem = mux(b, ge, t[:R], diff[:R])
        q[i] = ge
    return q, rem


def table_lookup(b: Builder, key: Sequence[int], table: Mapping[int, Sequence[int]],
                 out_width: int) -> Bits:
    """Sum-of-minterms realization of a finite table; absent keys give 0."""
    neg = [b.not_(k) for k in key]
    minterms: dict[int, int] = {}
    for value in sorted(table):
        bits = table[value]
        if not any(bits):
            continue
        lits = [key[i] if value >> i & 1 else neg[i] for i in range(len(key))]
        minterms[value] = b.all_of(lits)
    outs = []
    for j in range(out_width):
        terms = [g for v, g in minterms.items() if table[v][j]]
        outs.append(b.any_of(terms))
    return outs


def num_copy_relative(b: Builder, v: Sequence[int], sizes: tuple, ell: int) -> dict:
    """Block index and offset of vertex ``v`` in the layout s r^ell e.

    Returns gate ids for ``in_s``, ``in_e``, ``middle``, the block index ``i``
    (width w+1), the quotient ``q`` = i-1 for middle blocks, and ``rel``.
    """
    S, Rr, E = sizes
    if Rr < 1:
        raise CircuitError("the repeat piece must be non-empty")
    w = len(v)
    v1 = fit(b, v, w + 1)
    boundary = S + ell * Rr
    in_s = less_than_const(b, v1, S)
    in_e = b.not_(less_than_const(b, v1, boundary))
    middle = b.and_(b.not_(in_s), b.not_(in_e))
    t, _ = sub_const(b, v1, S)
    q, rem = div_mod_const(b, t, Rr)
    i_mid = add_const(b, q, 1)
    i_e = const_bits(b, ell + 1, w + 1)
    i_s = const_bits(b, 0, w + 1)
    i = mux(b, in_s, mux(b, in_e, i_mid, i_e), i_s)
    rw = bits_for(max(S, Rr, E, 1))
    rel_s = fit(b, v1, rw)
    rel_e = fit(b, sub_const(b, v1, boundary)[0], rw)
    rel_mid = fit(b, rem, rw)
    rel = mux(b, in_s, mux(b, in_e, rel_mid, rel_e), rel_s)
    return {"in_s": in_s, "in_e": in_e, "middle": middle, "i": i, "q": q, "rel": rel}


def clamped_gap(b: Builder, iu: Sequence[int], iv: Sequence[int]) -> Bits:
    """Bits (forward, |gap| == 1, |gap| >= 2) of the gap iv - iu clamped to [-2, 2]."""
    forward = b.not_(less_than(b, iv, iu))
    d_fwd, _ = sub(b, iv, iu)
    d_bwd, _ = sub(b, iu, iv)
    mag = mux(b, forward, d_bwd, d_fwd)
    ge2 = b.not_(less_than_const(b, mag, 2))
    eq1 = eq_const(b, mag, 1)
    return [forward, eq1, ge2]


def gap_code(gap: int) -> tuple:
    """Companion of :func:`clamped_gap` for an integer gap."""
    g = max(-2, min(2, gap))
    return (1 if g >= 0 else 0, 1 if abs(g) == 1 else 0, 1 if abs(g) == 2 else 0)


def cnf_eval(b: Builder, x: Sequence[int], clauses) -> int:
    """Truth of a CNF (DIMACS-style signed literals) on the bits x; x_j is bit j-1."""
    neg_cache: dict[int, int] = {}

    def lit(l):
        g = x[abs(l) - 1]
        if l > 0:
            return g
        if g not in neg_cache:
            neg_cache[g] = b.not_(g)
        return neg_cache[g]

    return b.all_of([b.any_of([lit(l) for l in clause]) for clause in clauses])
