"""Pumping constructions on clique decompositions.

* :func:`extract_pump` cuts a decomposition of a model at two join nodes of
  equal type into start / repeat / end pieces.
* :func:`stable_pump` builds start / good / bad / end pieces from a pump and
  a saturating graph, for restrictions closed under disjoint union.
* :func:`unstable_pump` pumps a model and a counter-model of the same size in
  parallel so that every pumped pair keeps equal sizes.

Every construction is checked by brute-force model checking on small words.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace as dc_replace
from typing import Sequence

from . import cwd
from .mso.check import RELAXED_GUARD, SizeGuard, models
from .mso.syntax import And, Formula, Not, rank, symbols_used
from .msotypes import annotate_types, build_saturation
from .structures import DEFAULT_ARC, disjoint_union, graph_equal

PUMP_GUARD = SizeGuard(set_vertices=12, fo_vertices=4096)
L_TEST = 3


class PumpError(RuntimeError):
    pass


class NoRepeatedType(PumpError):
    pass


class PumpVerificationError(PumpError):
    pass


def formula_symbols(*parts) -> tuple:
    """Sorted arc symbols used by decompositions and formulas (``->`` if none)."""
    syms = set()
    for p in parts:
        if isinstance(p, Formula):
            syms |= symbols_used(p)[0]
        elif p is not None:
            syms |= cwd.arc_symbols(p)
    return tuple(sorted(syms)) or (DEFAULT_ARC,)


@dataclass(frozen=True)
class PumpTriple:
    s: object
    r: object
    e: object
    phi: Formula
    m: int
    k: int
    symbols: tuple
    source_size: int = 0
    power: int = 1

    @property
    def sizes(self) -> tuple:
        return (cwd.size(self.s), cwd.size(self.r), cwd.size(self.e))

    def gamma(self) -> dict:
        return {"s": self.s, "r": self.r, "e": self.e}

    def word(self, ell: int) -> list:
        return ["s"] + ["r"] * ell + ["e"]

    def graph(self, ell: int):
        return cwd.eval_delta_blocks(self.gamma(), self.word(ell), self.symbols, self.k)


def verify_triple(t: PumpTriple, L: int = L_TEST, guard: SizeGuard = RELAXED_GUARD) -> list:
    """[(ell, holds)] for ell in 0..L."""
    return [(ell, models(t.graph(ell), t.phi, guard)) for ell in range(L + 1)]


def _join_paths(c):
    out = []
    stack = [(c, ())]
    while stack:
        nd, path = stack.pop()
        if isinstance(nd, cwd.Join):
            out.append(path)
        for i, ch in enumerate(cwd.children(nd)):
            stack.append((ch, path + (i,)))
    return out


def extract_pump(c, phi: Formula, m: int, k: int | None = None, symbols=None,
                 L_test: int = L_TEST, guard: SizeGuard = PUMP_GUARD,
                 check_guard: SizeGuard = RELAXED_GUARD) -> PumpTriple:
    """Cut c at an ancestor/descendant pair of join nodes of equal rank-m type.

    Among all such pairs the one with the fewest repeat leaves wins, then the
    deepest one.  With ``v`` above ``v2``: ``s`` is c with ``v`` replaced by
    the marked leaf, ``e`` is the subtree at ``v`` and ``r`` is that subtree
    with ``v2`` replaced by the marked leaf.
    """
    if cwd.is_marked(c):
        raise PumpError("extract_pump needs an unmarked decomposition")
    if rank(phi) > m:
        raise PumpError(f"rank of the formula ({rank(phi)}) exceeds m={m}")
    k = cwd.num_colors(c) if k is None else k
    symbols = tuple(symbols) if symbols else formula_symbols(c, phi)
    source = cwd.eval_decomposition(c, symbols, k)
    if not models(source.graph, phi, check_guard):
        raise PumpError("the source decomposition is not a model of the formula")
    joins = _join_paths(c)
    if len(joins) < 2:
        raise NoRepeatedType("fewer than two join nodes")
    types = annotate_types(c, m, k, symbols, guard)
    best = None
    for p in joins:
        for q in joins:
            if len(q) > len(p) and q[:len(p)] == p and types[p] == types[q]:
                rsize = cwd.size(cwd.subtree(c, p)) - cwd.size(cwd.subtree(c, q))
                score = (rsize, -len(q), q, p)
                if best is None or score < best:
                    best = score
    if best is None:
        raise NoRepeatedType("no two join nodes on a branch share a type")
    _, _, q, p = best
    e = cwd.subtree(c, p)
    s = cwd.replace(c, p, cwd.MARKED)
    r = cwd.replace(e, q[len(p):], cwd.MARKED)
    t = PumpTriple(s, r, e, phi, m, k, symbols, source.n)
    if L_test >= 0:
        failed = [ell for ell, ok in verify_triple(t, L_test, check_guard) if not ok]
        if failed:
            raise PumpVerificationError(f"pumped graphs fail the formula at ell={failed}")
    return t


def make_idempotent(t: PumpTriple) -> PumpTriple:
    """Replace r by its self-gluing whose recoloring map is idempotent."""
    f = cwd.recoloring(t.r, t.k)
    p = cwd.idempotent_power(f)
    r = cwd.self_glue(t.r, p) if p > 1 else t.r
    out = dc_replace(t, r=r, power=t.power * p)
    assert cwd.is_idempotent(cwd.recoloring(out.r, t.k))
    return out


# -- stable pumping -----------------------------------------------------------

@dataclass(frozen=True)
class PumpQuad:
    s: object
    g: object
    b: object
    e: object
    psi: Formula
    chi: Formula
    negated: bool          # True when the pumped side is the negation of psi
    k: int                 # colors used by the pieces (one more than the inputs)
    symbols: tuple
    omega_size: int = 0
    omega_copies: int = 0
    repeat_copies: int = 0
    triple: PumpTriple | None = field(default=None, compare=False, repr=False)

    @property
    def psi_prime(self) -> Formula:
        return Not(self.psi) if self.negated else self.psi

    @property
    def branch(self) -> str:
        return "not-psi" if self.negated else "psi"

    def gamma(self) -> dict:
        return {"s": self.s, "g": self.g, "b": self.b, "e": self.e}

    def decomposition(self, w: Sequence[str]):
        return cwd.delta(self.gamma(), ["s", *w, "e"])

    def graph(self, w: Sequence[str]):
        return cwd.eval_delta_blocks(self.gamma(), ["s", *w, "e"], self.symbols, self.k)


def words(alphabet: Sequence[str], max_len: int):
    for n in range(max_len + 1):
        for w in itertools.product(alphabet, repeat=n):
            yield list(w)


def verify_quad(q: PumpQuad, L: int = L_TEST, guard: SizeGuard = RELAXED_GUARD) -> list:
    """[(word, chi holds, psi' holds, expected psi')] for all words up to L."""
    out = []
    for w in words("gb", L):
        g = q.graph(w)
        out.append(("".join(w), models(g, q.chi, guard), models(g, q.psi_prime, guard),
                    "b" not in w))
    return out


def quad_invariants(q: PumpQuad) -> dict:
    fg = cwd.recoloring(q.g, q.k)
    fb = cwd.recoloring(q.b, q.k)
    return {
        "equal_sizes": cwd.size(q.g) == cwd.size(q.b),
        "non_empty": cwd.size(q.g) > 0 and cwd.size(q.b) > 0,
        "equal_recoloring": fg == fb,
        "idempotent": cwd.is_idempotent(fg),
    }


def _union_stability_spot_check(graphs, chi, guard, limit=6):
    for g, h in itertools.islice(itertools.combinations_with_replacement(graphs, 2), limit):
        if not models(disjoint_union(g, h), chi, guard):
            raise PumpError("restriction is not closed under disjoint union on the universe")


def stable_pump(psi: Formula, chi: Formula, universe: Sequence, pump_models: Sequence | None = None,
                m: int | None = None, k: int | None = None, L_test: int = L_TEST,
                type_guard: SizeGuard = PUMP_GUARD,
                check_guard: SizeGuard = RELAXED_GUARD) -> PumpQuad:
    """Good/bad pumping pieces for a restriction closed under disjoint union.

    ``universe`` holds decompositions of models of chi; the saturating graph
    is built from their graphs at rank ``m`` (default: rank of psi, at least
    1).  ``pump_models`` (default: the universe) are decompositions searched
    for a pumpable model of psi' and chi, cut at rank max(m, rank(psi' & chi)).
    """
    universe = list(universe)
    pump_models = universe if pump_models is None else list(pump_models)
    if not universe:
        raise PumpError("empty universe")
    m = max(rank(psi), 1) if m is None else m
    if m < rank(psi):
        raise PumpError("saturation rank must be at least the rank of psi")
    k = k or max(cwd.num_colors(c) for c in universe + pump_models)
    symbols = formula_symbols(psi, chi, *universe, *pump_models)
    graphs = [cwd.eval_decomposition(c, symbols, k).graph for c in universe]
    _union_stability_spot_check(graphs, chi, check_guard)
    sat = build_saturation(graphs, m, chi)
    omega = sat.omega
    if not sat.chi_holds:
        raise PumpError("the saturating graph violates the restriction")

    # branch: does adjoining Omega force psi or its negation?
    forced = {models(disjoint_union(g, omega), psi, check_guard) for g in graphs}
    if len(forced) != 1:
        raise PumpError("saturating graph does not decide psi on the universe")
    negated = forced.pop()
    psi_prime = Not(psi) if negated else psi
    phi = And(psi_prime, chi)
    m_cut = max(m, rank(phi))

    triple, errors = None, []
    for c in pump_models:
        g = cwd.eval_decomposition(c, symbols, k).graph
        if not models(g, phi, check_guard):
            continue
        try:
            triple = extract_pump(c, phi, m_cut, k, symbols, L_test, type_guard, check_guard)
            break
        except NoRepeatedType as exc:
            errors.append(str(exc))
    if triple is None:
        raise NoRepeatedType("no pump model could be cut: " + "; ".join(errors or ["none fit"]))
    triple = make_idempotent(triple)
    r1 = triple.r
    r1_size = cwd.size(r1)

    # the saturating graph as a decomposition built from universe pieces
    pieces = []
    for rep, count in zip(sat.representatives, sat.counts):
        dec = next(c for c, g in zip(universe, graphs) if graph_equal(g, rep))
        pieces.extend([dec] * count)
    omega_dec = cwd.disjoint_chain(pieces)
    assert graph_equal(cwd.eval_decomposition(omega_dec, symbols, k).graph, omega)
    omega_prime = cwd.disjoint_chain([omega_dec] * r1_size)
    r2 = cwd.self_glue(r1, omega.n)

    kk = k + 1
    wide = lambda c: cwd.widen(c, kk)  # noqa: E731
    c_g = wide(cwd.glue(r2, r2))
    c_b = cwd.Join(frozenset(), wide(r2), cwd.Recolor((k,) * kk, wide(omega_prime)))
    q = PumpQuad(wide(triple.s), c_g, c_b, wide(triple.e), psi, chi, negated, kk, symbols,
                 omega.n, r1_size, omega.n, triple)
    inv = quad_invariants(q)
    if not all(inv.values()):
        raise PumpVerificationError(f"quad invariants violated: {inv}")
    if L_test >= 0:
        bad = [w for w, c_ok, p_ok, want in verify_quad(q, L_test, check_guard)
               if not c_ok or p_ok != want]
        if bad:
            raise PumpVerificationError(f"quad verification failed on words {bad}")
    return q


# -- parallel pumping -----------------------------------------------------------

@dataclass(frozen=True)
class PumpPair:
    pos: PumpTriple
    neg: PumpTriple

    def sizes(self, ell: int) -> tuple:
        a = self.pos.sizes
        b = self.neg.sizes
        return (a[0] + ell * a[1] + a[2], b[0] + ell * b[1] + b[2])


def verify_pair(p: PumpPair, L: int = L_TEST, guard: SizeGuard = RELAXED_GUARD) -> list:
    """[(ell, positive side ok, negative side ok, sizes equal)]."""
    out = []
    for ell in range(L + 1):
        gp, gn = p.pos.graph(ell), p.neg.graph(ell)
        out.append((ell, models(gp, p.pos.phi, guard), models(gn, p.neg.phi, guard),
                    gp.n == gn.n))
    return out


def unstable_pump(psi: Formula, chi: Formula, pairs: Sequence, m: int | None = None,
                  k: int | None = None, L_test: int = L_TEST,
                  type_guard: SizeGuard = PUMP_GUARD,
                  check_guard: SizeGuard = RELAXED_GUARD) -> PumpPair:
    """Pump a model of psi & chi and an equal-size model of !psi & chi together.

    ``pairs`` holds (decomposition, decomposition) of equal size; the first
    pair that can be cut on both sides is used.
    """
    m = max(rank(psi), rank(chi)) if m is None else m
    pos_phi, neg_phi = And(psi, chi), And(Not(psi), chi)
    errors = []
    for cp, cn in pairs:
        if cwd.size(cp) != cwd.size(cn):
            raise PumpError("paired models must have equal size")
        kk = k or max(cwd.num_colors(cp), cwd.num_colors(cn))
        symbols = formula_symbols(psi, chi, cp, cn)
        try:
            tp = extract_pump(cp, pos_phi, m, kk, symbols, L_test, type_guard, check_guard)
            tn = extract_pump(cn, neg_phi, m, kk, symbols, L_test, type_guard, check_guard)
        except NoRepeatedType as exc:
            errors.append(str(exc))
            continue
        tp, tn = make_idempotent(tp), make_idempotent(tn)
        rp, rn = cwd.size(tp.r), cwd.size(tn.r)
        tp2 = dc_replace(tp, r=cwd.self_glue(tp.r, rn), power=tp.power * rn)
        tn2 = dc_replace(tn, r=cwd.self_glue(tn.r, rp), power=tn.power * rp)
        pair = PumpPair(tp2, tn2)
        if L_test >= 0:
            bad = [row for row in verify_pair(pair, L_test, check_guard) if not all(row[1:])]
            if bad:
                raise PumpVerificationError(f"pair verification failed: {bad}")
        return pair
    raise NoRepeatedType("no pair could be cut on both sides: " + "; ".join(errors))
