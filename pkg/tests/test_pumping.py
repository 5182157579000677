import pytest

from succinct_mso import cwd
from succinct_mso import fixtures as F
from succinct_mso.mso.check import RELAXED_GUARD, models
from succinct_mso.mso.corpus import formula
from succinct_mso.pumping import (
    NoRepeatedType, PumpError, PumpTriple, extract_pump, make_idempotent, quad_invariants,
    stable_pump, unstable_pump, verify_pair, verify_quad, verify_triple,
)


@pytest.fixture(scope="module")
def triples():
    return {fx.name: extract_pump(fx.decomposition, fx.phi, fx.m) for fx in F.pump_fixtures()}


@pytest.fixture(scope="module")
def quads():
    return {fx.name: stable_pump(fx.psi, fx.chi, fx.universe, fx.pump_models, fx.m)
            for fx in F.stable_fixtures()}


def test_const_alone_has_no_pump():
    with pytest.raises(NoRepeatedType):
        extract_pump(cwd.const(0, ["->"]), formula("has_loop"), 1)


def test_single_join_has_no_pump():
    with pytest.raises(NoRepeatedType):
        extract_pump(F.two_cycle(), formula("top"), 1)


def test_rejects_non_model():
    with pytest.raises(PumpError):
        extract_pump(F.edgeless_chain(4), formula("has_loop"), 1)


def test_rejects_rank_too_low():
    with pytest.raises(PumpError):
        extract_pump(F.tournament_chain(6), formula("psi1"), 1)


def test_triples_pump(triples):
    for t in triples.values():
        assert all(ok for _, ok in verify_triple(t, 4))
        s, r, e = t.sizes
        assert r > 0
        assert t.graph(0).n == s + e
        assert t.graph(3).n == s + 3 * r + e


def test_triple_pieces_are_marked_correctly(triples):
    for t in triples.values():
        assert cwd.is_marked(t.s) and cwd.is_marked(t.r) and not cwd.is_marked(t.e)


def test_make_idempotent_on_swap():
    r = cwd.recolor((1, 0), cwd.join([], cwd.const(0), cwd.MARKED))
    t = PumpTriple(cwd.MARKED, r, cwd.const(0), formula("top"), 1, 2, ("->",))
    assert not cwd.is_idempotent(cwd.recoloring(r, 2))
    t2 = make_idempotent(t)
    assert t2.power == 2
    assert cwd.size(t2.r) == 2 * cwd.size(r)
    assert cwd.is_idempotent(cwd.recoloring(t2.r, 2))


def test_make_idempotent_keeps_idempotent(triples):
    for t in triples.values():
        t2 = make_idempotent(t)
        assert cwd.is_idempotent(cwd.recoloring(t2.r, t2.k))
        assert all(ok for _, ok in verify_triple(t2, 2))


def test_stable_quads(quads):
    for q in quads.values():
        assert all(quad_invariants(q).values())
        assert q.k <= max(cwd.num_colors(c) for c in (q.s, q.e, q.g, q.b))
        for w, chi_ok, p_ok, want in verify_quad(q, 3):
            assert chi_ok and p_ok == want, w


def test_stable_branches(quads):
    # adjoining the saturating graph adds an arc, so psi1 is forced
    assert quads["psi1-top"].negated
    assert quads["psi1-top"].branch == "not-psi"
    # every functional universe member with a loop forces has_loop
    assert quads["loop-deterministic"].negated


def test_stable_quad_good_and_bad_words(quads):
    q = quads["loop-deterministic"]
    assert models(q.graph(["g"]), q.psi_prime, RELAXED_GUARD)
    assert not models(q.graph(["b"]), q.psi_prime, RELAXED_GUARD)
    assert models(q.graph(["b"]), q.chi, RELAXED_GUARD)


def test_stable_pump_rejects_non_closed_universe():
    # two disjoint one-point orders are not a total order
    universe = [cwd.const(0, ["<="])]
    with pytest.raises(PumpError, match="closed under disjoint union"):
        stable_pump(formula("top"), formula("total_order"), universe)


def test_unstable_pair_sizes_match():
    p = unstable_pump(formula("psi1"), formula("xi"), F.clique_pairs())
    for ell in range(4):
        a, b = p.sizes(ell)
        assert a == b
    assert cwd.size(p.pos.r) > 0 and cwd.size(p.neg.r) > 0
    assert all(all(row[1:]) for row in verify_pair(p, 3))


def test_unstable_pair_rejects_unequal_sizes():
    with pytest.raises(PumpError):
        unstable_pump(formula("psi1"), formula("xi"), [(F.clique_chain(3), F.edgeless_chain(4))])
