import pytest
from hypothesis import given, strategies as st

import oracles
from strategies import graphs, sentences
from succinct_mso.mso.check import (
    OpenFormulaError, SizeGuard, SizeGuardError, classify_pair, models, spectrum_sample,
)
from succinct_mso.mso.corpus import formula, load_corpus
from succinct_mso.mso.parse import FormulaSyntaxError, UnboundVariableError, parse
from succinct_mso.mso.syntax import And, Arc, ExistsV, Not, Or, rank, to_text
from succinct_mso.structures import (
    R2Graph, all_graphs, complete, cycle, directed_path, edgeless,
)

PSI1_TEXT = "exists x. exists y. arc(->, x, y)"


def test_parse_psi1():
    assert parse(PSI1_TEXT) == ExistsV("x", ExistsV("y", Arc("->", "x", "y")))
    assert formula("psi1") == parse(PSI1_TEXT)


def test_unbound_variable_is_an_error():
    with pytest.raises(UnboundVariableError):
        parse("arc(->, x, y)")


def test_syntax_error_has_position():
    with pytest.raises(FormulaSyntaxError) as err:
        parse("exists x. arc(->, x")
    assert err.value.pos > 0


def test_ranks():
    assert rank(formula("psi1")) == 2
    assert rank(parse("forall x. x = x")) == 1
    assert rank(formula("bipartite")) == 3
    assert rank(Arc("->", "x", "x")) == 0


def test_corpus_recorded_ranks_match():
    for name, entry in load_corpus().items():
        assert entry.recorded_rank == rank(entry.formula), name


def test_basic_models():
    assert models(complete(2), formula("psi1"))
    assert models(cycle(4), formula("bipartite"))
    assert not models(cycle(3), formula("bipartite"))
    assert models(complete(1), formula("has_loop"))
    assert not models(edgeless(3), formula("has_loop"))


def test_open_formula_rejected():
    with pytest.raises(OpenFormulaError):
        models(complete(1), Arc("->", "x", "x"))


def test_size_guard():
    with pytest.raises(SizeGuardError):
        models(edgeless(9), formula("bipartite"))
    assert models(edgeless(9), formula("bipartite"), SizeGuard(set_vertices=9))


def test_spectrum():
    graphs_le2 = [g for n in (1, 2) for g in all_graphs(n)]
    assert spectrum_sample(formula("psi1"), graphs_le2) == {1, 2}
    assert spectrum_sample(parse("exists x. !(x = x)"), graphs_le2) == set()
    both = And(formula("bipartite"), formula("cycle"))
    assert spectrum_sample(both, [cycle(n) for n in range(3, 9)]) == {4, 6, 8}


def test_classify_pair_xi():
    universe = [h for n in range(1, 6) for h in (complete(n), edgeless(n))]
    rep = classify_pair(formula("psi1"), formula("xi"), universe)
    assert rep.shared_sizes == frozenset(range(1, 6))
    assert classify_pair(formula("psi1"), formula("top"), [edgeless(n) for n in range(4)]).models == 0
    cyc = classify_pair(formula("bipartite"), formula("cycle"), [cycle(n) for n in range(3, 9)])
    assert cyc.shared_sizes == frozenset()


def test_cycle_restriction_readings():
    # the literal reading also accepts paths; the intended one does not
    p = R2Graph(4, directed_path(4).arcs | {("->", v, u) for _, u, v in directed_path(4).arcs})
    assert models(p, formula("cycle_literal"))
    assert not models(p, formula("cycle"))
    assert all(models(cycle(n), formula("cycle")) for n in range(3, 9))


def test_min_loop_and_total_order():
    n = 3
    order = R2Graph(n, {("<=", u, v) for u in range(n) for v in range(n) if u <= v}
                    | {("->", 0, 0)}, arc_symbols=("->", "<="))
    assert models(order, formula("total_order"))
    assert models(order, formula("min_loop"))


def test_corpus_against_naive_oracle():
    for name, entry in load_corpus().items():
        sig = entry.signature
        syms = sig.arc_symbols
        for n in range(0, 3):
            for g in all_graphs(n, syms):
                if sig.unary_symbols:
                    g = R2Graph(g.n, g.arcs, {(sig.unary_symbols[0], 0)} if g.n else set(),
                                syms, sig.unary_symbols)
                assert models(g, entry.formula) == oracles.holds(g, entry.formula), name


@given(graphs(max_n=3), sentences())
def test_models_matches_naive_oracle(g, f):
    assert models(g, f) == oracles.holds(g, f)


@given(graphs(max_n=3), sentences(3), sentences(3))
def test_boolean_connectives(g, f, h):
    assert models(g, Not(f)) == (not models(g, f))
    assert models(g, And(f, h)) == (models(g, f) and models(g, h))
    assert models(g, Or(f, h)) == (models(g, f) or models(g, h))


@given(sentences())
def test_print_parse_round_trip(f):
    assert parse(to_text(f)) == f


@given(sentences(), st.sampled_from(["exists", "forall", "existsS", "forallS"]))
def test_rank_of_quantifier(f, q):
    var = "X_new" if q.endswith("S") else "x_new"
    g = parse(f"{q} {var}. ({to_text(f)})")
    assert rank(g) == rank(f) + 1
