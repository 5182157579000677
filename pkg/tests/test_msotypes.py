import random

import pytest
from hypothesis import given

from strategies import decompositions, graphs
from succinct_mso import cwd
from succinct_mso import fixtures as F
from succinct_mso.mso.corpus import formula, load_corpus
from succinct_mso.mso.check import models
from succinct_mso.mso.syntax import rank
from succinct_mso.msotypes import (
    CompositionalityPrecondition, RankError, SaturationError, TypeGuardError,
    annotate_types, build_saturation, check_compositionality, saturating_graph,
    stabilization_count, type_models, type_of, union_type,
)
from succinct_mso.structures import (
    ColoredGraph, R2Graph, all_graphs, complete, copies, disjoint_union, edgeless,
)

LOOP = complete(1)
RANK2 = [e.formula for e in load_corpus().values()
         if rank(e.formula) <= 2 and e.signature.arc_symbols == ("->",)
         and not e.signature.unary_symbols]


def test_rank_one_examples():
    assert type_of(edgeless(1), 1) == type_of(edgeless(2), 1)
    assert type_of(edgeless(1), 1) != type_of(LOOP, 1)


def test_rank_zero_is_constant():
    assert len({type_of(g, 0) for n in range(3) for g in all_graphs(n)}) == 1


def test_type_models_examples():
    assert type_models(type_of(complete(2), 2), formula("psi1"))
    assert not type_models(type_of(edgeless(3), 2), formula("psi1"))
    with pytest.raises(RankError):
        type_models(type_of(complete(2), 1), formula("psi1"))


def test_guard():
    with pytest.raises(TypeGuardError):
        type_of(edgeless(9), 2)


def test_oracle_all_graphs_up_to_three():
    for n in range(4):
        for g in all_graphs(n):
            t = type_of(g, 2)
            for f in RANK2:
                assert type_models(t, f) == models(g, f)


def test_symmetry_reduction_agrees():
    rng = random.Random(5)
    for _ in range(40):
        n = rng.randint(2, 6)
        arcs = {("->", u, v) for u in range(n) for v in range(n) if rng.random() < 0.3}
        g = R2Graph(n, arcs)
        for m in (1, 2):
            a = type_of(g, m, symmetry=True)
            b = type_of(g, m, symmetry=False)
            assert a.root == b.root


def test_colors_are_atoms():
    g = edgeless(2)
    assert type_of(ColoredGraph(g, (0, 1), 2), 1) != type_of(ColoredGraph(g, (0, 0), 2), 1)


def test_digest_stable_format():
    d = type_of(complete(2), 2).digest()
    assert len(d) == 16 and int(d, 16) >= 0
    assert d == type_of(complete(2), 2).digest()


def test_union_examples():
    t1 = type_of(edgeless(1), 2)
    assert union_type(t1, t1) == type_of(edgeless(2), 2)
    empty = type_of(edgeless(0), 2)
    t = type_of(complete(2), 2)
    assert union_type(t, empty) == t
    with pytest.raises(RankError):
        union_type(type_of(LOOP, 1), t)


def test_union_well_defined_on_type_equal_pair():
    k3, k4 = complete(3), complete(4)
    assert type_of(k3, 2) == type_of(k4, 2)
    h = R2Graph(2, {("->", 0, 1)})
    assert union_type(type_of(k3, 2), type_of(h, 2)) == union_type(type_of(k4, 2), type_of(h, 2))


def test_stabilization_examples():
    assert stabilization_count(LOOP, 1) == 1
    assert stabilization_count(complete(2), 0) == 1
    N = stabilization_count(edgeless(1), 2)
    assert N == 2
    assert type_of(edgeless(N), 2) == type_of(edgeless(N + 1), 2)
    assert type_of(edgeless(N - 1), 2) != type_of(edgeless(N), 2)


def test_clique_and_edgeless_types_settle():
    ks = [type_of(complete(n), 2) for n in range(2, 9)]
    iss = [type_of(edgeless(n), 2) for n in range(2, 9)]
    assert len(set(ks)) == 1 and len(set(iss)) == 1 and ks[0] != iss[0]


@pytest.mark.parametrize("g", [edgeless(1), LOOP])
def test_saturation_single_member(g):
    sat = build_saturation([g], 1)
    omega = sat.omega
    assert omega.n == sat.counts[0]
    assert graph_like(omega, g, sat.counts[0])
    assert type_of(disjoint_union(g, omega), 1) == type_of(omega, 1)


def graph_like(omega, g, count):
    return omega.arcs == copies(g, count).arcs


def test_saturation_functional_universe():
    graphs_ = [cwd.eval_decomposition(c).graph for c in F.functional_universe()]
    chi = formula("deterministic")
    sat = build_saturation(graphs_, 2, chi)
    assert sat.chi_holds
    for g in graphs_:
        assert type_of(disjoint_union(g, sat.omega), 2, guard_for(sat)) == type_of(sat.omega, 2, guard_for(sat))
    assert saturating_graph(graphs_, 2, chi).n == sat.omega.n


def guard_for(sat):
    from succinct_mso.msotypes import SATURATION_GUARD
    return SATURATION_GUARD


def test_saturation_rejects_chi_violation():
    with pytest.raises(SaturationError):
        build_saturation([edgeless(1)], 2, formula("deterministic"))


def test_annotate_types_four_vertex_example():
    c = F.four_vertex_example()
    ann = annotate_types(c, 1)
    assert ann[()] == type_of(cwd.eval_decomposition(c), 1)
    leaf_paths = [p for p in ann if isinstance(cwd.subtree(c, p), cwd.Const)]
    assert len(leaf_paths) == 4
    # leaves carry their colors, so the distinct labels are (color, loop) combinations
    assert len({ann[p] for p in leaf_paths}) == 3


def test_annotate_types_four_vertex_example_uncolored():
    c = F.four_vertex_example()
    uncolored = {type_of(cwd.eval_decomposition(cwd.subtree(c, p)).graph, 1)
                 for p in annotate_types(c, 1) if isinstance(cwd.subtree(c, p), cwd.Const)}
    assert len(uncolored) == 2


def test_compositionality_examples():
    c1 = cwd.join([("->", "right", 0, 0)], cwd.const(0), cwd.MARKED)
    c2 = cwd.join([("->", "right", 0, 0)], cwd.const(0), cwd.const(0))
    assert check_compositionality(c1, c2, c2, 2)
    # the same graph built the other way round
    c2p = cwd.join([("->", "left", 0, 0)], cwd.const(0), cwd.const(0))
    c2p_graph = cwd.eval_decomposition(c2p).graph
    assert c2p_graph.arcs == {("->", 1, 0)}
    c2q = cwd.recolor((0,), cwd.join([("->", "right", 0, 0)], cwd.const(0), cwd.const(0)))
    assert check_compositionality(c1, c2, c2q, 2)
    with pytest.raises(CompositionalityPrecondition):
        check_compositionality(c1, c2, cwd.const(0), 2)


@given(graphs(max_n=4))
def test_rank_refinement(g):
    h = edgeless(g.n)
    if type_of(g, 2) == type_of(h, 2):
        assert type_of(g, 1) == type_of(h, 1)


@given(graphs(max_n=2), graphs(max_n=2), graphs(max_n=2))
def test_union_commutative_associative(a, b, c):
    ta, tb, tc = (type_of(x, 2) for x in (a, b, c))
    assert union_type(ta, tb) == union_type(tb, ta)
    assert union_type(union_type(ta, tb), tc) == union_type(ta, union_type(tb, tc))


@given(graphs(max_n=4))
def test_type_is_isomorphism_invariant(g):
    perm = list(range(g.n))[::-1]
    assert type_of(g, 2) == type_of(g.relabel(perm), 2)


@given(decompositions(k=2, max_leaves=3, marked=True), decompositions(k=2, max_leaves=2),
       decompositions(k=2, max_leaves=2))
def test_compositionality_property(c1, c2, c2p):
    t = type_of(cwd.eval_decomposition(c2, ("->",), 2), 2)
    tp = type_of(cwd.eval_decomposition(c2p, ("->",), 2), 2)
    if t == tp:
        assert check_compositionality(c1, c2, c2p, 2, 2, ("->",))
