import pytest
from hypothesis import given, strategies as st

from succinct_mso.circuits.cnf import (
    CnfError, CnfInstance, all_clauses, all_cnfs, dump_dimacs, parse_dimacs,
)


def test_holds_bit_convention():
    cnf = CnfInstance(2, ((1,), (-2,)))
    assert cnf.satisfying() == [1]
    assert cnf.holds(0b01) and not cnf.holds(0b11)


def test_empty_cnf_and_empty_clause():
    assert CnfInstance(2, ()).satisfying() == [0, 1, 2, 3]
    assert not CnfInstance(1, ((),)).satisfiable()


def test_bad_literals():
    with pytest.raises(CnfError):
        CnfInstance(2, ((3,),))
    with pytest.raises(CnfError):
        CnfInstance(2, ((0,),))


def test_dimacs_parse():
    cnf = parse_dimacs("c comment\np cnf 3 2\n1 -3 0\n2 0\n")
    assert cnf == CnfInstance(3, ((1, -3), (2,)))


@pytest.mark.parametrize("text", ["1 0\n", "p cnf 2 3\n1 0\n", "p dnf 2 1\n1 0\n", ""])
def test_dimacs_errors(text):
    with pytest.raises(CnfError):
        parse_dimacs(text)


def test_clause_counts():
    assert len(all_clauses(1)) == 3
    assert len(all_clauses(2)) == 15
    assert len(all_clauses(2, tautologies=False)) == 8
    # 1 empty + 3 single + 3 pairs + 1 triple
    assert sum(1 for _ in all_cnfs(1, 3)) == 8


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.lists(st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v])),
                                  min_size=1, max_size=3), max_size=5))))
def test_dimacs_round_trip(args):
    n, clauses = args
    cnf = CnfInstance(n, clauses)
    assert parse_dimacs(dump_dimacs(cnf)) == cnf
    assert cnf.satisfiable() == bool(cnf.satisfying())
