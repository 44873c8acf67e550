import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import HochschildOracle, NormalizedBarOracle, table_of, truncated_table
from qcyclic.algcore import dual_numbers, rationals, truncated_polynomial, upper_triangular
from qcyclic.cychom import CyclicHomology, cp_window, hc_minus, hp, odd_column_acyclicity, row_acyclicity, sbi
from qcyclic.cyccat import MatrixCyclicModule, constant_module, free_cyclic, random_simplicial_module
from qcyclic.exactla import ComplexError, rank
from qcyclic.hhdecomp import hh

ALGEBRAS = {
    "Q": (rationals(), 5),
    "Q[e]": (dual_numbers(), 5),
    "Q[x]/x^3": (truncated_polynomial(3)[0], 3),
    "T2": (upper_triangular(2), 3),
}


@pytest.mark.parametrize("name", ALGEBRAS)
def test_hochschild_homology_matches_direct_complex(name):
    a, top = ALGEBRAS[name]
    e = CyclicHomology(hh(a, top + 1))
    assert [e.hh(n).dim for n in range(top + 1)] == HochschildOracle(table_of(a), a.dim).hh_dims(top)


@pytest.mark.parametrize("name", ALGEBRAS)
def test_cyclic_homology_matches_connes_complex(name):
    a, top = ALGEBRAS[name]
    e = CyclicHomology(hh(a, top + 1))
    assert [e.hc(n).dim for n in range(top + 1)] == HochschildOracle(table_of(a), a.dim).connes_hc_dims(top)


def test_dual_numbers_against_normalized_bar_complex():
    oracle = NormalizedBarOracle(truncated_table(2), 2, 0).hh_dims(5)
    e = CyclicHomology(hh(dual_numbers(), 6))
    assert [e.hh(n).dim for n in range(6)] == oracle == [2, 1, 1, 1, 1, 1]


def test_periodicity_operator_on_rationals_is_an_isomorphism():
    e = CyclicHomology(hh(rationals(), 8))
    assert [e.hc(n).dim for n in range(8)] == [1, 0, 1, 0, 1, 0, 1, 0]
    assert all(rank(e.S(n)) == 1 for n in (2, 4, 6))


def test_square_zero_fails_loudly_for_a_broken_module():
    good = constant_module(3)
    faces = {(q, i): good.face(q, i) for q in range(1, 4) for i in range(q + 1)}
    faces[(2, 0)] = faces[(2, 0)] * 2
    degens = {(q, i): good.degeneracy(q, i) for q in range(3) for i in range(q + 1)}
    broken = MatrixCyclicModule([1] * 4, faces, degens, {q: good.cyclic(q) for q in range(4)})
    with pytest.raises(ComplexError):
        cp_window(broken, 0, 3)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_square_zero_on_random_free_modules(seed):
    n, _ = random_simplicial_module(random.Random(seed), 4)
    w = cp_window(free_cyclic(n), -2, 5)
    assert w.check_square_zero()[0]


@pytest.mark.parametrize("name", ALGEBRAS)
def test_odd_columns_are_acyclic(name):
    a, top = ALGEBRAS[name]
    assert not any(odd_column_acyclicity(hh(a, top + 1)))


@pytest.mark.parametrize("name", ["Q", "Q[e]", "Q[x]/x^3"])
def test_sbi_is_exact(name):
    a, top = ALGEBRAS[name]
    report = sbi(hh(a, top + 1))
    assert report.nodes and all(node.exact for node in report.nodes)


@pytest.mark.parametrize("name,even", [("Q", 1), ("Q[e]", 1), ("T2", 2)])
def test_periodic_homology_of_small_algebras(name, even):
    a, _ = ALGEBRAS[name]
    r = hp(hh(a, 9), 3)
    assert r.status(0) == r.status(1) == "stabilized"
    assert (r.dim(0), r.dim(1)) == (even, 0)


def test_periodic_homology_is_undetermined_when_too_shallow():
    r = hp(hh(rationals(), 5), 3)
    assert r.status(0) != "stabilized"
    assert r.dim(0) is None


def test_periodic_homology_of_free_module_vanishes():
    r = hp(free_cyclic(constant_module(9)), 3)
    assert (r.dim(0), r.dim(1)) == (0, 0)


@pytest.mark.parametrize("n,expected", [(-4, 1), (-3, 0), (-2, 1), (-1, 0), (0, 1), (1, 0), (2, 0)])
def test_negative_cyclic_homology_of_rationals(n, expected):
    res = hc_minus(hh(rationals(), 12), n, 3)
    assert res.certified and res.dim == expected


def test_negative_cyclic_homology_needs_depth():
    assert not hc_minus(hh(rationals(), 3), 0, 3).certified


@pytest.mark.parametrize("name", ALGEBRAS)
def test_rows_are_acyclic_over_the_rationals(name):
    a, top = ALGEBRAS[name]
    assert all(pair == (0, 0) for pair in row_acyclicity(hh(a, top)))
