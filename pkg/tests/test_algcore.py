from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qcyclic.algcore import (
    Algebra,
    AlgebraError,
    AlgebraMap,
    Bimodule,
    Ideal,
    associated_graded,
    dual_numbers,
    ideal_power,
    product_algebra,
    quotient_by_ideal,
    rationals,
    split_square,
    square_zero_extension,
    truncated_polynomial,
    upper_triangular,
    validate_algebra,
)
from qcyclic.exactla import SparseMatrix
from qcyclic.verify import dual_numbers_square


@pytest.mark.parametrize("a", [rationals(), dual_numbers(), truncated_polynomial(4)[0], upper_triangular(3),
                               product_algebra([rationals(), dual_numbers()])])
def test_constructions_are_associative_and_unital(a):
    assert validate_algebra(a)


def test_validation_names_the_failing_triple():
    # e*e = 1 and 1*e = e, but declare e*1 = 0: the unit fails on the right
    bad = Algebra(["1", "e"], [[{0: 1}, {1: 1}], [{}, {0: 1}]], {0: 1})
    report = validate_algebra(bad)
    assert not report
    assert report.witness is not None


def test_ideal_closure_is_checked():
    a = upper_triangular(2)
    with pytest.raises(AlgebraError):
        from qcyclic.exactla import Subspace
        Ideal(a, Subspace(3, SparseMatrix.from_columns(3, [{0: 1}])))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 8))
def test_powers_of_the_maximal_ideal_of_truncated_polynomials(n, k):
    a, i = truncated_polynomial(n)
    assert ideal_power(i, k).dim == (n if k == 0 else max(n - k, 0))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5), st.integers(1, 4), st.integers(1, 4))
def test_ideal_powers_multiply(n, j, k):
    a, i = truncated_polynomial(n)
    from qcyclic.algcore import product_ideal
    assert product_ideal(ideal_power(i, j), ideal_power(i, k)).dim == ideal_power(i, j + k).dim


def test_quotient_of_truncated_polynomial_by_square_of_maximal_ideal():
    a, i = truncated_polynomial(4)
    q, proj = quotient_by_ideal(a, ideal_power(i, 2))
    assert q.dim == 2 and validate_algebra(q)
    assert q.mul({1: Fraction(1)}, {1: Fraction(1)}) == {}


def test_square_zero_extension_of_rationals():
    q = rationals()
    a, i = square_zero_extension(q, Bimodule.regular(q))
    assert validate_algebra(a)
    assert ideal_power(i, 2).dim == 0


def test_associated_graded_of_truncated_polynomial_is_itself():
    a, i = truncated_polynomial(3)
    gr = associated_graded(a, i)
    assert gr.failure() is None
    assert [p.dim for p in gr.pieces] == [1, 1, 1]


def test_dual_numbers_square_is_a_fiber_product():
    s = dual_numbers_square()
    assert s.corner.dim == 3
    assert validate_algebra(s.corner)
    assert s.sections_multiplicative
    assert (s.f1 @ s.pr1).matrix == (s.f2 @ s.pr2).matrix


def test_split_square_rejects_a_non_section():
    a1, a2, q = dual_numbers("e"), dual_numbers("d"), rationals()
    f1 = AlgebraMap(a1, q, SparseMatrix.from_dense([[1, 0]]))
    f2 = AlgebraMap(a2, q, SparseMatrix.from_dense([[1, 0]]))
    good = SparseMatrix.from_dense([[1], [0]])
    with pytest.raises(AlgebraError):
        split_square(a1, a2, q, f1, f2, SparseMatrix.from_dense([[2], [0]]), good)


def test_map_must_be_multiplicative():
    a = dual_numbers()
    with pytest.raises(AlgebraError):
        AlgebraMap(a, a, SparseMatrix.from_dense([[1, 0], [0, 0]]) * 2)
