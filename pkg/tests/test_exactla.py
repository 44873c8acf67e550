from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import dense_rank, to_dense
from qcyclic.exactla import (
    ChainComplex,
    ComplexError,
    LinAlgError,
    ShortExactSequence,
    SparseMatrix,
    Subspace,
    Tower,
    connecting_map,
    decompose,
    homology_at,
    induced_map,
    rank,
    solve,
    tower_limit,
)

entries = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    sparse = draw(st.booleans())
    cell = st.one_of(st.just(Fraction(0)), entries) if sparse else entries
    rows = [[draw(cell) for _ in range(c)] for _ in range(r)]
    return SparseMatrix.from_dense(rows) if r else SparseMatrix.zeros(0, c)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_matches_dense_elimination(m):
    assert rank(m) == dense_rank(to_dense(m))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_decompose_kernel_and_image(m):
    dec = decompose(m)
    assert dec.rank + dec.kernel.dim == m.cols
    assert (m @ dec.kernel.basis).is_zero()
    assert dec.image.dim == dec.rank
    assert dec.image.contains_all(m)


@settings(max_examples=150, deadline=None)
@given(matrices(), matrices())
def test_solve_reproduces_right_hand_side(m, x):
    if x.rows != m.cols:
        x = SparseMatrix.zeros(m.cols, x.cols)
    rhs = m @ x
    assert m @ solve(m, rhs) == rhs


def test_non_primitive_columns_keep_exact_combinations():
    # columns with common factors and denominators exercise the integer scaling
    m = SparseMatrix.from_dense([[2, 4, Fraction(1, 3)], [6, 12, 1]])
    dec = decompose(m)
    assert dec.rank == 1 and dec.kernel.dim == 2
    assert (m @ dec.kernel.basis).is_zero()
    rhs = SparseMatrix.from_dense([[Fraction(5, 7)], [Fraction(15, 7)]])
    assert m @ solve(m, rhs) == rhs


def test_solve_rejects_inconsistent_system():
    m = SparseMatrix.from_dense([[1], [1]])
    with pytest.raises(LinAlgError):
        solve(m, SparseMatrix.from_dense([[1], [0]]))


def test_homology_of_a_circle():
    d1 = SparseMatrix.from_dense([[-1, 0, 1], [1, -1, 0], [0, 1, -1]])
    h0 = homology_at(d1, SparseMatrix.zeros(0, 3))
    h1 = homology_at(SparseMatrix.zeros(3, 0), d1)
    assert (h0.dim, h1.dim) == (1, 1)
    assert h1.coords(h1.reps) == SparseMatrix.identity(1)


def test_homology_rejects_nonzero_composite():
    with pytest.raises(ComplexError):
        homology_at(SparseMatrix.identity(1), SparseMatrix.identity(1))


def test_induced_map_of_scalar_multiple():
    d = SparseMatrix.from_dense([[1, -1]])
    h = homology_at(SparseMatrix.zeros(2, 0), d)
    f = induced_map(SparseMatrix.scalar(2, 3), h, h)
    assert f == SparseMatrix.scalar(1, 3)


def test_connecting_map_of_interval_relative_to_boundary():
    # 0 -> ∂I -> I -> I/∂I -> 0 : the boundary map H_1(I/∂I) -> H_0(∂I) is nonzero
    sub = ChainComplex({0: 2})
    mid = ChainComplex({0: 2, 1: 1}, {1: SparseMatrix.from_dense([[-1], [1]])})
    quo = ChainComplex({1: 1})
    ses = ShortExactSequence(sub, mid, quo, {0: SparseMatrix.identity(2)}, {1: SparseMatrix.identity(1)})
    delta = connecting_map(ses, 1)
    assert rank(delta) == 1


def test_subspace_span_and_containment():
    s = Subspace.span(3, SparseMatrix.from_dense([[1, 2, 0], [0, 0, 1], [0, 0, 0]]))
    assert s.dim == 2
    assert s.contains({0: Fraction(5), 1: Fraction(-1)})
    assert not s.contains({2: Fraction(1)})


def test_tower_limit_needs_enough_stages_and_finds_eventual_image():
    short = Tower([1, 1], [SparseMatrix.identity(1)])
    assert not tower_limit(short, 3).stabilized
    # stage maps of rank one out of 2-dim spaces: eventual image dimension 1
    p = SparseMatrix.from_dense([[1, 0], [0, 0]])
    t = Tower([2] * 6, [p] * 5)
    lim = tower_limit(t, 3)
    assert lim.stabilized and lim.lim_dim == 1


def test_tower_limit_reports_undetermined_when_images_keep_shrinking():
    shift = SparseMatrix.from_dense([[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0]])
    t = Tower([4] * 5, [shift] * 4)
    lim = tower_limit(t, 3)
    assert not lim.stabilized
    assert lim.image_dims[:3] == [0, 1, 2]
