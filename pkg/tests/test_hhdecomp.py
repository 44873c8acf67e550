from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from qcyclic.algcore import (
    AlgebraError,
    AlgebraMap,
    Bimodule,
    associated_graded,
    dual_numbers,
    quotient_by_ideal,
    rationals,
    split_square,
    truncated_polynomial,
)
from qcyclic.cyccat import check_morphism
from qcyclic.exactla import SparseMatrix
from qcyclic.hhdecomp import (
    BudgetError,
    Partition,
    gap_set,
    graded_comparison,
    hh,
    hh_map,
    ideal_filtration,
    partition_chain,
    partition_decompose,
    partition_flow,
    partitions,
    split_square_ifib,
    weight_decompose,
)
from qcyclic.verify import dual_numbers_square

PARTITION_COUNTS = [1, 1, 2, 3, 5, 7, 11, 15, 22]


def test_hochschild_module_dimensions():
    m = hh(truncated_polynomial(3)[0], 4)
    assert [m.dim(q) for q in range(5)] == [3, 9, 27, 81, 243]


def test_budget_is_enforced():
    with pytest.raises(BudgetError):
        hh(truncated_polynomial(5)[0], 9, budget=1000)


def test_induced_map_of_the_quotient_is_cyclic():
    a, i = truncated_polynomial(3)
    q, proj = quotient_by_ideal(a, i)
    f = hh_map(proj, hh(a, 3), hh(q, 3))
    assert check_morphism(f)


@pytest.mark.parametrize("k", range(1, 9))
def test_partition_counts_and_strict_norm_order(k):
    ps = partitions(k)
    assert len(ps) == PARTITION_COUNTS[k]
    assert all(sum(p.parts) == k for p in ps)
    norms = [p.norm for p in ps]
    assert norms == sorted(norms, reverse=True) and len(set(norms)) == len(norms)


def test_partition_rejects_increasing_parts():
    with pytest.raises(ValueError):
        Partition((1, 2))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=14), st.integers(0, 20))
def test_gap_set_is_rotation_equivariant(f, r):
    m = len(f)
    r %= m
    rotated = [f[(j - r) % m] for j in range(m)]
    assert gap_set(rotated).members == {(j + r) % m for j in gap_set(f).members}


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=14))
def test_gap_set_members_are_twos_preceded_by_ones(f):
    g = gap_set(f).members
    assert all(f[j] == 2 for j in g)
    if 1 not in f:
        assert not g


def test_gap_set_rejects_other_values():
    with pytest.raises(ValueError):
        gap_set([0, 3])


def test_weight_pieces_of_rationals():
    q = rationals()
    wd = weight_decompose(q, Bimodule.regular(q), 5)
    assert wd.audit
    for piece in wd.pieces:
        # words of length q+1 with k letters from M
        assert [piece.H.dim(d) for d in range(6)] == [len([w for w in product((0, 1), repeat=d + 1) if sum(w) == piece.k])
                                                      for d in range(6)]
        assert piece.retract.valid


def test_partition_pieces_with_two_slots():
    q = rationals()
    for k in range(1, 4):
        for P in partitions(k):
            _, pc = partition_decompose(q, [Bimodule.regular(q)] * 2, P, 4)
            assert pc.retract.valid, (P, pc.retract.composite)


def test_partition_with_part_beyond_slot_count_is_empty():
    q = rationals()
    _, pc = partition_decompose(q, [Bimodule.regular(q)] * 2, Partition((3,)), 4)
    assert all(pc.H.dim(d) == 0 for d in range(5))


def test_structure_maps_move_towards_larger_norm():
    q = rationals()
    mod, _ = partition_decompose(q, [Bimodule.regular(q)] * 3, Partition((2, 1)), 4)
    for k in range(1, 4):
        assert partition_flow(mod, k, 4)


def test_partition_chain_of_graded_truncated_polynomial():
    a, i = truncated_polynomial(3)
    gr = associated_graded(a, i)
    for k in range(1, 4):
        assert partition_chain(gr, k, 4).audit


def test_filtration_dims_match_valuation_count():
    a, i = truncated_polynomial(3)
    filt = ideal_filtration(a, i, 4)
    for q in range(5):
        for k in range(3 * (q + 1) + 1):
            expected = sum(1 for w in product(range(3), repeat=q + 1) if sum(w) >= k)
            assert filt.dim(k, q) == expected
    assert filt.vanishing()
    assert filt.quotient_comparison()


def test_filtration_graded_pieces_match_associated_graded():
    a, i = truncated_polynomial(3)
    filt = ideal_filtration(a, i, 3)
    for k in range(4):
        assert graded_comparison(filt, k)


def test_iterated_fiber_of_the_dual_numbers_square():
    ifib = split_square_ifib(dual_numbers_square(), 4)
    assert ifib.agreement and ifib.audit
    assert all(p.retract.valid for p in ifib.pieces.values())


def test_iterated_fiber_needs_multiplicative_sections():
    # Q[e] x Q[d] over Q[e]: section e -> e + d' style twist is linear but not multiplicative
    a1, a12 = truncated_polynomial(3)[0], dual_numbers()
    a2 = dual_numbers("d")
    f1 = AlgebraMap(a1, a12, SparseMatrix.from_dense([[1, 0, 0], [0, 1, 0]]))
    f2 = AlgebraMap(a2, a12, SparseMatrix.identity(2))
    twisted = SparseMatrix.from_dense([[1, 0], [0, 1], [0, 1]])
    s = split_square(a1, a2, a12, f1, f2, twisted, SparseMatrix.identity(2))
    assert not s.sections_multiplicative
    with pytest.raises(AlgebraError):
        split_square_ifib(s, 3)
