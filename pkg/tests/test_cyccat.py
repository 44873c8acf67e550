import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from qcyclic.algcore import dual_numbers, truncated_polynomial
from qcyclic.cyccat import (
    StructureError,
    act,
    check_morphism,
    constant_module,
    counit,
    dold_kan,
    enumerate_lambda,
    free_cyclic,
    lambda_factorize,
    nerve_weight_piece,
    random_simplicial_module,
    validate_cyclic,
    validate_simplicial,
)
from qcyclic.exactla import SparseMatrix
from qcyclic.hhdecomp import hh

seeds = st.integers(0, 2**32 - 1)


def test_constant_module_is_cyclic():
    assert validate_cyclic(constant_module(6, dim=2))


def test_hochschild_modules_are_cyclic():
    assert validate_cyclic(hh(dual_numbers(), 5))
    assert validate_cyclic(hh(truncated_polynomial(3)[0], 3))


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_free_cyclic_of_random_simplicial_module_is_cyclic(seed):
    n, _ = random_simplicial_module(random.Random(seed), 4)
    assert validate_simplicial(n)
    assert validate_cyclic(free_cyclic(n))


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(1, 3))
def test_random_module_dims_follow_normalized_dims(seed, cap):
    n, ndim = random_simplicial_module(random.Random(seed), 4, dim_cap=cap)
    assert any(ndim)
    for q in range(5):
        assert n.dim(q) == sum(comb(q, p) * ndim[p] for p in range(len(ndim)))
        assert n.dim(q) <= cap


def test_dold_kan_with_a_boundary():
    d = SparseMatrix.from_dense([[1]])
    m = dold_kan([1, 1], {1: d}, 4)
    assert validate_simplicial(m)
    assert [m.dim(q) for q in range(5)] == [1, 2, 3, 4, 5]


def test_counit_is_a_cyclic_map():
    assert check_morphism(counit(hh(dual_numbers(), 3)))


def test_counit_fails_when_rotation_is_dropped():
    y = hh(dual_numbers(), 3)
    f = counit(y)
    f.maps[1] = SparseMatrix.hstack([SparseMatrix.identity(y.dim(1))] * 2, rows=y.dim(1))
    assert not check_morphism(f)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_nerve_weight_pieces_are_cyclic(k):
    assert validate_cyclic(nerve_weight_piece(k, 5).linearize())


@pytest.mark.parametrize("source,target", [(s, t) for s in range(4) for t in range(4)])
def test_number_of_cyclic_operators(source, target):
    assert len(enumerate_lambda(source, target)) == (target + 1) * comb(source + target + 1, target + 1)


@st.composite
def operator_words(draw):
    source = draw(st.integers(0, 3))
    word, cur = [], source
    for _ in range(draw(st.integers(0, 7))):
        choices = ["t"] + ([f"d_{i}" for i in range(cur + 1)] if cur >= 1 else []) + \
                  ([f"s_{i}" for i in range(cur + 1)] if cur < 4 else [])
        tok = draw(st.sampled_from(choices))
        word.insert(0, tok)
        cur += {"t": 0, "d": -1, "s": 1}[tok[0]]
    return word, source


MODULE = hh(truncated_polynomial(3)[0], 5)


@settings(max_examples=150, deadline=None)
@given(operator_words())
def test_normal_form_acts_like_the_word(ws):
    word, source = ws
    nf = lambda_factorize(word, source)
    assert act(MODULE, word, source) == act(MODULE, nf.word(), source)


@settings(max_examples=150, deadline=None)
@given(operator_words())
def test_normal_form_is_idempotent(ws):
    word, source = ws
    nf = lambda_factorize(word, source)
    assert lambda_factorize(nf.word(), source) == nf


def test_undefined_face_is_rejected():
    with pytest.raises(StructureError):
        lambda_factorize(["d_0"], 0)
