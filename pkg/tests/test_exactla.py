from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphmfd.exactla import (
    Inertia,
    SubsetCapExceeded,
    SymRatMatrix,
    determinant,
    inertia,
    is_supersingular,
    is_weakly_singular,
    kernel_basis,
    nullspace,
    rank,
    supports,
)

from conftest import fr, mat, sym_matrices
from oracles import brute_weakly_singular, sturm_inertia, to_sympy

ONLY_I_APLUS = mat([1, -1, 0], [-1, 1, -1], [0, -1, 1])
VE_NOT_VF_H = mat([1, -1, 0], [-1, 2, 0], [0, 0, 0])
E_VF_H = mat([1, -1, 0], [-1, 1, 0], [0, 0, 0])
E_VF_ALAMBDA = mat([1, -1, 0], [-1, 1, -1], [0, -1, 0])
VE_NOT_E_H = mat([1, -1, 0], [-1, "1/2", "-1/2"], [0, "-1/2", "3/2"])


def test_rejects_non_symmetric():
    with pytest.raises(ValueError, match="symmetric"):
        mat([1, 2], [3, 4])
    with pytest.raises(ValueError, match="square"):
        SymRatMatrix(((1, 2),))


@pytest.mark.parametrize("a, expected", [
    (SymRatMatrix.identity(3), (3, 0, 0)),
    (ONLY_I_APLUS, (2, 0, 1)),
    (VE_NOT_VF_H, (2, 1, 0)),
    (mat([1, -1, 0], [-1, 3, -1], [0, -1, 1]), (3, 0, 0)),
    (mat([0, 1], [1, 0]), (1, 0, 1)),
    (SymRatMatrix.zeros(2), (0, 2, 0)),
    (mat([0, 0, 1], [0, 0, 0], [1, 0, 0]), (1, 1, 1)),
])
def test_inertia_examples(a, expected):
    assert inertia(a).as_tuple() == expected == sturm_inertia(a)


def test_inertia_predicates():
    i = Inertia(2, 1, 0)
    assert i.is_psd and i.is_singular and i.has_nonpositive and not i.has_negative
    assert Inertia(1, 0, 1).has_negative and not Inertia(1, 0, 1).is_psd


def test_determinants():
    assert VE_NOT_E_H.determinant() == -1
    assert E_VF_ALAMBDA.determinant() == -1
    assert determinant([[2, 1], [4, 2]]) == 0
    assert determinant([[0, 1], [1, 0]]) == -1
    assert rank([[1, 2], [2, 4]]) == 1


def test_kernel_examples():
    assert len(kernel_basis(SymRatMatrix.zeros(2))) == 2
    assert kernel_basis(VE_NOT_VF_H) == [fr(0, 0, 1)]
    assert kernel_basis(E_VF_H) in ([fr(1, 1, 0), fr(0, 0, 1)], [fr(0, 0, 1), fr(1, 1, 0)])
    assert kernel_basis(SymRatMatrix.identity(3)) == []


def test_supersingular_examples():
    assert is_supersingular(E_VF_H) == fr(1, 1, 1)
    assert is_supersingular(VE_NOT_VF_H) is None
    assert is_supersingular(SymRatMatrix.identity(2)) is None


def test_weakly_singular_examples():
    x = is_weakly_singular(E_VF_ALAMBDA)
    assert x == fr(1, 1, 0)
    assert E_VF_ALAMBDA.matvec(x) == fr(0, 0, -1)
    assert is_weakly_singular(VE_NOT_E_H) is None
    assert is_weakly_singular(SymRatMatrix.identity(4)) is None


def test_weak_singularity_cap(monkeypatch):
    with pytest.raises(SubsetCapExceeded):
        is_weakly_singular(SymRatMatrix.identity(3), cap=2)
    monkeypatch.setenv("BKN_SUBSET_CAP", "2")
    with pytest.raises(SubsetCapExceeded):
        is_weakly_singular(SymRatMatrix.identity(3))
    monkeypatch.setenv("BKN_SUBSET_CAP", "3")
    assert is_weakly_singular(SymRatMatrix.identity(3)) is None


def test_support_order_largest_first():
    order = list(supports(3))
    assert order[0] == (0, 1, 2)
    assert [len(s) for s in order] == sorted((len(s) for s in order), reverse=True)
    assert len(order) == 7


@settings(max_examples=60, deadline=None)
@given(sym_matrices(max_n=5))
def test_inertia_matches_sturm(a):
    assert inertia(a).as_tuple() == sturm_inertia(a)


@settings(max_examples=60, deadline=None)
@given(sym_matrices(max_n=5))
def test_inertia_invariant_under_congruence(a):
    n = a.n
    # unit upper-triangular change of basis
    p = [[Fraction(int(i == j)) + (Fraction(i + 2 * j, 3) if j > i else 0) for j in range(n)]
         for i in range(n)]
    assert inertia(a.congruent(p)) == inertia(a)


@settings(max_examples=60, deadline=None)
@given(sym_matrices(max_n=5))
def test_kernel_vectors_and_rank(a):
    basis = kernel_basis(a)
    for v in basis:
        assert not any(a.matvec(v))
    assert len(basis) == a.n - rank(a.rows) == inertia(a).n_zero
    assert rank(a.rows) == to_sympy(a).rank()
    assert a.determinant() == to_sympy(a).det()


@settings(max_examples=60, deadline=None)
@given(sym_matrices(max_n=4))
def test_weak_singularity_matches_brute_force(a):
    x = is_weakly_singular(a)
    assert (x is not None) == brute_weakly_singular(a)
    if x is not None:
        ax = a.matvec(x)
        assert any(x)
        assert all(ax[i] == 0 for i in range(a.n) if x[i] != 0)


@settings(max_examples=60, deadline=None)
@given(sym_matrices(max_n=4))
def test_supersingular_witness_fully_supported(a):
    x = is_supersingular(a)
    if x is not None:
        assert all(x) and not any(a.matvec(x))
    elif kernel_basis(a):
        # no kernel vector avoids zeros: some coordinate vanishes on the whole kernel
        basis = kernel_basis(a)
        assert any(all(v[i] == 0 for v in basis) for i in range(a.n))


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4))
def test_nullspace_general(rows):
    for v in nullspace(rows, 3):
        assert all(sum(Fraction(r[j]) * v[j] for j in range(3)) == 0 for r in rows)
    assert len(nullspace(rows, 3)) == 3 - rank(rows)
