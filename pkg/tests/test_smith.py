"""
Tests for modules/smith.py
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modules.smith import (
    as_integer_matrix,
    identity,
    invariant_factors,
    kernel_basis,
    smith_normal_form,
    sympy_invariant_factors,
)

matrices = st.integers(min_value=1, max_value=5).flatmap(
    lambda rows: st.integers(min_value=1, max_value=5).flatmap(
        lambda cols: st.lists(st.integers(min_value=-6, max_value=6),
                              min_size=rows * cols, max_size=rows * cols)
        .map(lambda entries: as_integer_matrix(entries, (rows, cols)))))


def test_known_form():
    A = as_integer_matrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert invariant_factors(A) == [2, 6, 12]


def test_zero_matrix():
    assert invariant_factors(np.zeros((2, 3), dtype=object)) == []


def test_torsion_and_rank():
    form = smith_normal_form(as_integer_matrix([[2, 0], [0, 3]]))
    assert form.diagonal == [1, 6]
    assert form.rank == 2
    assert form.torsion == [6]


def test_rejects_vectors():
    with pytest.raises(ValueError):
        smith_normal_form(np.array([1, 2, 3], dtype=object))


def test_kernel():
    A = as_integer_matrix([[1, 2, 3]])
    K = kernel_basis(A)
    assert K.shape == (3, 2)
    assert not (A.dot(K)).any()


def test_big_entries():
    big = 2 ** 80
    A = as_integer_matrix([[big, 0], [0, big * 3]])
    assert invariant_factors(A) == [big, 3 * big]


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_transforms_diagonalize(A):
    form = smith_normal_form(A, transforms=True)
    assert (form.U.dot(A).dot(form.V) == form.D()).all()
    assert (form.U.dot(form.U_inv) == identity(A.shape[0])).all()
    assert (form.V.dot(form.V_inv) == identity(A.shape[1])).all()


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_agrees_with_sympy(A):
    diagonal = invariant_factors(A)
    assert diagonal == sympy_invariant_factors(A)
    assert all(b % a == 0 for a, b in zip(diagonal, diagonal[1:]))
