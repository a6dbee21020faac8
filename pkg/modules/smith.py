"""
Smith Normal Form Module
Exact integer Smith normal form on numpy object arrays, with the unimodular
transforms needed for kernels and homology coordinates, plus an
independent invariant-factor computation through sympy
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors as _sympy_invariant_factors


def as_integer_matrix(rows: Sequence[Sequence[int]], shape: Optional[tuple] = None) -> np.ndarray:
    """Object-dtype copy of an integer matrix (arbitrary precision entries)."""
    matrix = np.array(rows, dtype=object)
    if shape is not None:
        matrix = matrix.reshape(shape)
    if matrix.ndim != 2:
        raise ValueError(f"Expected a 2-dimensional matrix, got shape {matrix.shape}")
    return matrix


def identity(n: int) -> np.ndarray:
    matrix = np.zeros((n, n), dtype=object)
    for i in range(n):
        matrix[i, i] = 1
    return matrix


@dataclass
class SmithForm:
    """
    U @ A @ V == D, with D diagonal; U, V unimodular.

    diagonal holds the nonzero invariant factors d_1 | d_2 | ... (positive).
    """

    shape: tuple
    diagonal: List[int]
    U: Optional[np.ndarray] = None
    U_inv: Optional[np.ndarray] = None
    V: Optional[np.ndarray] = None
    V_inv: Optional[np.ndarray] = None

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def torsion(self) -> List[int]:
        return [d for d in self.diagonal if d > 1]

    def D(self) -> np.ndarray:
        matrix = np.zeros(self.shape, dtype=object)
        for i, d in enumerate(self.diagonal):
            matrix[i, i] = d
        return matrix


class _Reducer:
    """Row/column elimination on D, mirrored into the transform matrices."""

    def __init__(self, A: np.ndarray, transforms: bool):
        self.D = A.copy()
        rows, cols = A.shape
        self.transforms = transforms
        if transforms:
            self.U, self.U_inv = identity(rows), identity(rows)
            self.V, self.V_inv = identity(cols), identity(cols)

    def swap_rows(self, i: int, j: int):
        if i == j:
            return
        self.D[[i, j]] = self.D[[j, i]]
        if self.transforms:
            self.U[[i, j]] = self.U[[j, i]]
            self.U_inv[:, [i, j]] = self.U_inv[:, [j, i]]

    def swap_cols(self, i: int, j: int):
        if i == j:
            return
        self.D[:, [i, j]] = self.D[:, [j, i]]
        if self.transforms:
            self.V[:, [i, j]] = self.V[:, [j, i]]
            self.V_inv[[i, j]] = self.V_inv[[j, i]]

    def negate_row(self, i: int):
        self.D[i] = -self.D[i]
        if self.transforms:
            self.U[i] = -self.U[i]
            self.U_inv[:, i] = -self.U_inv[:, i]

    def add_row(self, target: int, source: int, q: int = 1):
        # row_target += q * row_source
        self.D[target] = self.D[target] + q * self.D[source]
        if self.transforms:
            self.U[target] = self.U[target] + q * self.U[source]
            self.U_inv[:, source] = self.U_inv[:, source] - q * self.U_inv[:, target]

    def eliminate_below(self, t: int):
        """Subtract multiples of row t from the rows below; returns True if all became zero."""
        pivot = self.D[t, t]
        column = self.D[t + 1:, t]
        rows = np.nonzero(column != 0)[0] + t + 1
        if len(rows) == 0:
            return True
        q = np.array([self.D[i, t] // pivot for i in rows], dtype=object)
        self.D[rows] = self.D[rows] - np.outer(q, self.D[t])
        if self.transforms:
            self.U[rows] = self.U[rows] - np.outer(q, self.U[t])
            self.U_inv[:, t] = self.U_inv[:, t] + self.U_inv[:, rows].dot(q)
        return not (self.D[t + 1:, t] != 0).any()

    def eliminate_right(self, t: int):
        """Subtract multiples of column t from the columns to the right."""
        pivot = self.D[t, t]
        row = self.D[t, t + 1:]
        cols = np.nonzero(row != 0)[0] + t + 1
        if len(cols) == 0:
            return True
        q = np.array([self.D[t, j] // pivot for j in cols], dtype=object)
        self.D[:, cols] = self.D[:, cols] - np.outer(self.D[:, t], q)
        if self.transforms:
            self.V[:, cols] = self.V[:, cols] - np.outer(self.V[:, t], q)
            self.V_inv[t] = self.V_inv[t] + q.dot(self.V_inv[cols])
        return not (self.D[t, t + 1:] != 0).any()

    def smallest_entry(self, t: int):
        block = self.D[t:, t:]
        best = None
        for i, j in zip(*np.nonzero(block != 0)):
            value = abs(block[i, j])
            if best is None or value < best[0]:
                best = (value, i + t, j + t)
                if value == 1:
                    break
        return best


def smith_normal_form(A: np.ndarray, transforms: bool = False) -> SmithForm:
    """
    Smith normal form of an integer matrix.

    Args:
        A: Integer matrix (any dtype holding Python ints)
        transforms: Also return U, U^-1, V, V^-1 with U @ A @ V == D

    Returns:
        SmithForm
    """
    A = np.asarray(A, dtype=object)
    if A.ndim != 2:
        raise ValueError(f"Expected a 2-dimensional matrix, got shape {A.shape}")
    rows, cols = A.shape
    work = _Reducer(A, transforms)
    diagonal = []
    for t in range(min(rows, cols)):
        best = work.smallest_entry(t)
        if best is None:
            break
        _, i, j = best
        work.swap_rows(t, i)
        work.swap_cols(t, j)
        while True:
            column_clear = work.eliminate_below(t)
            row_clear = work.eliminate_right(t)
            if not (column_clear and row_clear):
                # a remainder is smaller than the pivot: move it into place
                best = work.smallest_entry(t)
                _, i, j = best
                work.swap_rows(t, i)
                work.swap_cols(t, j)
                continue
            pivot = work.D[t, t]
            block = work.D[t + 1:, t + 1:]
            offending = np.nonzero(np.vectorize(lambda x: x % pivot != 0, otypes=[bool])(block))
            if block.size and len(offending[0]):
                # divisibility fix-up: fold the offending row into the pivot row
                work.add_row(t, offending[0][0] + t + 1)
                continue
            break
        if work.D[t, t] < 0:
            work.negate_row(t)
        diagonal.append(work.D[t, t])
    form = SmithForm((rows, cols), [int(d) for d in diagonal])
    if transforms:
        form.U, form.U_inv, form.V, form.V_inv = work.U, work.U_inv, work.V, work.V_inv
    return form


def invariant_factors(A: np.ndarray) -> List[int]:
    return smith_normal_form(A).diagonal


def sympy_invariant_factors(A: np.ndarray) -> List[int]:
    """Nonzero invariant factors computed by sympy, for cross-checking."""
    A = np.asarray(A, dtype=object)
    rows, cols = A.shape
    if rows == 0 or cols == 0:
        return []
    matrix = DomainMatrix([[ZZ(int(x)) for x in row] for row in A.tolist()], (rows, cols), ZZ)
    factors = [abs(int(d)) for d in _sympy_invariant_factors(matrix)]
    return sorted(d for d in factors if d != 0)


def kernel_basis(A: np.ndarray) -> np.ndarray:
    """Columns spanning the integer kernel of A (a saturated lattice)."""
    form = smith_normal_form(A, transforms=True)
    return form.V[:, form.rank:]
