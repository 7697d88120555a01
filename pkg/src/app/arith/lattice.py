"""
Integer and rational lattice linear algebra.

Row conventions throughout: a lattice is the Z-span of the rows of a matrix.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence, Tuple

from src.app.core.errors import RankMismatch

logger = logging.getLogger(__name__)

Matrix = List[List[int]]
RationalMatrix = List[List[Fraction]]


def _echelon(rows: Matrix, ncols: int) -> Tuple[Matrix, int]:
    """
    Row-reduce the first `ncols` columns of an integer matrix in place.

    Returns the matrix and the number of pivot rows; rows below the pivot rows
    are zero on the reduced columns.
    """
    a = rows
    m = len(a)
    r = 0
    for col in range(ncols):
        if r >= m:
            break
        while True:
            live = [i for i in range(r, m) if a[i][col] != 0]
            if not live:
                break
            i_min = min(live, key=lambda i: abs(a[i][col]))
            a[r], a[i_min] = a[i_min], a[r]
            pivot = a[r][col]
            clean = True
            for i in range(r + 1, m):
                if a[i][col]:
                    q = a[i][col] // pivot
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][col]:
                        clean = False
            if clean:
                break
        if a[r][col] == 0:
            continue
        if a[r][col] < 0:
            a[r] = [-x for x in a[r]]
        pivot = a[r][col]
        for i in range(r):
            q = a[i][col] // pivot
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
    return a, r


def hnf_rows(rows: Sequence[Sequence[int]]) -> Matrix:
    """
    Hermite normal form of the row lattice.

    Pivots are positive, entries above a pivot lie in [0, pivot) and zero rows
    are dropped, so two generating sets of one lattice give the same output.
    """
    a = [[int(x) for x in row] for row in rows]
    if not a:
        return []
    a, r = _echelon(a, len(a[0]))
    return a[:r]


def hnf_with_transform(rows: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix, Matrix]:
    """
    Returns (H, U, K) with U·rows = H and K a basis of the left kernel.
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    aug = [
        [int(x) for x in row] + [1 if j == i else 0 for j in range(m)]
        for i, row in enumerate(rows)
    ]
    aug, r = _echelon(aug, n)
    h = [row[:n] for row in aug[:r]]
    u = [row[n:] for row in aug[:r]]
    kernel = hnf_rows([row[n:] for row in aug[r:]]) if r < m else []
    return h, u, kernel


def integer_kernel(rows: Sequence[Sequence[int]]) -> Matrix:
    """Z-basis of {x : x·rows = 0}, in Hermite form."""
    return hnf_with_transform(rows)[2]


def smith_normal_form(
    rows: Sequence[Sequence[int]], ncols: Optional[int] = None
) -> Tuple[List[int], Matrix, Matrix]:
    """
    Smith normal form U·A·V = D of an integer relation matrix.

    Returns (diag, V, V_inv) with len(diag) = ncols; zero entries are free
    factors. For the group Z^n / rowspace(A), x maps to the coordinates x·V
    (entry i read mod diag[i]) and row i of V_inv is a generator of factor i.
    """
    a = [[int(x) for x in row] for row in rows]
    n = ncols if ncols is not None else (len(a[0]) if a else 0)
    m = len(a)
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    v_inv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def col_sub(j: int, t: int, q: int) -> None:
        for row in a:
            row[j] -= q * row[t]
        for row in v:
            row[j] -= q * row[t]
        v_inv[t] = [x + q * y for x, y in zip(v_inv[t], v_inv[j])]

    def col_swap(j: int, t: int) -> None:
        for row in a:
            row[j], row[t] = row[t], row[j]
        for row in v:
            row[j], row[t] = row[t], row[j]
        v_inv[j], v_inv[t] = v_inv[t], v_inv[j]

    t = 0
    while t < min(m, n):
        entries = [
            (abs(a[i][j]), i, j)
            for i in range(t, m)
            for j in range(t, n)
            if a[i][j] != 0
        ]
        if not entries:
            break
        _, i0, j0 = min(entries)
        a[t], a[i0] = a[i0], a[t]
        col_swap(t, j0)
        while True:
            pivot = a[t][t]
            for i in range(t + 1, m):
                q = a[i][t] // pivot
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
            for j in range(t + 1, n):
                q = a[t][j] // pivot
                if q:
                    col_sub(j, t, q)
            rest = [(abs(a[i][t]), i, t) for i in range(t + 1, m) if a[i][t]]
            rest += [(abs(a[t][j]), t, j) for j in range(t + 1, n) if a[t][j]]
            if rest:
                _, i1, j1 = min(rest)
                if j1 == t:
                    a[t], a[i1] = a[i1], a[t]
                else:
                    col_swap(t, j1)
                continue
            bad = next(
                (
                    i
                    for i in range(t + 1, m)
                    for j in range(t + 1, n)
                    if a[i][j] % pivot
                ),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
        t += 1
    diag = [a[i][i] if i < m else 0 for i in range(n)]
    return diag, v, v_inv


def determinant(matrix: Sequence[Sequence]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def solve_rational(
    basis: Sequence[Sequence], v: Sequence
) -> Optional[List[Fraction]]:
    """
    Solve x·basis = v over Q. Returns None when v is outside the Q-span.

    With dependent rows the free coordinates are set to zero.
    """
    k = len(basis)
    n = len(v)
    # columns of the augmented system are the basis rows
    a = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(v[i])] for i in range(n)]
    pivots: List[int] = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, n) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if any(a[i][k] != 0 for i in range(r, n)):
        return None
    x = [Fraction(0)] * k
    for i, c in enumerate(pivots):
        x[c] = a[i][k]
    return x


def _common_denominator(rows: Sequence[Sequence]) -> int:
    den = 1
    for row in rows:
        for x in row:
            den = lcm(den, Fraction(x).denominator)
    return den


@dataclass(frozen=True)
class Lattice:
    """A Z-lattice in Q^n held as a rational Hermite basis."""

    basis: Tuple[Tuple[Fraction, ...], ...]
    dimension: int

    @classmethod
    def from_generators(cls, generators: Sequence[Sequence], dimension: int) -> "Lattice":
        gens = [[Fraction(x) for x in row] for row in generators]
        if any(len(row) != dimension for row in gens):
            raise RankMismatch(f"generators must have {dimension} coordinates")
        den = _common_denominator(gens)
        scaled = [[int(x * den) for x in row] for row in gens]
        h = hnf_rows(scaled)
        basis = tuple(tuple(Fraction(x, den) for x in row) for row in h)
        return cls(basis=basis, dimension=dimension)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Sequence) -> Optional[List[Fraction]]:
        if not self.basis:
            return None if any(Fraction(x) for x in v) else []
        return solve_rational(self.basis, v)

    def contains(self, v: Sequence) -> bool:
        coords = self.coordinates(v)
        return coords is not None and all(c.denominator == 1 for c in coords)

    def denominator(self, v: Sequence) -> Optional[int]:
        """Least d > 0 with d·v in the lattice, or None if v is outside its Q-span."""
        coords = self.coordinates(v)
        if coords is None:
            return None
        return _common_denominator([coords]) if coords else 1

    def scaled(self, factor) -> "Lattice":
        f = Fraction(factor)
        return Lattice.from_generators(
            [[x * f for x in row] for row in self.basis], self.dimension
        )

    def index_in(self, other: "Lattice") -> Fraction:
        """
        Generalized index |other : self| for lattices spanning the same Q-space.

        Integral exactly when self is a sublattice of other.
        """
        if self.rank != other.rank:
            raise RankMismatch(
                f"lattices of rank {self.rank} and {other.rank} are not comparable"
            )
        coords = [other.coordinates(row) for row in self.basis]
        if any(c is None for c in coords):
            raise RankMismatch("lattices span different subspaces")
        return abs(determinant(coords))

    def kernel_sublattice(self, linear_map: Sequence[Sequence]) -> "Lattice":
        """
        The sublattice {x in L : x·linear_map = 0}; linear_map is n x k.
        """
        if not self.basis:
            return self
        images = [
            [sum((row[i] * Fraction(linear_map[i][j]) for i in range(self.dimension)), Fraction(0))
             for j in range(len(linear_map[0]))]
            for row in self.basis
        ]
        den = _common_denominator(images)
        kernel = integer_kernel([[int(x * den) for x in row] for row in images])
        gens = [
            [sum((c * self.basis[t][i] for t, c in enumerate(k)), Fraction(0)) for i in range(self.dimension)]
            for k in kernel
        ]
        logger.debug("kernel sublattice of rank %d inside rank %d", len(gens), self.rank)
        return Lattice.from_generators(gens, self.dimension)
