"""Exact rational and integer linear algebra.

Every quantity in the package is exact.  Scalars are :class:`fractions.Fraction`
(or plain ``int`` when the denominator is 1).  Matrices that feed the hot paths
are integer numpy arrays; products are computed in ``int64`` only after an
overflow bound has been checked, otherwise in ``object`` dtype (Python ints).

Rank computations use a certificate trick: the rank of an integer matrix modulo
a prime is a lower bound for its rank over the rationals, and rows that are
independent modulo p are independent over Q.  A modular result is therefore
used directly whenever it is already maximal or can be verified, and an exact
fraction-free elimination is the fallback.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

ExactScalar = Fraction
PRIME = 2147483629  # largest prime below 2**31; products of residues fit int64
_INT64_SAFE = 1 << 62


class DimensionError(ValueError):
    """Vectors of mismatched length were combined."""


class InvalidInequalityError(ValueError):
    """An inequality with an identically zero functional."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass ints, Fractions or 'p/q' strings")
    return Fraction(x)


def as_vector(entries: Iterable) -> tuple[Fraction, ...]:
    return tuple(as_fraction(e) for e in entries)


def primitive(vec: Sequence[int]) -> list[int]:
    """Divide an integer vector by the gcd of its entries (sign kept)."""
    g = gcd(*vec) if len(vec) else 0
    if g <= 1:
        return list(vec)
    return [v // g for v in vec]


def normalize(a: Sequence, b) -> tuple[tuple[int, ...], int]:
    """Scale ``(a, b)`` by the unique positive rational giving coprime integers.

    The orientation is never flipped, so the half-space ``<a, x> <= b`` is
    preserved.
    """
    vals = [as_fraction(x) for x in a] + [as_fraction(b)]
    if all(v == 0 for v in vals[:-1]):
        raise InvalidInequalityError("zero functional")
    den = lcm(*(v.denominator for v in vals))
    nums = [int(v * den) for v in vals]
    nums = primitive(nums)
    return tuple(nums[:-1]), nums[-1]


def integer_rows(points: Sequence[Sequence]) -> tuple[list[list[int]], int]:
    """Homogenize points as rows ``(1, p)``; each row scaled to integers.

    Returns the rows and the common dimension.  Scaling a row by a positive
    constant changes neither rank nor kernel.
    """
    dim = None
    rows = []
    for p in points:
        p = [as_fraction(x) for x in p]
        if dim is None:
            dim = len(p)
        elif len(p) != dim:
            raise DimensionError(f"point of length {len(p)} in a list of length {dim}")
        den = lcm(*(x.denominator for x in p)) if p else 1
        rows.append([den] + [int(x * den) for x in p])
    return rows, (dim or 0)


# ---------------------------------------------------------------------------
# integer numpy helpers


def fits_int64(*bounds: int) -> bool:
    prod = 1
    for b in bounds:
        prod *= max(int(b), 1)
    return prod < _INT64_SAFE


def max_abs(arr) -> int:
    arr = np.asarray(arr)
    if arr.size == 0:
        return 0
    if arr.dtype == object:
        return max(abs(int(x)) for x in arr.flat)
    return int(np.abs(arr).max())


def to_object(arr) -> np.ndarray:
    arr = np.asarray(arr)
    if arr.dtype == object:
        return arr
    return arr.astype(object)


def int_array(values) -> np.ndarray:
    """Integer array in int64 when every entry fits comfortably, else object."""
    arr = np.asarray(values, dtype=object)
    if arr.size == 0 or max_abs(arr) < (1 << 31):
        return arr.astype(np.int64)
    return arr


def matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact integer product, falling back to Python ints when int64 might overflow."""
    inner = A.shape[-1] if A.ndim else 1
    if A.dtype != object and B.dtype != object and fits_int64(max_abs(A), max_abs(B), inner):
        return A @ B
    return to_object(A) @ to_object(B)


def row_gcd(M: np.ndarray) -> np.ndarray:
    if M.dtype == object:
        return np.array([gcd(*(int(x) for x in row)) for row in M], dtype=object)
    return np.gcd.reduce(M, axis=1)


# ---------------------------------------------------------------------------
# modular elimination


def independent_rows_mod_p(M: np.ndarray, p: int = PRIME) -> tuple[list[int], list[int]]:
    """Greedy column-pivoting elimination of ``M`` modulo ``p``.

    Returns (pivot rows, pivot columns).  The pivot rows are linearly
    independent over Q, and their count is a lower bound on ``rank(M)``.
    """
    M = np.asarray(M)
    n, m = M.shape
    if n == 0 or m == 0:
        return [], []
    if M.dtype == object:
        A = np.array([[int(x) % p for x in row] for row in M], dtype=np.int64)
    else:
        A = np.mod(M, p).astype(np.int64)
    alive = np.ones(n, dtype=bool)
    rows, cols = [], []
    for c in range(m):
        cand = np.flatnonzero(alive & (A[:, c] != 0))
        if cand.size == 0:
            continue
        r = int(cand[0])
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = (A[r] * inv) % p
        alive[r] = False
        others = np.flatnonzero(alive & (A[:, c] != 0))
        if others.size:
            A[others] = (A[others] - np.outer(A[others, c], A[r]) % p) % p
        rows.append(r)
        cols.append(c)
        if not alive.any():
            break
    return rows, cols


# ---------------------------------------------------------------------------
# exact incremental echelon form


class Echelon:
    """Reduced row echelon form over Q with primitive integer rows.

    Rows are added one at a time; each stored row has a pivot column where all
    other rows are zero.  ``add`` costs O(rank * ncols) integer operations.
    """

    __slots__ = ("ncols", "rows", "pivots")

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Sequence[int]) -> list[int]:
        v = [int(x) for x in vec]
        if len(v) != self.ncols:
            raise DimensionError(f"row of length {len(v)}, expected {self.ncols}")
        for row, c in zip(self.rows, self.pivots):
            vc = v[c]
            if vc:
                pc = row[c]
                v = [x * pc - y * vc for x, y in zip(v, row)]
        return primitive(v)

    def add(self, vec: Sequence[int]) -> bool:
        v = self.reduce(vec)
        c = next((i for i, x in enumerate(v) if x), None)
        if c is None:
            return False
        vc = v[c]
        for i, row in enumerate(self.rows):
            rc = row[c]
            if rc:
                self.rows[i] = primitive([x * vc - y * rc for x, y in zip(row, v)])
        self.rows.append(v)
        self.pivots.append(c)
        return True

    def free_columns(self) -> list[int]:
        piv = set(self.pivots)
        return [j for j in range(self.ncols) if j not in piv]

    def kernel_vector(self, j: int) -> list[int]:
        """Kernel vector with a nonzero entry only at free column ``j`` among free columns."""
        involved = [(row, c) for row, c in zip(self.rows, self.pivots) if row[j]]
        L = lcm(*(abs(row[c]) for row, c in involved)) if involved else 1
        x = [0] * self.ncols
        x[j] = L
        for row, c in involved:
            x[c] = -row[j] * L // row[c]
        return primitive(x)

    def kernel(self) -> list[list[int]]:
        return [self.kernel_vector(j) for j in self.free_columns()]


def exact_analysis(M: np.ndarray) -> Echelon:
    """Echelon form spanning the row space of the integer matrix ``M`` (exact).

    Rows certified independent modulo a prime seed the echelon; the kernel is
    then checked against every row, and any row it misses is added.  The loop
    ends with an echelon whose kernel annihilates all rows, hence one that
    spans the row space.
    """
    M = np.asarray(M)
    n, m = M.shape
    E = Echelon(m)
    if n == 0:
        return E
    rows, _ = independent_rows_mod_p(M)
    for r in rows:
        E.add(M[r].tolist())
    while True:
        K = E.kernel()
        if not K:
            return E
        Kt = int_array(np.array(K, dtype=object).T)
        bad = np.flatnonzero(np.any(matmul(M, Kt) != 0, axis=1))
        if bad.size == 0:
            return E
        E.add(M[int(bad[0])].tolist())


def matrix_rank(M: np.ndarray) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    rows, _ = independent_rows_mod_p(M)
    if len(rows) == min(M.shape):
        return len(rows)
    return exact_analysis(M).rank


# ---------------------------------------------------------------------------
# public point-set operations


def affine_rank(points: Sequence[Sequence]) -> int:
    """Maximum number of affinely independent points (0 for an empty list)."""
    rows, _ = integer_rows(points)
    if not rows:
        return 0
    return matrix_rank(int_array(rows))


def kernel_basis(points: Sequence[Sequence]) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """Basis of affine functionals ``(a, b)`` with ``<a, p> = b`` on every point."""
    rows, dim = integer_rows(points)
    if not rows:
        raise DimensionError("kernel_basis needs at least one point")
    E = exact_analysis(int_array(rows))
    out = []
    for vec in E.kernel():
        # homogeneous functional (c0, c) vanishes on (1, p): c0 + <c, p> = 0
        a = tuple(Fraction(-x) for x in vec[1:])
        out.append((a, Fraction(vec[0])))
    assert len(out) == dim + 1 - E.rank
    return out


def gauss_jordan_inverse_columns(M: list[list[int]]) -> list[list[int]]:
    """Columns of ``M^{-1}`` for a nonsingular square integer matrix.

    Each column is returned scaled to a primitive integer vector with the
    sign that makes ``M @ col`` a positive multiple of the unit vector.
    """
    n = len(M)
    A = [list(map(int, row)) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        r = next(i for i in range(c, n) if A[i][c])
        A[c], A[r] = A[r], A[c]
        piv = A[c]
        pc = piv[c]
        for i in range(n):
            if i != c and A[i][c]:
                ic = A[i][c]
                A[i] = primitive([x * pc - y * ic for x, y in zip(A[i], piv)])
    cols = []
    for j in range(n):
        # row i reads A[i][i] * x_i = A[i][n + j]
        L = lcm(*(abs(A[i][i]) for i in range(n)))
        col = [A[i][n + j] * (L // A[i][i]) for i in range(n)]
        if L and sum(m * x for m, x in zip(M[j], col)) < 0:
            col = [-x for x in col]
        cols.append(primitive(col))
    return cols
