"""V-polytopes, inequalities and faces.

A :class:`VPolytope` stores its vertices as an integer matrix ``W`` equal to
``scale * vertices`` (``scale`` clears all denominators), so residual signs and
zero patterns are computed in integer arithmetic.  Faces record vertex indices
local to the polytope that owns them; every polytope also carries an
``index_map`` into the root vertex list, so incidences at any recursion depth
can be read in root numbering.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Sequence

import numpy as np

from .exact import (
    DimensionError,
    as_fraction,
    exact_analysis,
    fits_int64,
    independent_rows_mod_p,
    int_array,
    matmul,
    matrix_rank,
    max_abs,
    normalize,
)


class PolytopeError(ValueError):
    pass


@dataclass(frozen=True)
class Inequality:
    """The half-space ``<a, x> <= b`` with coprime integer coefficients."""

    a: tuple[int, ...]
    b: int

    def __post_init__(self):
        a, b = normalize(self.a, self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def dim(self) -> int:
        return len(self.a)

    @cached_property
    def coeffs(self) -> np.ndarray:
        return int_array(list(self.a))

    def residual_at(self, x: Sequence) -> Fraction:
        if len(x) != len(self.a):
            raise DimensionError(f"point of length {len(x)} for an inequality of length {len(self.a)}")
        return self.b - sum(ai * as_fraction(xi) for ai, xi in zip(self.a, x))

    def __str__(self) -> str:
        return " ".join(map(str, self.a)) + f" <= {self.b}"


class VPolytope:
    """Convex hull of a finite list of distinct points."""

    def __init__(
        self,
        vertices,
        name: str = "",
        *,
        index_map: Sequence[int] | None = None,
        check_distinct: bool = True,
        _scale: int | None = None,
        _basis: tuple[int, ...] | None = None,
        _dim: int | None = None,
    ):
        if isinstance(vertices, np.ndarray) and vertices.dtype != object and _scale is not None:
            W = vertices
            scale = _scale
        else:
            rows = [[as_fraction(x) for x in v] for v in vertices]
            if rows and len({len(r) for r in rows}) != 1:
                raise DimensionError("vertices of different lengths")
            scale = _scale or (lcm(*(x.denominator for r in rows for x in r)) if rows and rows[0] else 1)
            W = int_array([[int(x * scale) for x in r] for r in rows]) if rows else np.zeros((0, 0), dtype=np.int64)
        self.W = W
        self.scale = scale
        self.name = name
        self.n, self.ambient_dim = W.shape
        if self.n == 0:
            raise PolytopeError("a polytope needs at least one vertex")
        self.index_map = np.arange(self.n) if index_map is None else np.asarray(index_map, dtype=np.int64)
        if check_distinct and len({tuple(r) for r in W.tolist()}) != self.n:
            raise PolytopeError("vertices are not pairwise distinct")
        self._basis_hint = _basis
        self._dim_hint = _dim

    def __repr__(self) -> str:
        label = self.name or "VPolytope"
        return f"<{label}: n={self.n}, d={self.ambient_dim}>"

    def vertex(self, i: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(x), self.scale) for x in self.W[i])

    @property
    def vertices(self) -> list[tuple[Fraction, ...]]:
        return [self.vertex(i) for i in range(self.n)]

    # -- affine structure -------------------------------------------------

    def homogenized(self, cols: Sequence[int] | None = None) -> np.ndarray:
        """Rows ``(scale, W[i, cols])``: the vertices as homogeneous vectors."""
        W = self.W if cols is None else self.W[:, list(cols)]
        ones = np.full((self.n, 1), self.scale, dtype=W.dtype if W.dtype == object else np.int64)
        return np.hstack([ones, W])

    @cached_property
    def _affine(self) -> tuple[int, tuple[int, ...]]:
        if self._basis_hint is not None and self._dim_hint is not None:
            return self._dim_hint, tuple(self._basis_hint)
        E = exact_analysis(self.homogenized())
        basis = tuple(sorted(c - 1 for c in E.pivots if c > 0))
        return E.rank - 1, basis

    @property
    def intrinsic_dim(self) -> int:
        return self._affine[0]

    @property
    def basis(self) -> tuple[int, ...]:
        """Coordinates that parametrize the affine hull injectively."""
        return self._affine[1]

    def check_cached_dim(self) -> None:
        fresh = matrix_rank(self.homogenized()) - 1
        assert fresh == self.intrinsic_dim, (fresh, self.intrinsic_dim)

    # -- inequality queries -----------------------------------------------

    def residuals(self, q: Inequality) -> np.ndarray:
        """``scale * (b - <a, v>)`` for every vertex (exact integers)."""
        if q.dim != self.ambient_dim:
            raise DimensionError(f"inequality of length {q.dim} on a polytope in dimension {self.ambient_dim}")
        a = q.coeffs
        if self.W.dtype != object and a.dtype != object and fits_int64(max_abs(a), max(self.ambient_dim, 1), max_abs(self.W) + 1, self.scale * (abs(q.b) + 1)):
            return self.scale * q.b - self.W @ a
        return self.scale * q.b - matmul(self.W, a)

    def residual(self, q: Inequality, i: int) -> Fraction:
        if not 0 <= i < self.n:
            raise IndexError(f"vertex index {i} out of range for {self.n} vertices")
        return Fraction(int(self.residuals(q)[i]), self.scale)

    def tight_set(self, q: Inequality) -> tuple[tuple[int, ...], bool]:
        r = self.residuals(q)
        return tuple(int(i) for i in np.flatnonzero(r == 0)), bool(np.all(r >= 0))

    def rank_of(self, idx: Sequence[int]) -> int:
        idx = list(idx)
        if not idx:
            return 0
        return matrix_rank(self.homogenized()[idx])

    def is_facet(self, q: Inequality) -> bool:
        r = self.residuals(q)
        if np.any(r < 0) or not np.any(r > 0):
            return False
        tight = np.flatnonzero(r == 0)
        k = self.intrinsic_dim
        if tight.size < k:
            return False
        X = self.homogenized()[tight]
        # a modular rank of k certifies rank >= k; the hyperplane caps it at k
        if len(independent_rows_mod_p(X)[0]) >= k:
            return True
        return matrix_rank(X) == k


class Face:
    """A face of ``owner``: the vertices ``tight`` where ``support`` is tight.

    ``parent`` is the face of the enclosing polytope that ``owner`` was cut
    from (``None`` when ``owner`` is the root).
    """

    __slots__ = ("owner", "tight", "support", "parent", "_dim", "_basis", "__dict__")

    def __init__(self, owner: VPolytope, tight, support: Inequality, parent: "Face | None" = None, *, dim: int | None = None, basis: tuple[int, ...] | None = None):
        tight = tuple(sorted(int(i) for i in tight))
        if not tight:
            raise PolytopeError("a face needs a nonempty tight set")
        self.owner = owner
        self.tight = tight
        self.support = support
        self.parent = parent
        self._dim = dim
        self._basis = basis

    def __repr__(self) -> str:
        return f"<Face |tight|={len(self.tight)} dim={self.dim} of {self.owner!r}>"

    @property
    def n(self) -> int:
        return len(self.tight)

    @cached_property
    def root_tight(self) -> tuple[int, ...]:
        return tuple(int(i) for i in self.owner.index_map[list(self.tight)])

    @property
    def dim(self) -> int:
        if self._dim is None:
            self._dim = self.owner.rank_of(self.tight) - 1
        return self._dim

    @property
    def basis(self) -> tuple[int, ...]:
        if self._basis is None:
            cols = list(self.owner.basis)
            X = self.owner.homogenized(cols)[list(self.tight)]
            E = exact_analysis(X)
            self._basis = tuple(sorted(cols[c - 1] for c in E.pivots if c > 0))
            self._dim = E.rank - 1
        return self._basis

    @cached_property
    def polytope(self) -> VPolytope:
        idx = list(self.tight)
        return VPolytope(
            self.owner.W[idx],
            name=f"{self.owner.name}/face",
            index_map=self.owner.index_map[idx],
            check_distinct=False,
            _scale=self.owner.scale,
            _basis=self.basis,
            _dim=self.dim,
        )

    def check(self) -> None:
        """Assert the face invariants against the owner's vertex set."""
        tight, valid = self.owner.tight_set(self.support)
        assert valid, "support violated on owner"
        assert tight == self.tight, "support tight set differs from face"


def residual(P: VPolytope, q: Inequality, i: int) -> Fraction:
    return P.residual(q, i)


def tight_set(P: VPolytope, q: Inequality) -> tuple[tuple[int, ...], bool]:
    return P.tight_set(q)


def is_facet(P: VPolytope, q: Inequality) -> bool:
    return P.is_facet(q)


def subface_polytope(F: Face) -> VPolytope:
    return F.polytope


def face_from_inequality(P: VPolytope, q: Inequality, parent: Face | None = None) -> Face:
    tight, valid = P.tight_set(q)
    if not valid:
        raise PolytopeError(f"inequality {q} is violated on {P!r}")
    return Face(P, tight, q, parent)


def facet_from_tight(P: VPolytope, tight: Sequence[int], parent: Face | None = None) -> Face:
    """Rebuild the facet of ``P`` whose tight set is ``tight``."""
    tight = sorted(int(i) for i in tight)
    cols = list(P.basis)
    X = P.homogenized(cols)
    E = exact_analysis(X[tight])
    if E.rank != P.intrinsic_dim:
        raise PolytopeError("tight set does not span a hyperplane of the polytope")
    (h,) = E.kernel()
    vals = matmul(X, int_array(h))
    if np.any(vals < 0):
        h = [-x for x in h]
        vals = -vals
    if np.any(vals < 0) or not np.any(vals > 0):
        raise PolytopeError("tight set is not a facet")
    if tuple(np.flatnonzero(vals == 0)) != tuple(tight):
        raise PolytopeError("tight set is not closed: the hyperplane contains further vertices")
    a = [0] * P.ambient_dim
    for c, x in zip(cols, h[1:]):
        a[c] = -x
    # homogeneous value h0 * scale + <h', W> equals scale * (b - <a, v>) with b = h0
    q = Inequality(tuple(a), h[0])
    return Face(P, tight, q, parent, dim=P.intrinsic_dim - 1, basis=_facet_basis(cols, h))


def _facet_basis(cols: Sequence[int], h: Sequence[int]) -> tuple[int, ...]:
    """Drop one coordinate the facet functional depends on."""
    j = next(i for i in range(1, len(h)) if h[i])
    return tuple(c for i, c in enumerate(cols, start=1) if i != j)
