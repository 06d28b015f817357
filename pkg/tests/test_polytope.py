from fractions import Fraction

import pytest

from adjsample.exact import DimensionError, affine_rank
from adjsample.polytope import (
    Inequality,
    PolytopeError,
    VPolytope,
    face_from_inequality,
    facet_from_tight,
    is_facet,
    residual,
    tight_set,
)


def idx(P, *pts):
    rows = [tuple(map(int, r)) for r in P.W.tolist()]
    return tuple(sorted(rows.index(p) for p in pts))


def test_inequality_normalization_examples():
    assert Inequality((2, 4), 6) == Inequality((1, 2), 3)
    q = Inequality((Fraction(1, 2), Fraction(1, 3)), 1)
    assert (q.a, q.b) == ((3, 2), 6)


def test_residual_examples(square):
    x_le_1 = Inequality((1, 0), 1)
    assert residual(square, x_le_1, idx(square, (0, 0))[0]) == 1
    assert residual(square, x_le_1, idx(square, (1, 1))[0]) == 0
    assert residual(square, Inequality((1, 0), 0), idx(square, (1, 0))[0]) == -1


def test_residual_errors(square):
    with pytest.raises(IndexError):
        residual(square, Inequality((1, 0), 1), 7)
    with pytest.raises(DimensionError):
        square.residuals(Inequality((1, 0, 0), 1))


def test_tight_set_examples(square, chsh):
    assert tight_set(square, Inequality((1, 0), 1)) == (idx(square, (1, 0), (1, 1)), True)
    assert tight_set(square, Inequality((1, 1), 0)) == (idx(square, (0, 0)), False)
    P, _ = chsh
    # -p(11|11) <= 0: the last Collins-Gisin coordinate
    pos = Inequality((0,) * 7 + (-1,), 0)
    t, valid = tight_set(P, pos)
    assert valid and len(t) == 12


def test_is_facet_examples(square, chsh):
    assert is_facet(square, Inequality((1, 0), 1))
    assert not is_facet(square, Inequality((1, 1), 2))
    P, _ = chsh
    pos = Inequality((0,) * 7 + (-1,), 0)
    assert is_facet(P, pos)
    assert P.rank_of(tight_set(P, pos)[0]) - 1 == P.intrinsic_dim - 1


def test_subface_polytopes(square, chsh):
    edge = face_from_inequality(square, Inequality((1, 0), 1))
    seg = edge.polytope
    assert seg.n == 2 and seg.intrinsic_dim == 1
    pt = face_from_inequality(seg, Inequality((0, 1), 1)).polytope
    assert pt.n == 1 and pt.intrinsic_dim == 0
    P, _ = chsh
    F = face_from_inequality(P, Inequality((0,) * 7 + (-1,), 0))
    assert F.polytope.n == 12 and F.polytope.intrinsic_dim == 7
    F.polytope.check_cached_dim()


def test_index_map_tracks_root(chsh):
    P, _ = chsh
    F = face_from_inequality(P, Inequality((0,) * 7 + (-1,), 0))
    G = face_from_inequality(F.polytope, Inequality((-1,) + (0,) * 7, 0), parent=F)
    for local, root in zip(G.tight, G.root_tight):
        assert tuple(G.owner.W[local]) == tuple(P.W[root])


def test_facet_from_tight_roundtrip(chsh):
    P, _ = chsh
    q = Inequality((0,) * 7 + (-1,), 0)
    F = facet_from_tight(P, tight_set(P, q)[0])
    assert F.support == q
    with pytest.raises(PolytopeError):
        facet_from_tight(P, (0, 1))


def test_vertices_must_be_distinct():
    with pytest.raises(PolytopeError):
        VPolytope([(0, 0), (0, 0), (1, 1)])


def test_rational_vertices():
    P = VPolytope([("1/2", 0), (0, "1/3"), (0, 0)])
    assert P.scale == 6 and P.intrinsic_dim == 2
    q = Inequality((2, 3), 1)
    assert P.tight_set(q) == ((0, 1), True)
    assert is_facet(P, q)


def test_lower_dimensional_polytope_basis():
    # a triangle embedded in the plane x + y + z = 1
    P = VPolytope([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert P.intrinsic_dim == 2
    assert len(P.basis) == 2
    assert affine_rank(P.vertices) == 3
