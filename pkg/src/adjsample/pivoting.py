"""Local moves on facets: rotation around a ridge, tightening, and descent.

All moves are the same min-ratio pivot.  Given an inequality ``f`` valid on a
polytope ``Q`` and a functional ``h``, the combination ``h + t f`` with

    t* = max over vertices v with res_f(v) > 0 of  -res_h(v) / res_f(v)

is valid on ``Q`` and becomes tight on every vertex attaining the maximum, in
addition to the vertices where both ``f`` and ``h`` are tight.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import (
    Echelon,
    fits_int64,
    independent_rows_mod_p,
    int_array,
    matmul,
    max_abs,
    primitive,
    row_gcd,
    to_object,
)
from .polytope import Face, Inequality, PolytopeError, VPolytope, _facet_basis


class DegenerateError(PolytopeError):
    pass


@dataclass(frozen=True)
class RotationContext:
    Q: VPolytope
    f: Inequality
    h: Inequality


def _min_ratio(res_h: np.ndarray, res_f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise exact maximum of ``-res_h / res_f`` over columns with ``res_f > 0``.

    ``res_h`` is (k, m), ``res_f`` is (m,).  Returns numerators and positive
    denominators as integer arrays of length k.
    """
    pos = np.flatnonzero(res_f > 0)
    if pos.size == 0:
        raise DegenerateError("no vertex off the facet: the facet is the whole polytope")
    N = -res_h[:, pos]
    D = res_f[pos]
    k = N.shape[0]
    if N.dtype != object and D.dtype != object:
        approx = N / D.astype(float)
    else:
        approx = np.array([[float(Fraction(int(x), int(y))) for x, y in zip(row, D)] for row in N]).reshape(N.shape)
    j = np.argmax(approx, axis=1)
    num = N[np.arange(k), j]
    den = D[j]
    # exact confirmation: N[:, c] * den <= num * D[c] for every column
    if fits_int64(max_abs(N), max_abs(D)) and N.dtype != object and D.dtype != object:
        lhs = N * den[:, None]
        rhs = num[:, None] * D[None, :]
    else:
        No, Do = to_object(N), to_object(D)
        lhs = No * to_object(den)[:, None]
        rhs = to_object(num)[:, None] * Do[None, :]
    bad = np.flatnonzero(np.any(lhs > rhs, axis=1))
    if bad.size:
        num, den = to_object(num), to_object(den)
        for r in bad:
            best = max((Fraction(int(x), int(y)) for x, y in zip(N[r], D)))
            num[r], den[r] = best.numerator, best.denominator
    return num, den


def _coeff_matrix(qs: Sequence[Inequality]) -> np.ndarray:
    return int_array([list(q.a) + [q.b] for q in qs])


def rotate_many(Q: VPolytope, f: Inequality, hs: Sequence[Inequality], res_f: np.ndarray | None = None):
    """Rotate the facet ``f`` of ``Q`` around each ridge given by ``hs``.

    Each ``h`` must be valid on the facet's vertices and tight exactly on the
    ridge.  Returns a list of ``(g, tight)`` with ``g`` normalized and
    ``tight`` the local indices where ``g`` is tight.
    """
    if not hs:
        return []
    if res_f is None:
        res_f = Q.residuals(f)
    H = _coeff_matrix(hs)
    ones = np.full((Q.n, 1), Q.scale, dtype=object if Q.W.dtype == object else np.int64)
    Xneg = np.hstack([-Q.W, ones])  # row . (a, b) = scale * (b - <a, v>)
    res_h = matmul(H, Xneg.T)
    num, den = _min_ratio(res_h, res_f)
    F = _coeff_matrix([f])[0]
    if fits_int64(max_abs(H) + 1, max_abs(den) + 1, 2) and fits_int64(max_abs(F) + 1, max_abs(num) + 1, 2) and H.dtype != object and num.dtype != object:
        Gm = H * den[:, None] + num[:, None] * F[None, :]
        R = res_h * den[:, None] + num[:, None] * res_f[None, :]
    else:
        Gm = to_object(H) * to_object(den)[:, None] + to_object(num)[:, None] * to_object(F)[None, :]
        R = to_object(res_h) * to_object(den)[:, None] + to_object(num)[:, None] * to_object(res_f)[None, :]
    g = row_gcd(Gm)
    out = []
    for row, gg, rr in zip(Gm, g, R):
        gg = int(gg)
        coeffs = [int(x) // gg for x in row]
        q = Inequality(tuple(coeffs[:-1]), coeffs[-1])
        out.append((q, tuple(int(i) for i in np.flatnonzero(rr == 0))))
    return out


def rotate(ctx: RotationContext, *, check: bool = True) -> Face:
    """The facet of ``ctx.Q`` sharing the ridge of ``ctx.h`` with ``ctx.f``."""
    Q = ctx.Q
    res_f = Q.residuals(ctx.f)
    if np.any(res_f < 0):
        raise PolytopeError("f is not valid on Q")
    ((g, tight),) = rotate_many(Q, ctx.f, [ctx.h], res_f)
    if g == ctx.f:
        raise DegenerateError("rotation returned the input facet")
    if check and not Q.is_facet(g):
        raise AssertionError("rotation produced a non-facet: the ridge is malformed")
    return Face(Q, tight, g, dim=Q.intrinsic_dim - 1)


def rotate_facet(Q: VPolytope, f: Inequality, h: Inequality, **kw) -> Face:
    return rotate(RotationContext(Q, f, h), **kw)


def _kernel_direction(E: Echelon, X: np.ndarray, res: np.ndarray, rng, span: int):
    """A kernel vector of ``E`` whose residuals are not parallel to ``res``.

    Deterministic (first usable basis vector) when ``rng`` is None, otherwise
    a random integer combination of the kernel basis.
    """
    i0 = int(np.flatnonzero(res)[0])
    ro = to_object(res)

    def usable(h):
        res_h = to_object(matmul(X, int_array(h)))
        return res_h if any(res_h * int(res[i0]) != ro * int(res_h[i0])) else None

    basis = E.kernel()
    if rng is not None:
        for _ in range(8):
            w = rng.integers(-span, span + 1, size=len(basis))
            h = primitive([int(sum(int(c) * v[i] for c, v in zip(w, basis))) for i in range(E.ncols)])
            if any(h) and (res_h := usable(h)) is not None:
                return h, res_h
    for h in basis:
        if (res_h := usable(h)) is not None:
            return h, res_h
    raise AssertionError("kernel of the tight rows is spanned by q")


def tighten(Q: VPolytope, q: Inequality, parent: Face | None = None, *, rng=None, span: int = 9, stats: dict | None = None) -> Face:
    """A facet of ``Q`` whose tight set contains the tight set of ``q``.

    With ``rng`` each step moves along a random kernel direction, so the
    facet reached is random among those containing the tight set.
    """
    res = Q.residuals(q)
    if np.any(res < 0):
        raise PolytopeError(f"{q} is not valid on {Q!r}")
    tight = np.flatnonzero(res == 0)
    if tight.size == 0:
        raise PolytopeError("inequality has an empty tight set; shift b to the maximum first")
    k = Q.intrinsic_dim
    if k == 0:
        raise DegenerateError("a point has no facets")
    cols = list(Q.basis)
    X = Q.homogenized(cols)
    E = Echelon(len(cols) + 1)
    rows, _ = independent_rows_mod_p(X[tight])
    for r in rows:
        E.add(X[tight[r]].tolist())
    for r in tight:
        if E.rank >= k:
            break
        E.add(X[r].tolist())
    a, b = list(q.a), q.b
    steps = 0
    if stats is not None:
        stats.setdefault("tight_sets", []).append(tuple(int(i) for i in tight))
    while E.rank < k:
        # q itself lies in the kernel; move along a direction independent of it
        h, res_h = _kernel_direction(E, X, res, rng, span)
        if not np.any(res_h < 0):
            h = [-x for x in h]
            res_h = -res_h
        num, den = _min_ratio(np.asarray(res_h)[None, :], res)
        num, den = int(num[0]), int(den[0])
        # new functional: den * h + num * q
        h_ineq = [0] * (Q.ambient_dim + 1)
        for c, x in zip(cols, h[1:]):
            h_ineq[c] = -int(x)
        h_ineq[-1] = int(h[0])
        combo = primitive([x * den + y * num for x, y in zip(h_ineq, list(a) + [b])])
        a, b = combo[:-1], combo[-1]
        res = Q.residuals(Inequality(tuple(a), b))
        new_tight = np.flatnonzero(res == 0)
        before = E.rank
        for r in np.setdiff1d(new_tight, tight):
            E.add(X[r].tolist())
        tight = new_tight
        steps += 1
        if stats is not None:
            stats["tight_sets"].append(tuple(int(i) for i in tight))
        if E.rank <= before:
            raise AssertionError("tightening step did not increase the rank")
    if stats is not None:
        stats["steps"] = stats.get("steps", 0) + steps
    (hk,) = E.kernel()
    support = Inequality(tuple(int(x) for x in a), int(b)) if steps else q
    return Face(Q, tight, support, parent, dim=k - 1, basis=_facet_basis(cols, hk))


def initial_facet(Q: VPolytope) -> Face:
    """Some facet of ``Q``, found by tightening a coordinate functional."""
    if Q.n < 2:
        raise DegenerateError("a point polytope has no facets")
    for j in range(Q.ambient_dim):
        col = Q.W[:, j]
        top = col.max()
        if np.all(col == top):
            continue
        a = [0] * Q.ambient_dim
        a[j] = 1
        return tighten(Q, Inequality(tuple(a), Fraction(int(top), Q.scale)))
    raise DegenerateError("all coordinates are constant: the polytope is a point")


def descend(F: Face, rng, *, span: int = 9) -> Face:
    """A random facet of the sub-polytope cut out by ``F``.

    ``rng`` is a seed or a ``numpy.random.Generator``.  The seed functional has
    integer entries in ``[-span, span]`` on the face's basis coordinates.
    """
    if F.dim < 1:
        raise DegenerateError("cannot descend from a vertex")
    rng = np.random.default_rng(rng)
    Q = F.polytope
    cols = list(Q.basis)
    Wc = Q.W[:, cols]
    while True:
        c = rng.integers(-span, span + 1, size=len(cols))
        vals = matmul(Wc, c.astype(np.int64))
        top = vals.max()
        if not np.all(vals == top):
            break
    a = [0] * Q.ambient_dim
    for col, x in zip(cols, c):
        a[col] = int(x)
    return tighten(Q, Inequality(tuple(a), Fraction(int(top), Q.scale)), parent=F, rng=rng, span=span)
