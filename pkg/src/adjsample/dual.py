"""Complete facet enumeration.

``double_description`` works in the affine coordinates of the polytope (its
basis columns), starts from a simplex and inserts the remaining vertices in
listed order.  Facets are homogeneous integer functionals ``c`` with
``c . (scale, w) >= 0`` on every inserted vertex.  Two facets of the current
(full-dimensional) hull are adjacent exactly when no third facet contains the
intersection of their tight sets; that combinatorial test is evaluated with
matrix products on 0/1 incidence matrices.

``ad_enumerate`` is the symmetric adjacency decomposition: every class
representative is rotated around all of its ridges, which come from a
recursive call (trivial group) or, below the cutoff, from the double
description method.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .exact import (
    Echelon,
    fits_int64,
    gauss_jordan_inverse_columns,
    int_array,
    matmul,
    max_abs,
    row_gcd,
    to_object,
)
from .polytope import Face, Inequality, VPolytope, _facet_basis
from .symmetry import PermGroup

_CHUNK = 4096
_PAIR_BUDGET = 1 << 18


@dataclass
class FacetList:
    polytope: VPolytope
    facets: list[Face] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.facets)

    def __iter__(self):
        return iter(self.facets)

    def tight_sets(self) -> set[tuple[int, ...]]:
        return {f.tight for f in self.facets}

    def inequalities(self) -> set[Inequality]:
        return {f.support for f in self.facets}


def _initial_simplex(X: np.ndarray) -> list[int]:
    E = Echelon(X.shape[1])
    chosen = []
    for i, row in enumerate(X.tolist()):
        if E.add(row):
            chosen.append(i)
            if E.rank == X.shape[1]:
                break
    return chosen


def _normalize_rows(C: np.ndarray) -> np.ndarray:
    g = row_gcd(C)
    g = np.where(g == 0, 1, g)
    return C // g[:, None]


def _adjacent_pairs(T: np.ndarray, P: np.ndarray, N: np.ndarray, need: int):
    """Pairs (p, n) from index arrays ``P`` x ``N`` whose tight sets meet in a ridge."""
    Tf = T.astype(np.float32)
    TN = Tf[N].T
    # a facet containing I contains its rarest vertex; test only those facets
    rank_of = np.argsort(np.argsort(T.sum(axis=0), kind="stable"), kind="stable")
    holders = {}
    out_p, out_n = [], []
    rows = max(1, _PAIR_BUDGET // max(len(N), 1))
    for s in range(0, len(P), rows):
        pi, ni = np.nonzero(Tf[P[s:s + rows]] @ TN >= need)
        pi += s
        for c in range(0, pi.size, _PAIR_BUDGET):
            a, b = pi[c:c + _PAIR_BUDGET], ni[c:c + _PAIR_BUDGET]
            I = T[P[a]] & T[N[b]]
            size = I.sum(axis=1)
            rare = np.argmin(np.where(I, rank_of[None, :], T.shape[1]), axis=1)
            keep = np.zeros(a.size, dtype=bool)
            order = np.argsort(rare, kind="stable")
            bounds = np.flatnonzero(np.diff(rare[order])) + 1
            for grp in np.split(order, bounds):
                u = int(rare[grp[0]])
                if u not in holders:
                    holders[u] = Tf[T[:, u]].T
                for t in range(0, grp.size, _CHUNK):
                    g = grp[t:t + _CHUNK]
                    contain = (I[g].astype(np.float32) @ holders[u]) == size[g, None]
                    keep[g] = contain.sum(axis=1) == 2
            out_p.append(a[keep])
            out_n.append(b[keep])
    if not out_p:
        return np.zeros(0, dtype=np.intp), np.zeros(0, dtype=np.intp)
    return np.concatenate(out_p), np.concatenate(out_n)


def double_description(Q: VPolytope, *, verify: bool = True) -> FacetList:
    k = Q.intrinsic_dim
    if k == 0:
        return FacetList(Q, [])
    cols = list(Q.basis)
    X = Q.homogenized(cols)
    m = Q.n
    simplex = _initial_simplex(X)
    inv_cols = gauss_jordan_inverse_columns(X[simplex].tolist())
    C = int_array(inv_cols)
    T = np.zeros((k + 1, m), dtype=bool)
    for j, v in enumerate(simplex):
        T[:, v] = True
        T[j, v] = False
    simplex_set = set(simplex)
    for v in range(m):
        if v in simplex_set:
            continue
        xv = X[v]
        s = matmul(C, xv)
        neg = np.flatnonzero(s < 0)
        zero = s == 0
        if neg.size == 0:
            T[zero, v] = True
            continue
        pos = np.flatnonzero(s > 0)
        pi, ni = _adjacent_pairs(T, pos, neg, k - 1)
        p_idx, n_idx = pos[pi], neg[ni]
        sp, sn = s[p_idx], s[n_idx]
        if C.dtype != object and fits_int64(max_abs(C), max(max_abs(sp), max_abs(sn)), 2):
            newC = sp[:, None] * C[n_idx] - sn[:, None] * C[p_idx]
        else:
            Co = to_object(C)
            newC = to_object(sp)[:, None] * Co[n_idx] - to_object(sn)[:, None] * Co[p_idx]
        newC = _normalize_rows(newC) if newC.size else newC.reshape(0, C.shape[1])
        newT = T[p_idx] & T[n_idx]
        newT[:, v] = True
        T[zero, v] = True
        keep = s >= 0
        if newC.dtype == object or C.dtype == object:
            C = np.vstack([to_object(C[keep]), to_object(newC)])
            if max_abs(C) < (1 << 40):
                C = C.astype(np.int64)
        else:
            C = np.vstack([C[keep], newC])
        T = np.vstack([T[keep], newT])

    facets = []
    for c, t in zip(C, T):
        c = [int(x) for x in c]
        a = [0] * Q.ambient_dim
        for col, x in zip(cols, c[1:]):
            a[col] = -x
        q = Inequality(tuple(a), c[0])
        face = Face(Q, np.flatnonzero(t), q, dim=k - 1, basis=_facet_basis(cols, c))
        facets.append(face)
    if verify:
        for f in facets:
            if not Q.is_facet(f.support):
                raise AssertionError(f"double description emitted a non-facet {f.support}")
    return FacetList(Q, facets)


def brute_force_facets(Q: VPolytope) -> set[tuple[int, ...]]:
    """Tight sets of all facets by trying every hyperplane through
    ``intrinsic_dim`` vertices (test oracle; tiny inputs only)."""
    k = Q.intrinsic_dim
    cols = list(Q.basis)
    X = Q.homogenized(cols).astype(object)
    out = set()
    for sub in combinations(range(Q.n), k):
        E = Echelon(k + 1)
        for i in sub:
            E.add(X[i].tolist())
        if E.rank != k:
            continue
        (h,) = E.kernel()
        vals = X @ np.array(h, dtype=object)
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            out.add(tuple(int(i) for i in np.flatnonzero(vals == 0)))
    return out


def all_facets(Q: VPolytope, cutoff: int, **kw) -> list[Face]:
    """Every facet of ``Q``: double description below ``cutoff`` vertices,
    otherwise a recursive adjacency decomposition without symmetry."""
    if Q.n < cutoff or Q.intrinsic_dim <= 1:
        return double_description(Q).facets
    store = ad_enumerate(Q, PermGroup.trivial(Q.n), cutoff, **kw)
    if not store.complete:
        raise RuntimeError(f"recursive enumeration stopped: {store.status}")
    return [r.face(Q) for r in store.records()]


def ad_enumerate(Q: VPolytope, G: PermGroup, cutoff: int, **kw):
    """Complete facet classes of ``Q`` under ``G`` (adjacency decomposition)."""
    from .search import SearchConfig, run_search

    cfg = kw.pop("config", None) or SearchConfig(method="ad", n_cutoff=cutoff, **kw)
    return run_search(Q, G, cfg)
