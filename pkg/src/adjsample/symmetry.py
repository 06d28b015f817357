"""Permutation groups acting on polytope vertices.

Permutations are numpy index arrays: ``g[i]`` is the image of ``i`` and
``g[h]`` is the composition ``g o h``.

The stabilizer chain uses the complete base ``0, 1, ..., n-1``: level ``p``
holds the basic orbit of ``p`` under the pointwise stabilizer of ``0..p-1``
and is simply absent when that orbit is trivial.  Sifting therefore jumps
straight to the first point a permutation moves.

Two canonical forms of a vertex set are provided.  ``method="lexmin"`` is the
lexicographically smallest image (breadth-first search over the chain, as in
Linton's smallest-image algorithm).  ``method="refined"`` runs the same search
but, at every level, keeps only candidates whose intersection counts with the
orbits of the current stabilizer are lexicographically largest.  The selection
rule is invariant under the stabilizer, so the result is still a canonical
image of the set's orbit; it is usually not the lexicographic minimum, but
the pruning keeps the candidate lists short on large groups.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class InvalidGroupError(ValueError):
    pass


def _as_perm(g, n: int) -> np.ndarray:
    g = np.asarray(g, dtype=np.int64)
    if g.shape != (n,):
        raise InvalidGroupError(f"permutation of length {g.shape} on degree {n}")
    seen = np.zeros(n, dtype=bool)
    if g.min(initial=0) < 0 or g.max(initial=0) >= n:
        raise InvalidGroupError("image out of range")
    seen[g] = True
    if not seen.all():
        raise InvalidGroupError("generator is not a bijection")
    return g


def inverse(g: np.ndarray) -> np.ndarray:
    inv = np.empty_like(g)
    inv[g] = np.arange(g.size)
    return inv


@dataclass
class Level:
    point: int
    gens: list[np.ndarray] = field(default_factory=list)
    orbit: list[int] = field(default_factory=list)
    index: dict[int, int] = field(default_factory=dict)
    U: list[np.ndarray] = field(default_factory=list)
    Uinv: list[np.ndarray] = field(default_factory=list)

    def extend(self, n: int, new_gens: Sequence[np.ndarray]) -> None:
        """Add generators and close the orbit and transversal under all of them."""
        if not self.orbit:
            ident = np.arange(n)
            self.orbit, self.index = [self.point], {self.point: 0}
            self.U, self.Uinv = [ident], [ident]
        self.gens.extend(new_gens)
        queue = deque()
        # old points only need the new generators; new points need all
        for j in range(len(self.orbit)):
            queue.append((j, new_gens))
        while queue:
            j, gens = queue.popleft()
            x, u = self.orbit[j], self.U[j]
            for s in gens:
                y = int(s[x])
                if y not in self.index:
                    w = s[u]
                    self.index[y] = len(self.orbit)
                    self.orbit.append(y)
                    self.U.append(w)
                    self.Uinv.append(inverse(w))
                    queue.append((len(self.orbit) - 1, self.gens))


class StabChain:
    """Stabilizer chain over the base ``0..n-1`` built by randomized Schreier-Sims
    followed by a full Schreier-generator verification pass."""

    def __init__(self, n: int, generators: Sequence[np.ndarray], seed: int = 0):
        self.n = n
        self.ident = np.arange(n)
        self.levels: dict[int, Level] = {}
        gens = [g for g in generators if not np.array_equal(g, self.ident)]
        for g in gens:
            self._insert(g)
        if gens:
            self._random_phase(gens, random.Random(seed))
            self._verify()
        self.base = sorted(self.levels)
        self._orbit_labels: dict[int, np.ndarray] = {}

    # -- construction -------------------------------------------------------

    def sift(self, h: np.ndarray) -> tuple[np.ndarray | None, int]:
        """Strip ``h`` through the chain; returns (residue or None, level)."""
        while True:
            moved = np.flatnonzero(h != self.ident)
            if moved.size == 0:
                return None, self.n
            p = int(moved[0])
            lvl = self.levels.get(p)
            if lvl is None:
                return h, p
            j = lvl.index.get(int(h[p]))
            if j is None:
                return h, p
            h = lvl.Uinv[j][h]

    def _insert(self, g: np.ndarray) -> bool:
        h, p = self.sift(g)
        if h is None:
            return False
        if p not in self.levels:
            self.levels[p] = Level(p)
        for q, lvl in sorted(self.levels.items()):
            if q <= p:
                lvl.extend(self.n, [h])
        return True

    def _random_phase(self, gens, rng: random.Random, patience: int = 40) -> None:
        pool = [g.copy() for g in gens]
        while len(pool) < 10:
            pool.append(pool[rng.randrange(len(pool))].copy())
        acc = self.ident.copy()
        for _ in range(50):
            i, j = rng.sample(range(len(pool)), 2)
            pool[i] = pool[i][pool[j]]
        quiet = 0
        while quiet < patience:
            i, j = rng.sample(range(len(pool)), 2)
            pool[i] = pool[i][pool[j]] if rng.random() < 0.5 else pool[j][pool[i]]
            acc = acc[pool[i]]
            if self._insert(acc.copy()):
                quiet = 0
            else:
                quiet += 1

    def _verify(self) -> None:
        changed = True
        while changed:
            changed = False
            for p in sorted(self.levels, reverse=True):
                lvl = self.levels[p]
                for j, x in enumerate(lvl.orbit):
                    u = lvl.U[j]
                    for s in list(lvl.gens):
                        y = int(s[x])
                        sg = lvl.Uinv[lvl.index[y]][s[u]]
                        if self._insert(sg):
                            changed = True
                if changed:
                    break

    # -- queries -------------------------------------------------------------

    @property
    def order(self) -> int:
        out = 1
        for lvl in self.levels.values():
            out *= len(lvl.orbit)
        return out

    def strong_generators(self) -> list[np.ndarray]:
        seen, out = set(), []
        for lvl in self.levels.values():
            for g in lvl.gens:
                key = g.tobytes()
                if key not in seen:
                    seen.add(key)
                    out.append(g)
        return out

    def contains(self, g) -> bool:
        return self.sift(np.asarray(g, dtype=np.int64))[0] is None

    def orbit_labels(self, p: int) -> np.ndarray:
        """Orbit of every point under the stabilizer of ``0..p-1``, as labels
        numbered in order of each orbit's smallest point."""
        labels = self._orbit_labels.get(p)
        if labels is not None:
            return labels
        gens = [g for q, lvl in self.levels.items() if q >= p for g in lvl.gens]
        parent = np.arange(self.n)

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in gens:
            for x in np.flatnonzero(g != self.ident):
                a, b = find(int(x)), find(int(g[x]))
                if a != b:
                    parent[max(a, b)] = min(a, b)
        roots = np.array([find(x) for x in range(self.n)])
        _, labels = np.unique(roots, return_inverse=True)
        self._orbit_labels[p] = labels
        return labels

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        g = self.ident.copy()
        for p in self.base:
            lvl = self.levels[p]
            g = g[lvl.U[int(rng.integers(len(lvl.U)))]]
        return g

    def elements(self) -> Iterable[np.ndarray]:
        """Every group element (only sensible for small groups)."""

        def rec(i, g):
            if i == len(self.base):
                yield g
                return
            for u in self.levels[self.base[i]].U:
                yield from rec(i + 1, g[u])

        yield from rec(0, self.ident.copy())


class PermGroup:
    """A group of vertex permutations given by generators."""

    def __init__(self, degree: int, generators: Iterable = (), *, seed: int = 0):
        self.degree = int(degree)
        self.generators = [_as_perm(g, self.degree) for g in generators]
        self.seed = seed
        self._chain: StabChain | None = None

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls(degree, [])

    @property
    def chain(self) -> StabChain:
        if self._chain is None:
            self._chain = StabChain(self.degree, self.generators, self.seed)
        return self._chain

    def build_chain(self) -> StabChain:
        return self.chain

    @property
    def is_trivial(self) -> bool:
        return all(np.array_equal(g, np.arange(self.degree)) for g in self.generators)

    @property
    def order(self) -> int:
        return self.chain.order

    def __repr__(self) -> str:
        return f"<PermGroup degree={self.degree} generators={len(self.generators)}>"


def build_chain(G: PermGroup) -> StabChain:
    return G.chain


def bfs_closure(G: PermGroup, limit: int = 10**6) -> set[bytes]:
    """All elements by breadth-first closure over the generators (test oracle)."""
    ident = np.arange(G.degree)
    seen = {ident.tobytes()}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in G.generators:
            h = s[g]
            key = h.tobytes()
            if key not in seen:
                seen.add(key)
                if len(seen) > limit:
                    raise OverflowError("group larger than the closure limit")
                queue.append(h)
    return seen


# ---------------------------------------------------------------------------
# canonical images


def _check_set(S, n: int) -> np.ndarray:
    S = np.unique(np.asarray(list(S), dtype=np.int64))
    if S.size == 0:
        raise ValueError("empty set")
    if S[0] < 0 or S[-1] >= n:
        raise IndexError("set element out of range")
    return S


def _dedup(masks: np.ndarray, perms: np.ndarray | None):
    packed = np.packbits(masks, axis=1)
    _, first = np.unique(packed, axis=0, return_index=True)
    first.sort()
    return masks[first], (perms[first] if perms is not None else None)


def _select_lexmax(rows: np.ndarray) -> np.ndarray:
    """Indices of the lexicographically largest rows of an integer matrix."""
    keep = np.arange(rows.shape[0])
    for c in range(rows.shape[1]):
        col = rows[keep, c]
        top = col.max()
        keep = keep[col == top]
        if keep.size == 1:
            break
    return keep


def canonical_image(S: Iterable[int], G: PermGroup, method: str = "refined", witness: bool = False):
    """Canonical image of the set ``S`` under ``G``.

    Returns the sorted image tuple, and with ``witness=True`` also a group
    element mapping ``S`` onto it.
    """
    n = G.degree
    S = _check_set(S, n)
    chain = G.chain
    cand = np.zeros((1, n), dtype=bool)
    cand[0, S] = True
    perms = np.arange(n)[None, :].copy() if witness else None
    size = S.size

    if method == "lexmin":
        points = range(n)
    elif method == "refined":
        points = chain.base
    else:
        raise ValueError(f"unknown canonical method {method!r}")

    included = 0
    for p in points:
        if method == "lexmin" and included == size:
            break
        lvl = chain.levels.get(p)
        if method == "refined" and cand.shape[0] > 1:
            labels = chain.orbit_labels(p)
            counts = np.zeros((cand.shape[0], int(labels.max()) + 1), dtype=np.int64)
            rr, cc = np.nonzero(cand)
            np.add.at(counts, (rr, labels[cc]), 1)
            keep = _select_lexmax(counts)
            cand = cand[keep]
            if perms is not None:
                perms = perms[keep]
        if lvl is None:
            if method == "lexmin":
                has = cand[:, p]
                if has.any():
                    included += 1
                    if not has.all():
                        cand = cand[has]
                        if perms is not None:
                            perms = perms[has]
            continue
        orbit = np.asarray(lvl.orbit)
        hits = cand[:, orbit]
        any_hit = hits.any(axis=1)
        if any_hit.any():
            if method == "lexmin":
                included += 1
            ci, oj = np.nonzero(hits)
        else:
            ci, oj = np.nonzero(np.ones_like(hits))
        U = np.stack(lvl.U)
        new = cand[ci[:, None], U[oj]]
        if perms is not None:
            Uinv = np.stack(lvl.Uinv)
            perms = Uinv[oj[:, None], perms[ci]]
        cand, perms = _dedup(new, perms)

    # the remaining candidates differ only by the trivial group: take the smallest
    if cand.shape[0] > 1:
        packed = np.packbits(cand, axis=1)
        best = max(range(cand.shape[0]), key=lambda i: packed[i].tobytes())
    else:
        best = 0
    image = tuple(int(i) for i in np.flatnonzero(cand[best]))
    if witness:
        return image, perms[best]
    return image


def canonical_set(S: Iterable[int], G: PermGroup, method: str = "refined") -> tuple[int, ...]:
    if G.is_trivial:
        return tuple(int(i) for i in _check_set(S, G.degree))
    return canonical_image(S, G, method)


def are_equivalent(S1, S2, G: PermGroup, method: str = "refined") -> bool:
    S1, S2 = set(S1), set(S2)
    if len(S1) != len(S2):
        return False
    if S1 == S2:
        return True
    return canonical_set(S1, G, method) == canonical_set(S2, G, method)


def apply(g: np.ndarray, S: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(int(g[i]) for i in S))


def orbit_size(S: Iterable[int], G: PermGroup, cap: int = 10**6) -> int | None:
    """Size of the orbit of ``S`` by breadth-first search; ``None`` beyond ``cap``."""
    n = G.degree
    S = _check_set(S, n)
    mask = np.zeros(n, dtype=bool)
    mask[S] = True
    start = np.packbits(mask).tobytes()
    seen = {start}
    queue = deque([mask])
    invs = [inverse(g) for g in G.generators]
    while queue:
        m = queue.popleft()
        for ginv in invs:
            img = m[ginv]
            key = np.packbits(img).tobytes()
            if key not in seen:
                if len(seen) >= cap:
                    return None
                seen.add(key)
                queue.append(img)
    return len(seen)


def find_mapping(S1, S2, G: PermGroup) -> np.ndarray | None:
    """A group element taking ``S1`` onto ``S2``, or ``None`` (pairwise test)."""
    k1, g1 = canonical_image(S1, G, "refined", witness=True)
    k2, g2 = canonical_image(S2, G, "refined", witness=True)
    if k1 != k2:
        return None
    return inverse(g2)[g1]
