"""Bell polytopes and cut polytopes of complete multipartite graphs.

Vertex index conventions (frozen; the file formats depend on them):

* Bell ``L(ma, mb, na, nb)``: a deterministic strategy is a pair of output
  tables ``alpha`` (length ma, values < na) and ``beta`` (length mb, values
  < nb).  Its index is ``enc(alpha) * nb**mb + enc(beta)`` where ``enc`` reads
  the table as a mixed-radix number with entry 0 most significant.
  Coordinates (Collins-Gisin, last output dropped): ``P(a|x)`` for x, a < na-1;
  then ``P(b|y)`` for y, b < nb-1; then ``P(ab|xy)`` ordered by x, y, a, b.
* Cut ``CUT(K_{n1,...,np})``: graph vertices are numbered part by part; edges
  are cross-part pairs ``(u, v)``, u < v, in lexicographic order.  The cut
  ``delta(S)`` with ``S`` a subset of ``{1..N-1}`` has index
  ``sum(2**(v-1) for v in S)``.  A single part ``[N]`` means ``K_N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .polytope import VPolytope
from .symmetry import PermGroup


class ScenarioError(ValueError):
    pass


class ConstructionError(AssertionError):
    pass


@dataclass(frozen=True)
class BellScenario:
    ma: int
    mb: int
    na: int
    nb: int

    def __post_init__(self):
        if self.ma < 1 or self.mb < 1:
            raise ScenarioError("each party needs at least one input")
        if self.na < 2 or self.nb < 2:
            raise ScenarioError("each party needs at least two outputs")

    @property
    def name(self) -> str:
        return f"L{self.ma}{self.mb}{self.na}{self.nb}"

    @property
    def dimension(self) -> int:
        ma, mb, na, nb = self.ma, self.mb, self.na, self.nb
        return ma * (na - 1) + mb * (nb - 1) + ma * mb * (na - 1) * (nb - 1)

    @property
    def vertex_count(self) -> int:
        return self.na**self.ma * self.nb**self.mb


@dataclass(frozen=True)
class MultipartiteGraph:
    parts: tuple[int, ...]
    edges: tuple[tuple[int, int], ...] = field(init=False, repr=False)

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if not parts or any(p < 1 for p in parts):
            raise ScenarioError("part sizes must be positive")
        object.__setattr__(self, "parts", parts)
        if self.N < 2:
            raise ScenarioError("degenerate graph: fewer than two vertices")
        label = self.part_of
        edges = tuple((u, v) for u in range(self.N) for v in range(u + 1, self.N) if len(parts) == 1 or label[u] != label[v])
        object.__setattr__(self, "edges", edges)

    @property
    def N(self) -> int:
        return sum(self.parts)

    @property
    def part_of(self) -> list[int]:
        return [i for i, p in enumerate(self.parts) for _ in range(p)]

    @property
    def name(self) -> str:
        if len(self.parts) == 1:
            return f"K{self.parts[0]}"
        return "K" + "_".join(map(str, self.parts))

    @property
    def edge_count_formula(self) -> int:
        if len(self.parts) == 1:
            return self.N * (self.N - 1) // 2
        return (self.N**2 - sum(p * p for p in self.parts)) // 2


# ---------------------------------------------------------------------------
# Bell


def _digits(code: int, base: int, length: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        out.append(code % base)
        code //= base
    return tuple(reversed(out))


def _encode(digits, base: int) -> int:
    code = 0
    for d in digits:
        code = code * base + d
    return code


def bell_strategies(s: BellScenario) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    out = []
    for ia in range(s.na**s.ma):
        alpha = _digits(ia, s.na, s.ma)
        for ib in range(s.nb**s.mb):
            out.append((alpha, _digits(ib, s.nb, s.mb)))
    return out


def bell_vector(s: BellScenario, alpha, beta) -> list[int]:
    v = [int(alpha[x] == a) for x in range(s.ma) for a in range(s.na - 1)]
    v += [int(beta[y] == b) for y in range(s.mb) for b in range(s.nb - 1)]
    v += [
        int(alpha[x] == a and beta[y] == b)
        for x in range(s.ma)
        for y in range(s.mb)
        for a in range(s.na - 1)
        for b in range(s.nb - 1)
    ]
    return v


def bell_index(s: BellScenario, alpha, beta) -> int:
    return _encode(alpha, s.na) * s.nb**s.mb + _encode(beta, s.nb)


def bell_generators(s: BellScenario) -> list[list[int]]:
    strategies = bell_strategies(s)
    maps = []

    def relabel(f):
        return [bell_index(s, *f(al, be)) for al, be in strategies]

    def swap(t, i):
        t = list(t)
        t[i], t[i + 1] = t[i + 1], t[i]
        return tuple(t)

    for x in range(s.ma - 1):
        maps.append(relabel(lambda al, be, x=x: (swap(al, x), be)))
    for y in range(s.mb - 1):
        maps.append(relabel(lambda al, be, y=y: (al, swap(be, y))))

    def flip(o, k):
        return k + 1 if o == k else k if o == k + 1 else o

    for x in range(s.ma):
        for k in range(s.na - 1):
            maps.append(relabel(lambda al, be, x=x, k=k: (al[:x] + (flip(al[x], k),) + al[x + 1:], be)))
    for y in range(s.mb):
        for k in range(s.nb - 1):
            maps.append(relabel(lambda al, be, y=y, k=k: (al, be[:y] + (flip(be[y], k),) + be[y + 1:])))
    if s.ma == s.mb and s.na == s.nb:
        maps.append(relabel(lambda al, be: (be, al)))
    return maps


def bell_polytope(s: BellScenario) -> tuple[VPolytope, PermGroup]:
    verts = [bell_vector(s, al, be) for al, be in bell_strategies(s)]
    P = VPolytope(np.array(verts, dtype=np.int64), name=s.name, _scale=1)
    return P, PermGroup(P.n, bell_generators(s))


# ---------------------------------------------------------------------------
# cuts


def cut_vector(g: MultipartiteGraph, S: frozenset[int]) -> list[int]:
    return [int((u in S) != (v in S)) for u, v in g.edges]


def cut_index(g: MultipartiteGraph, S) -> int:
    S = set(S)
    if 0 in S:
        S = set(range(g.N)) - S
    return sum(1 << (v - 1) for v in S)


def cut_subset(g: MultipartiteGraph, index: int) -> frozenset[int]:
    return frozenset(v for v in range(1, g.N) if index >> (v - 1) & 1)


def cut_generators(g: MultipartiteGraph) -> list[list[int]]:
    n = 1 << (g.N - 1)
    subsets = [cut_subset(g, i) for i in range(n)]
    maps = []

    def from_vertex_perm(pi):
        return [cut_index(g, {pi[v] for v in S}) for S in subsets]

    starts = np.cumsum((0,) + g.parts[:-1]).tolist()
    for start, size in zip(starts, g.parts):
        for i in range(start, start + size - 1):
            pi = list(range(g.N))
            pi[i], pi[i + 1] = i + 1, i
            maps.append(from_vertex_perm(pi))
    if len(g.parts) > 1:
        for j in range(len(g.parts)):
            nxt = next((k for k in range(j + 1, len(g.parts)) if g.parts[k] == g.parts[j]), None)
            if nxt is None:
                continue
            pi = list(range(g.N))
            for t in range(g.parts[j]):
                pi[starts[j] + t], pi[starts[nxt] + t] = starts[nxt] + t, starts[j] + t
            maps.append(from_vertex_perm(pi))
    for v in range(g.N):
        maps.append([cut_index(g, S ^ {v}) for S in subsets])
    return maps


def cut_polytope(g: MultipartiteGraph) -> tuple[VPolytope, PermGroup]:
    verts = [cut_vector(g, cut_subset(g, i)) for i in range(1 << (g.N - 1))]
    P = VPolytope(np.array(verts, dtype=np.int64), name=g.name, _scale=1)
    return P, PermGroup(P.n, cut_generators(g))


# ---------------------------------------------------------------------------


def parse_parts(text: str) -> MultipartiteGraph:
    return MultipartiteGraph(tuple(int(t) for t in text.replace("_", ",").split(",") if t))


def verify_scenario_counts(spec, P: VPolytope, G: PermGroup) -> dict:
    """Self-check of a constructed polytope; raises :class:`ConstructionError`."""

    def require(cond, what):
        if not cond:
            raise ConstructionError(what)

    if isinstance(spec, BellScenario):
        require(P.n == spec.vertex_count, f"vertex count {P.n} != {spec.vertex_count}")
        require(P.ambient_dim == spec.dimension, f"dimension {P.ambient_dim} != {spec.dimension}")
    elif isinstance(spec, MultipartiteGraph):
        require(P.n == 1 << (spec.N - 1), f"vertex count {P.n} != 2^(N-1)")
        require(len(spec.edges) == spec.edge_count_formula, "edge count formula")
        require(P.ambient_dim == len(spec.edges), "one coordinate per edge")
    else:
        raise TypeError(f"unknown scenario {spec!r}")
    require(len({tuple(r) for r in P.W.tolist()}) == P.n, "vertices not distinct")
    require(P.intrinsic_dim == P.ambient_dim, "polytope not full-dimensional")
    rows = {tuple(r): i for i, r in enumerate(P.W.tolist())}
    for k, g in enumerate(G.generators):
        g = np.asarray(g)
        require(len(set(g.tolist())) == P.n and g.min() == 0 and g.max() == P.n - 1, f"generator {k} is not a bijection")
        # re-encode: the image list must again be the whole vertex set
        require(sorted(rows[tuple(P.W[int(j)].tolist())] for j in g) == list(range(P.n)), f"generator {k} image is not the vertex list")
    return {
        "name": getattr(spec, "name", P.name),
        "vertices": P.n,
        "dimension": P.ambient_dim,
        "generators": len(G.generators),
    }
