"""Adjacency sampling.

From a facet ``F`` of ``Q`` a descent chain ``F = F_0 > F_1 > ... > F_k`` of
random faces is built until the terminal face has at most ``cutoff``
vertices.  All facets of the terminal face come from the double description
method; each is a ridge of the terminal face inside its parent face, so rotating
lifts it one level up.  Repeating the lift along the chain ends with facets of
``Q`` adjacent to ``F`` (a subset of all of them).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dual import double_description
from .pivoting import descend, rotate_many
from .polytope import Face, Inequality, VPolytope
from .search import ClassStore, SearchConfig, run_search
from .symmetry import PermGroup, canonical_set


@dataclass
class DescentChain:
    faces: list[Face] = field(default_factory=list)

    @property
    def terminal(self) -> Face:
        return self.faces[-1]

    def sizes(self) -> list[int]:
        return [f.n for f in self.faces]


def descent_chain(F: Face, cutoff: int, rng) -> DescentChain:
    rng = np.random.default_rng(rng)
    chain = DescentChain([F])
    while chain.terminal.n > cutoff and chain.terminal.dim > 1:
        chain.faces.append(descend(chain.terminal, rng))
    return chain


def lift_chain(chain: DescentChain, ridges: list[Inequality]) -> tuple[list[tuple[Inequality, tuple[int, ...]]], int]:
    """Lift facets of the terminal face to facets of the root polytope.

    Returns the lifted ``(inequality, tight)`` pairs, deduplicated by tight set,
    and the number of rotations performed.
    """
    for up, down in zip(chain.faces, chain.faces[1:]):
        if down.parent is not up or down.owner is not up.polytope:
            raise AssertionError("malformed chain: a link is not a face of the previous link")
    hs = list(ridges)
    rotations = 0
    found: list[tuple[Inequality, tuple[int, ...]]] = []
    for face in reversed(chain.faces):
        rotations += len(hs)
        found, seen = [], set()
        for q, tight in rotate_many(face.owner, face.support, hs):
            if tight not in seen:
                seen.add(tight)
                found.append((q, tight))
        hs = [q for q, _ in found]
    return found, rotations


def sample_adjacent(F: Face, cutoff: int, rng):
    """Facets of ``F.owner`` adjacent to ``F`` found by one descent."""
    chain = descent_chain(F, cutoff, rng)
    ridges = double_description(chain.terminal.polytope, verify=False)
    return lift_chain(chain, [r.support for r in ridges])


@dataclass
class SamplerConfig:
    n_cutoff: int = 20
    visits: int = 1
    seed: int = 0
    workers: int = 1
    max_classes: int | None = None
    max_seconds: float | None = None
    max_mem_mb: float | None = None

    def search_config(self, **extra) -> SearchConfig:
        return SearchConfig(method="as", **{**vars(self), **extra})


def as_enumerate(Q: VPolytope, G: PermGroup, cfg: SamplerConfig | int = SamplerConfig(), **kw) -> ClassStore:
    """Facet classes of ``Q`` under ``G`` by adjacency sampling (may be incomplete).

    ``cfg`` is a :class:`SamplerConfig` or just the cutoff.
    """
    if isinstance(cfg, int):
        cfg = SamplerConfig(n_cutoff=cfg)
    return run_search(Q, G, cfg.search_config(**kw))


@dataclass
class ClassReport:
    classes: dict[tuple[int, ...], list[Inequality]] = field(default_factory=dict)
    non_facets: list[Inequality] = field(default_factory=list)
    invalid: list[tuple[Inequality, str]] = field(default_factory=list)

    def sizes(self) -> list[int]:
        return [len(v) for v in self.classes.values()]


def classify(Q: VPolytope, G: PermGroup, inequalities, method: str = "refined") -> ClassReport:
    """Group facet inequalities of ``Q`` by canonical tight set.

    Invalid inputs and valid non-facets are reported, not raised.
    """
    report = ClassReport()
    for q in inequalities:
        if len(q.a) != Q.ambient_dim:
            report.invalid.append((q, f"{len(q.a)} coefficients, polytope has dimension {Q.ambient_dim}"))
            continue
        tight, valid = Q.tight_set(q)
        if not valid:
            report.invalid.append((q, "violated by a vertex"))
        elif not Q.is_facet(q):
            report.non_facets.append(q)
        else:
            report.classes.setdefault(canonical_set(tight, G, method), []).append(q)
    return report
