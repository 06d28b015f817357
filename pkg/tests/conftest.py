import functools

import numpy as np
import pytest
from hypothesis import settings

from adjsample.generators import BellScenario, bell_polytope, cut_polytope, parse_parts

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def named(name):
    """Cached (polytope, group) for a name like L3322 or K4_6."""
    if name.startswith("L"):
        return bell_polytope(BellScenario(*map(int, name[1:])))
    return cut_polytope(parse_parts(name[1:]))


@pytest.fixture
def chsh():
    return named("L2222")


@pytest.fixture
def l3322():
    return named("L3322")


@pytest.fixture
def square():
    from adjsample.polytope import VPolytope

    return VPolytope([(0, 0), (1, 0), (0, 1), (1, 1)], name="square")


def random_01_polytope(rng, max_vertices=12, max_dim=6):
    """A random 0/1 point set of full dimension (retries until it is)."""
    from adjsample.polytope import VPolytope

    while True:
        d = int(rng.integers(2, max_dim + 1))
        n = int(rng.integers(d + 1, max_vertices + 1))
        if n > 2**d:
            continue
        pts = rng.choice(2**d, size=n, replace=False)
        W = np.array([[(p >> j) & 1 for j in range(d)] for p in pts], dtype=np.int64)
        P = VPolytope(W, _scale=1)
        if P.intrinsic_dim == d:
            return P


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
