import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adjsample.symmetry import (
    InvalidGroupError,
    PermGroup,
    apply,
    are_equivalent,
    bfs_closure,
    canonical_image,
    canonical_set,
    find_mapping,
    orbit_size,
)
from adjsample.dual import double_description

from conftest import named

CYCLE4 = PermGroup(4, [[1, 2, 3, 0]])


def test_orders():
    assert PermGroup(5, [list(range(5))]).order == 1
    assert CYCLE4.order == 4
    assert named("L2222")[1].order == 128


@pytest.mark.parametrize("name, order", [("L3322", 4608), ("K1_1_3_3", 18432), ("K8", 5160960), ("K4_6", 8847360)])
def test_known_group_orders(name, order):
    assert named(name)[1].order == order


def test_invalid_generators():
    with pytest.raises(InvalidGroupError):
        PermGroup(3, [[0, 0, 1]])
    with pytest.raises(InvalidGroupError):
        PermGroup(3, [[0, 1]])


def test_chain_membership_matches_closure():
    _, G = named("L2222")
    elems = bfs_closure(G)
    for e in G.chain.elements():
        assert e.astype(np.int64).tobytes() in elems or np.asarray(e, dtype=np.int64).tobytes() in elems
    assert not G.chain.contains(np.array([1, 0] + list(range(2, 16))))


def test_canonical_examples():
    assert canonical_set({2, 3}, CYCLE4, "lexmin") == (0, 1)
    assert canonical_set({2, 3}, PermGroup.trivial(4)) == (2, 3)


def _chsh_facets():
    P, G = named("L2222")
    return P, G, double_description(P).facets


def test_chsh_orbits_and_keys():
    P, G, facets = _chsh_facets()
    pos = [f.tight for f in facets if len(f.tight) == 12]
    bell = [f.tight for f in facets if len(f.tight) == 8]
    assert (len(pos), len(bell)) == (16, 8)
    for method in ("refined", "lexmin"):
        assert len({canonical_set(t, G, method) for t in pos}) == 1
        assert len({canonical_set(t, G, method) for t in bell}) == 1
    assert orbit_size(pos[0], G) == 16 and orbit_size(bell[0], G) == 8
    assert orbit_size(pos[0], PermGroup.trivial(16)) == 1
    assert are_equivalent(pos[0], pos[5], G)
    assert not are_equivalent(pos[0], bell[0], G)


def test_lexmin_key_is_the_orbit_minimum():
    P, G, facets = _chsh_facets()
    for f in facets:
        orbit = set()
        for g in G.chain.elements():
            orbit.add(apply(g, f.tight))
        assert canonical_set(f.tight, G, "lexmin") == min(orbit)


def test_orbit_size_cap():
    _, G = named("K8")
    assert orbit_size((0,), G, cap=10) is None


def test_witness_maps_set_to_image():
    _, G = named("L3322")
    rng = np.random.default_rng(3)
    for _ in range(20):
        S = tuple(sorted(rng.choice(64, size=10, replace=False).tolist()))
        image, g = canonical_image(S, G, witness=True)
        assert apply(g, S) == image
        h = G.chain.random_element(rng)
        m = find_mapping(S, apply(h, S), G)
        assert m is not None and apply(m, S) == apply(h, S)


@settings(max_examples=30)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.sampled_from(["L3322", "K1_1_3_3", "L2235"]))
def test_canonical_invariance_random_words(seed, name):
    _, G = named(name)
    rng = np.random.default_rng(seed)
    S = rng.choice(G.degree, size=int(rng.integers(1, G.degree // 2)), replace=False)
    key = canonical_set(S, G)
    # random word in the generators
    img = np.asarray(S)
    for k in rng.integers(0, len(G.generators), size=30):
        img = np.asarray(G.generators[k])[img]
    assert canonical_set(img, G) == key
