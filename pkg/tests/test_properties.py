import pytest

from adjsample.dual import double_description
from adjsample.symmetry import canonical_set

from conftest import named
from props import check_canonical_words, check_rotation_pairs, check_store_stress, check_tighten_monotone


def _keys(name):
    P, G = named(name)
    return P, G, {canonical_set(f.tight, G) for f in double_description(P)}


@pytest.mark.parametrize("name", ["L2222", "L3322", "K5", "L3223"])
def test_rotation_facet_and_involution(name):
    P, G, keys = _keys(name)
    assert check_rotation_pairs(P, G, keys, 200) == 0


@pytest.mark.parametrize("name", ["L2222", "L3322", "K5"])
@pytest.mark.parametrize("method", ["refined", "lexmin"])
def test_canonical_invariance_under_words(name, method):
    P, G, keys = _keys(name)
    assert check_canonical_words(P, G, keys, 200, method=method) == 0


@pytest.mark.parametrize("name", ["L3322", "K1_1_3_3", "L4322"])
def test_tighten_rank_monotone(name):
    P, _ = named(name)
    assert check_tighten_monotone(P, 30) == 0


def test_store_stress():
    assert check_store_stress(rounds=5) == 0
