import numpy as np
import pytest

from adjsample.dual import double_description
from adjsample.pivoting import descend, initial_facet
from adjsample.polytope import Inequality, facet_from_tight
from adjsample.sampler import DescentChain, SamplerConfig, as_enumerate, classify, descent_chain, lift_chain, sample_adjacent
from adjsample.symmetry import apply, canonical_set

from conftest import named


def _dd_keys(P, G):
    return {canonical_set(f.tight, G) for f in double_description(P)}


def test_chain_invariants(l3322):
    P, _ = l3322
    chain = descent_chain(initial_facet(P), 20, 3)
    dims = [f.dim for f in chain.faces]
    assert all(a > b for a, b in zip(dims, dims[1:]))
    assert chain.terminal.n <= 20 or chain.terminal.dim == 1
    for up, down in zip(chain.faces, chain.faces[1:]):
        assert down.parent is up


def test_chain_of_length_one(chsh):
    P, _ = chsh
    F = initial_facet(P)
    chain = descent_chain(F, cutoff=100, rng=0)
    assert len(chain.faces) == 1
    H = double_description(F.polytope)
    found, rotations = lift_chain(chain, [h.support for h in H])
    assert rotations == len(H)
    assert len(found) == len(H)
    for q, tight in found:
        assert P.is_facet(q)
        assert P.tight_set(q)[0] == tight
        assert P.rank_of(sorted(set(tight) & set(F.tight))) == P.intrinsic_dim - 1


def test_square_edge_lifts_to_neighbours(square):
    F = facet_from_tight(square, (0, 1))
    chain = descent_chain(F, cutoff=1, rng=0)
    assert len(chain.faces) == 1 and chain.terminal.dim == 1
    H = double_description(F.polytope)
    assert len(H) == 2
    found, _ = lift_chain(chain, [h.support for h in H])
    assert {t for _, t in found} == {(0, 2), (1, 3)}


def test_malformed_chain_rejected(l3322):
    P, _ = l3322
    F = initial_facet(P)
    G = initial_facet(P)
    bad = DescentChain([F, descend(G, 0)])
    with pytest.raises(AssertionError):
        lift_chain(bad, [])


def test_chsh_positivity_reaches_other_class(chsh):
    P, G = chsh
    positivity = Inequality((0,) * 7 + (-1,), 0)
    F = facet_from_tight(P, P.tight_set(positivity)[0])
    assert F.n == 12
    pos_key = canonical_set(F.tight, G)
    hits = 0
    for seed in range(20):
        found, _ = sample_adjacent(F, 10, seed)
        keys = {canonical_set(t, G) for _, t in found}
        assert keys <= _dd_keys(P, G)
        hits += any(k != pos_key for k in keys)
    assert hits >= 1


def test_as_subset_of_complete_enumeration(l3322):
    P, G = l3322
    truth = _dd_keys(P, G)
    for cutoff in (8, 16, 30):
        store = as_enumerate(P, G, cutoff)
        assert store.keys() <= truth


def test_seed_union_is_monotone():
    P, G = named("L3223")
    a = as_enumerate(P, G, SamplerConfig(n_cutoff=12, seed=0))
    b = as_enumerate(P, G, SamplerConfig(n_cutoff=12, seed=1))
    union = a.keys() | b.keys()
    assert len(union) >= max(len(a), len(b))


def test_l3322_count(l3322):
    P, G = l3322
    store = as_enumerate(P, G, 20)
    assert store.complete
    assert len(store) == 3


def test_limits_flag_partial():
    P, G = named("L3223")
    store = as_enumerate(P, G, 20, max_classes=2)
    assert store.status == "stopped: max-classes"
    assert len(store) == 2
    store = as_enumerate(P, G, 20, max_seconds=0)
    assert store.status == "stopped: max-seconds"


def test_classify_chsh_facets(chsh):
    P, G = chsh
    rep = classify(P, G, [f.support for f in double_description(P)])
    assert sorted(rep.sizes()) == [8, 16]
    assert not rep.non_facets and not rep.invalid


def test_classify_duplicates_and_bad_inputs(chsh):
    P, G = chsh
    f = double_description(P).facets[0].support
    rep = classify(P, G, [f] * 5)
    assert rep.sizes() == [5]
    loose = Inequality(f.a, f.b + 1)  # valid, touches nothing
    violated = Inequality(f.a, f.b - 1)
    short = Inequality((1, 0), 1)
    rep = classify(P, G, [f, loose, violated, short])
    assert rep.sizes() == [1]
    assert rep.non_facets == [loose]
    assert [q for q, _ in rep.invalid] == [violated, short]


def test_classify_group_images_share_a_class(l3322):
    P, G = l3322
    rng = np.random.default_rng(1)
    F = initial_facet(P)
    images = [facet_from_tight(P, apply(G.chain.random_element(rng), F.tight)).support for _ in range(10)]
    rep = classify(P, G, images + [F.support])
    assert len(rep.classes) == 1
