"""Exact property checks shared by the unit tests and the acceptance run."""

from fractions import Fraction

import numpy as np

from adjsample.pivoting import descend, rotate_many, tighten
from adjsample.polytope import Inequality, facet_from_tight
from adjsample.search import ClassStore
from adjsample.symmetry import apply, canonical_set, inverse


def random_word(G, rng, max_len=30):
    gens = list(G.generators) + [inverse(g) for g in G.generators]
    g = np.arange(G.degree)
    for _ in range(int(rng.integers(1, max_len + 1))):
        g = gens[int(rng.integers(len(gens)))][g]
    return g


def random_facet(P, G, keys, rng):
    key = keys[int(rng.integers(len(keys)))]
    return facet_from_tight(P, apply(G.chain.random_element(rng), key))


def check_rotation_pairs(P, G, keys, pairs, seed=0):
    """Rotate random facets around random ridges and rotate back.

    Returns the number of failures (0 when every rotation is a facet through
    the ridge and rotating back through that ridge returns the start).
    """
    rng = np.random.default_rng(seed)
    keys = sorted(keys)
    bad = 0
    k = P.intrinsic_dim
    for _ in range(pairs):
        F = random_facet(P, G, keys, rng)
        R = descend(F, rng)
        ridge = set(R.root_tight)
        ((g, tight),) = rotate_many(P, F.support, [R.support])
        ok = g != F.support and P.is_facet(g) and P.tight_set(g)[0] == tight
        ok = ok and set(tight) & set(F.tight) == ridge and P.rank_of(sorted(ridge)) == k - 1
        if ok:
            Gf = facet_from_tight(P, tight)
            local = [i for i, v in enumerate(Gf.tight) if v in ridge]
            H = facet_from_tight(Gf.polytope, local)
            ((back, back_tight),) = rotate_many(P, g, [H.support])
            ok = back == F.support and back_tight == F.tight
        bad += not ok
    return bad


def check_canonical_words(P, G, keys, words, seed=0, method="refined"):
    rng = np.random.default_rng(seed)
    keys = sorted(canonical_set(k, G, method) for k in keys)
    bad = 0
    for _ in range(words):
        key = keys[int(rng.integers(len(keys)))]
        image = apply(random_word(G, rng), key)
        bad += canonical_set(image, G, method) != key
    return bad


def check_tighten_monotone(P, trials, seed=0):
    rng = np.random.default_rng(seed)
    bad = 0
    cols = list(P.basis)
    for t in range(trials):
        c = np.zeros(P.ambient_dim, dtype=np.int64)
        c[cols] = rng.integers(-3, 4, size=len(cols))
        vals = P.W @ c
        if np.all(vals == vals.max()):
            continue
        q = Inequality(tuple(int(x) for x in c), Fraction(int(vals.max()), P.scale))
        stats = {}
        F = tighten(P, q, rng=rng if t % 2 else None, stats=stats)
        ranks = [P.rank_of(s) for s in stats["tight_sets"]]
        ok = all(a < b for a, b in zip(ranks, ranks[1:])) and ranks[-1] == P.intrinsic_dim and P.is_facet(F.support)
        ok = ok and set(stats["tight_sets"][0]) <= set(F.tight)
        bad += not ok
    return bad


def check_store_stress(rounds=20, workers=4, keys=2000, seed=0):
    """Concurrent insert-if-absent from ``workers`` threads; returns the number of bad rounds."""
    import threading

    bad = 0
    for r in range(rounds):
        rng = np.random.default_rng(seed + r)
        pool = [tuple(sorted(rng.choice(60, size=6, replace=False).tolist())) for _ in range(keys)]
        store = ClassStore()
        barrier = threading.Barrier(workers)
        wins = [[] for _ in range(workers)]

        def work(w):
            order = np.random.default_rng(1000 * r + w).permutation(len(pool))
            barrier.wait()
            for i in order:
                if store.insert(pool[i], None, pool[i], w) is not None:
                    wins[w].append(pool[i])

        threads = [threading.Thread(target=work, args=(w,)) for w in range(workers)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        flat = [k for w in wins for k in w]
        ok = len(flat) == len(set(flat)) == len(set(pool)) == len(store)
        ok = ok and len({rec.key for rec in store.records()}) == len(store)
        bad += not ok
    return bad
