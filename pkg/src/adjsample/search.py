"""Shared driver for the adjacency decomposition and sampling searches.

Both methods explore facet classes from a FIFO queue: a class is *expanded*
into a list of root facets, each facet is canonicalized, and unseen keys go
into the :class:`ClassStore` and the queue.  Expansion always starts from the
canonical facet of a class and uses a seed derived from the class key, so the
final class set does not depend on processing order or worker count.

The store is the only shared mutable state.  With several workers, expansion
runs in forked processes and the parent performs every insertion.
"""

from __future__ import annotations

import hashlib
import logging
import multiprocessing as mp
import sys
import threading
import time
from collections import deque
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .polytope import Face, Inequality, VPolytope, facet_from_tight
from .symmetry import PermGroup, canonical_set

log = logging.getLogger(__name__)


@dataclass
class SearchConfig:
    method: str = "as"
    n_cutoff: int = 20
    workers: int = 1
    seed: int = 0
    visits: int = 1
    max_classes: int | None = None
    max_seconds: float | None = None
    max_mem_mb: float | None = None
    canonical: str = "refined"
    progress: float | None = None

    def __post_init__(self):
        if self.method not in ("as", "ad"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.n_cutoff < 1:
            raise ValueError("n_cutoff must be positive")
        if self.workers < 1 or self.visits < 1:
            raise ValueError("workers and visits must be positive")


@dataclass
class ClassRecord:
    ordinal: int
    key: tuple[int, ...]
    found: Inequality
    found_tight: tuple[int, ...]
    source: int = -1
    canonical: Inequality | None = None

    def face(self, Q: VPolytope) -> Face:
        if self.canonical is not None:
            return Face(Q, self.key, self.canonical, dim=Q.intrinsic_dim - 1)
        if self.found_tight == self.key:
            return Face(Q, self.key, self.found, dim=Q.intrinsic_dim - 1)
        face = facet_from_tight(Q, self.key)
        self.canonical = face.support
        return face


class ClassStore:
    """Facet classes keyed by canonical tight set, with atomic insert-if-absent."""

    def __init__(self, on_insert: Callable[[ClassRecord], None] | None = None):
        self._lock = threading.Lock()
        self._by_key: dict[tuple[int, ...], ClassRecord] = {}
        self._order: list[ClassRecord] = []
        self.on_insert = on_insert
        self.status = "complete"
        self.rotations = 0
        self.key_bytes = 0
        self.stats: dict = {}

    def insert(self, key, inequality: Inequality, tight, source: int = -1) -> ClassRecord | None:
        key = tuple(key)
        with self._lock:
            if key in self._by_key:
                return None
            rec = ClassRecord(len(self._order), key, inequality, tuple(tight), source)
            self._by_key[key] = rec
            self._order.append(rec)
            self.key_bytes += 8 * len(key) + 120
            if self.on_insert is not None:
                self.on_insert(rec)
            return rec

    def __len__(self) -> int:
        return len(self._order)

    def __contains__(self, key) -> bool:
        return tuple(key) in self._by_key

    def get(self, key) -> ClassRecord | None:
        return self._by_key.get(tuple(key))

    def records(self) -> list[ClassRecord]:
        return list(self._order)

    def keys(self) -> set[tuple[int, ...]]:
        return set(self._by_key)

    @property
    def complete(self) -> bool:
        return self.status == "complete"


def task_seed(seed: int, key: Sequence[int], visit: int) -> int:
    h = hashlib.blake2b(digest_size=8)
    h.update(f"{seed}:{visit}:".encode())
    h.update(np.asarray(key, dtype=np.int64).tobytes())
    return int.from_bytes(h.digest(), "little")


# ---------------------------------------------------------------------------
# expansion (runs in workers)

_CTX: dict = {}


def _init_worker(Q, G, cfg):
    _CTX.clear()
    _CTX.update(Q=Q, G=G, cfg=cfg)


def expand_class(Q: VPolytope, G: PermGroup, cfg: SearchConfig, face: Face, visit: int):
    """Root facets reached from ``face``: a list of (inequality, tight) and a rotation count."""
    if cfg.method == "as":
        from .sampler import sample_adjacent

        rng = task_seed(cfg.seed, face.tight, visit)
        return sample_adjacent(face, cfg.n_cutoff, rng)
    from .dual import all_facets
    from .pivoting import rotate_many

    ridges = all_facets(face.polytope, cfg.n_cutoff)
    found = rotate_many(Q, face.support, [r.support for r in ridges])
    return found, len(ridges)


def canonical_results(found, G: PermGroup, method: str):
    seen, out = set(), []
    keys = set()
    for q, tight in found:
        if tight in seen:
            continue
        seen.add(tight)
        key = canonical_set(tight, G, method)
        if key in keys:
            continue
        keys.add(key)
        out.append((key, q, tight))
    return out


def _process(task, ctx=None):
    ordinal, key, visit, found, found_tight, canon = task
    ctx = _CTX if ctx is None else ctx
    Q, G, cfg = ctx["Q"], ctx["G"], ctx["cfg"]
    rec = ClassRecord(ordinal, key, found, found_tight, canonical=canon)
    face = rec.face(Q)
    lifted, rotations = expand_class(Q, G, cfg, face, visit)
    return ordinal, visit, face.support, canonical_results(lifted, G, cfg.canonical), rotations


# ---------------------------------------------------------------------------
# driver


def run_search(
    Q: VPolytope,
    G: PermGroup,
    cfg: SearchConfig,
    *,
    store: ClassStore | None = None,
    done: set[tuple[int, int]] | None = None,
    journal=None,
) -> ClassStore:
    """Explore facet classes of ``Q`` under ``G`` until the queue drains or a limit fires.

    ``store`` and ``done`` resume an earlier run: every stored class whose
    (ordinal, visit) tasks are not in ``done`` is queued again.
    """
    from .pivoting import initial_facet

    G.chain  # build before forking so workers share it
    store = store if store is not None else ClassStore()
    done = set(done or ())
    start = time.monotonic()
    stop_reason: list[str] = []
    queue: deque[tuple[int, int]] = deque()

    def admit(key, q, tight, source):
        if cfg.max_classes is not None and len(store) >= cfg.max_classes:
            stop_reason.append("max-classes")
            return False
        if cfg.max_mem_mb is not None and store.key_bytes > cfg.max_mem_mb * 2**20:
            stop_reason.append("max-mem")
            return False
        if key not in store and not Q.is_facet(q):
            raise AssertionError(f"search produced a non-facet {q}")
        rec = store.insert(key, q, tight, source)
        if rec is not None:
            if journal is not None:
                journal.record_class(rec)
            for v in range(cfg.visits):
                queue.append((rec.ordinal, v))
        return True

    if len(store) == 0:
        F0 = initial_facet(Q)
        key0 = canonical_set(F0.tight, G, cfg.canonical)
        admit(key0, F0.support, F0.tight, -1)
    else:
        for rec in store.records():
            for v in range(cfg.visits):
                if (rec.ordinal, v) not in done:
                    queue.append((rec.ordinal, v))

    records = store._order

    def make_task(item):
        ordinal, visit = item
        r = records[ordinal]
        return (ordinal, r.key, visit, r.found, r.found_tight, r.canonical)

    def finish(result):
        ordinal, visit, canon, results, rotations = result
        records[ordinal].canonical = canon
        store.rotations += rotations
        complete = True
        for key, q, tight in results:
            if key in store:
                continue
            if not admit(key, q, tight, ordinal):
                complete = False
        if complete:
            done.add((ordinal, visit))
            if journal is not None:
                journal.record_done(ordinal, visit)
        return complete

    last_report = [start]

    def report(force=False):
        now = time.monotonic()
        if cfg.progress is None or (not force and now - last_report[0] < cfg.progress):
            return
        last_report[0] = now
        rate = store.rotations / max(now - start, 1e-9)
        print(
            f"[{cfg.method}] classes={len(store)} queue={len(queue)} rotations={store.rotations} rot/s={rate:.0f} t={now - start:.1f}s",
            file=sys.stderr,
            flush=True,
        )

    def timed_out():
        return cfg.max_seconds is not None and time.monotonic() - start > cfg.max_seconds

    if cfg.workers == 1:
        ctx = dict(Q=Q, G=G, cfg=cfg)  # nested searches run in this process too
        while queue and not stop_reason:
            if timed_out():
                stop_reason.append("max-seconds")
                break
            finish(_process(make_task(queue.popleft()), ctx))
            report()
    else:
        ctx = mp.get_context("fork")
        with ProcessPoolExecutor(cfg.workers, mp_context=ctx, initializer=_init_worker, initargs=(Q, G, cfg)) as pool:
            inflight = set()
            while (queue or inflight) and not stop_reason:
                if timed_out():
                    stop_reason.append("max-seconds")
                    break
                while queue and len(inflight) < 2 * cfg.workers:
                    inflight.add(pool.submit(_process, make_task(queue.popleft())))
                finished, inflight = wait(inflight, timeout=1.0, return_when=FIRST_COMPLETED)
                for fut in sorted(finished, key=lambda f: f.result()[0]):
                    finish(fut.result())
                report()
            for fut in inflight:
                fut.cancel()

    store.status = f"stopped: {stop_reason[0]}" if stop_reason else "complete"
    store.stats.update(seconds=time.monotonic() - start, pending=len(queue))
    report(force=True)
    return store
