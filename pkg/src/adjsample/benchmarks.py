"""Reference instances with published class counts, and a runner for them."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .cli import build_named
from .search import ClassStore, SearchConfig, run_search


@dataclass(frozen=True)
class Instance:
    name: str
    cutoff: int
    classes: int
    gating: bool = True


TABLE1 = [
    Instance("L3322", 20, 3),
    Instance("L3223", 20, 5),
    Instance("L4322", 30, 6),
    Instance("L5322", 40, 7),
    Instance("L2235", 20, 15),
    Instance("L3233", 40, 38),
    Instance("L4422", 40, 175),
    Instance("K4_6", 10, 12),
    Instance("K1_1_3_3", 40, 50),
    Instance("K8", 30, 147),
    Instance("K5_5", 30, 1282, gating=False),
    Instance("K3_3_3", 40, 2015, gating=False),
    Instance("L2244", 60, 34, gating=False),
    Instance("L3342", 70, 159, gating=False),
    Instance("L4332", 90, 80, gating=False),
]

BUDGET_SECONDS = 30 * 60


@dataclass
class RowResult:
    instance: Instance
    store: ClassStore
    seconds: float

    @property
    def found(self) -> int:
        return len(self.store)

    @property
    def ok(self) -> bool:
        return self.store.complete and self.found == self.instance.classes and self.seconds <= BUDGET_SECONDS

    def line(self) -> str:
        i = self.instance
        return f"{i.name:9s} cutoff {i.cutoff:3d}: {self.found:5d} / {i.classes:5d} classes, {self.store.status}, {self.store.rotations} rotations, {self.seconds:7.1f}s"


def run_instance(inst: Instance, *, visits: int = 1, seed: int = 0, workers: int = 1, max_seconds: float | None = BUDGET_SECONDS, **kw) -> RowResult:
    P, G = build_named(inst.name)
    cfg = SearchConfig(method="as", n_cutoff=inst.cutoff, seed=seed, visits=visits, workers=workers, max_seconds=max_seconds, **kw)
    start = time.monotonic()
    store = run_search(P, G, cfg)
    return RowResult(inst, store, time.monotonic() - start)


AD_CUTOFF = 10**9  # every class representative is dualized directly


def _ad_child(name, cutoff, conn):
    from .dual import ad_enumerate

    P, G = build_named(name)
    start = time.monotonic()
    store = ad_enumerate(P, G, cutoff)
    conn.send((sorted(store.keys()), store.status, time.monotonic() - start))
    conn.close()


def run_ad(name: str, timeout: float, cutoff: int = AD_CUTOFF):
    """Complete enumeration in a child process; ``None`` if it does not finish in ``timeout`` seconds.

    A child process is used because a single dual description call cannot be
    interrupted from inside.
    """
    import multiprocessing as mp

    ctx = mp.get_context("fork")
    recv, send = ctx.Pipe(duplex=False)
    proc = ctx.Process(target=_ad_child, args=(name, cutoff, send), daemon=True)
    proc.start()
    send.close()
    try:
        result = recv.recv() if recv.poll(timeout) else None
    except EOFError:  # child died, e.g. out of memory
        result = None
    proc.join(5 if result is not None else 0)
    if proc.is_alive():
        proc.kill()
        proc.join()
    if result is None:
        return None
    keys, status, seconds = result
    return {tuple(k) for k in keys}, status, seconds
