"""Command line: ``adjsample generate | enumerate | verify | classify``.

Exit status: 0 complete, 2 partial (a limit fired), 1 error.
"""

from __future__ import annotations

import argparse
import re
import sys
import time
from pathlib import Path

from . import fileio
from .dual import double_description
from .generators import BellScenario, ScenarioError, bell_polytope, cut_polytope, parse_parts, verify_scenario_counts
from .polytope import VPolytope
from .sampler import classify
from .search import SearchConfig, run_search
from .symmetry import PermGroup, canonical_set, orbit_size

EXIT_OK, EXIT_ERROR, EXIT_PARTIAL = 0, 1, 2


class UsageError(Exception):
    pass


def build_named(name: str):
    """Polytope and group for names like ``L3322``, ``K8`` or ``K1_1_3_3``."""
    m = re.fullmatch(r"L(\d)(\d)(\d)(\d)", name)
    if m:
        return bell_polytope(BellScenario(*map(int, m.groups())))
    m = re.fullmatch(r"K(\d+(?:_\d+)*)", name)
    if m:
        return cut_polytope(parse_parts(m.group(1)))
    raise UsageError(f"{name!r} is neither a polytope file nor a name like L3322, K8, K4_6")


def load_target(target: str) -> tuple[VPolytope, PermGroup | None]:
    path = Path(target)
    if path.exists():
        pf = fileio.PolytopeFile.loads(path.read_text(), path)
        return pf.polytope()
    return build_named(target)


def _say(args, msg: str):
    if not getattr(args, "quiet", False):
        print(msg, file=sys.stderr, flush=True)


# ---------------------------------------------------------------------------


def cmd_generate(args) -> int:
    if args.kind == "bell":
        if len(args.params) != 4:
            raise UsageError("generate bell needs four integers: ma mb na nb")
        try:
            spec = BellScenario(*map(int, args.params))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        P, G = bell_polytope(spec)
    else:
        if len(args.params) != 1:
            raise UsageError("generate cut needs one argument: part sizes like 1,1,3,3 (or N for K_N)")
        try:
            spec = parse_parts(args.params[0])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        P, G = cut_polytope(spec)
    info = verify_scenario_counts(spec, P, G)
    out = Path(args.out or f"{P.name}.poly")
    fileio.write_text(out, fileio.PolytopeFile.from_polytope(P, G).dumps())
    print(f"{info['name']}: n={info['vertices']} d={info['dimension']} generators={info['generators']} -> {out}")
    return EXIT_OK


def _orbits(keys, G, cap):
    out = {}
    for key in keys:
        out[key] = orbit_size(key, G, cap)
    return out


def cmd_enumerate(args) -> int:
    P, G = load_target(args.target)
    if args.method in ("as", "ad") and G is None:
        raise UsageError(f"method {args.method} needs a symmetry block in the polytope file")
    G = G if G is not None else PermGroup.trivial(P.n)
    out = Path(args.out or f"{P.name or 'polytope'}.{args.method}.classes")
    start = time.monotonic()

    if args.method == "dd":
        facets = double_description(P)
        groups: dict = {}
        for f in facets:
            groups.setdefault(canonical_set(f.tight, G), []).append(f)
        entries = [fileio.ClassEntry(fs[0].support, len(key), len(fs)) for key, fs in groups.items()]
        cf = fileio.ClassFile(P.name, "dd", None, None, "complete", entries)
        fileio.write_text(out, cf.dumps())
        _say(args, f"{P.name}: {len(facets)} facets in {len(groups)} classes ({time.monotonic() - start:.1f}s) -> {out}")
        return EXIT_OK

    cfg = SearchConfig(
        method=args.method,
        n_cutoff=args.cutoff,
        workers=args.workers,
        seed=args.seed,
        visits=args.visits,
        max_classes=args.max_classes,
        max_seconds=args.max_seconds,
        max_mem_mb=args.max_mem_mb,
        progress=None if args.quiet else args.progress,
    )
    params = f"polytope={P.name} n={P.n} d={P.ambient_dim} method={cfg.method} cutoff={cfg.n_cutoff} seed={cfg.seed} visits={cfg.visits} key={cfg.canonical}"
    log = fileio.RunLog(args.log or str(out) + ".log", params)
    store, done = None, None
    if args.resume and log.path.exists():
        store, done = log.replay(P)
        _say(args, f"resumed {len(store)} classes, {len(done)} finished tasks from {log.path}")
    else:
        log.start()
    try:
        store = run_search(P, G, cfg, store=store, done=done, journal=log)
    finally:
        log.close()
    orbits = _orbits(store.keys(), G, args.orbit_cap) if args.orbits else None
    cf = fileio.ClassFile.from_store(P, store, cfg, orbits)
    fileio.write_text(out, cf.dumps())
    _say(args, f"{P.name}: {len(store)} classes ({store.status}), {store.rotations} rotations, {time.monotonic() - start:.1f}s -> {out}")
    return EXIT_OK if store.complete else EXIT_PARTIAL


def cmd_verify(args) -> int:
    path = Path(args.classes)
    text = path.read_text()
    cf = fileio.ClassFile.loads(text, path)
    P, G = load_target(args.target)
    G = G if G is not None else PermGroup.trivial(P.n)
    failures = []
    if cf.polytope and P.name and cf.polytope != P.name:
        failures.append(f"class file is for {cf.polytope}, polytope is {P.name}")
    raw = {no: ln for no, ln in enumerate(text.splitlines(), start=1)}
    seen: dict = {}
    for i, e in enumerate(cf.entries):
        where = f"record {i} (line {e.line})"
        q = e.inequality
        if len(q.a) != P.ambient_dim:
            failures.append(f"{where}: {len(q.a)} coefficients, polytope has dimension {P.ambient_dim}")
            continue
        if raw[e.line].split("|")[0].split() != fileio.fmt_inequality(q).split():
            failures.append(f"{where}: inequality is not in normalized form")
        tight, valid = P.tight_set(q)
        if not valid:
            failures.append(f"{where}: violated by some vertex")
            continue
        if not P.is_facet(q):
            failures.append(f"{where}: not a facet")
            continue
        if e.tight_size is not None and e.tight_size != len(tight):
            failures.append(f"{where}: tight size {e.tight_size} != {len(tight)}")
        key = canonical_set(tight, G)
        if key in seen:
            failures.append(f"{where}: equivalent to record {seen[key]}")
        else:
            seen[key] = i
    for msg in failures:
        print(f"FAIL {msg}")
    print(f"{'FAIL' if failures else 'OK'}: {len(cf.entries)} records checked, {len(failures)} problems")
    return EXIT_ERROR if failures else EXIT_OK


def cmd_classify(args) -> int:
    P, G = load_target(args.target)
    G = G if G is not None else PermGroup.trivial(P.n)
    path = Path(args.inequalities)
    items = fileio.read_inequalities(path.read_text(), None, path)
    lines = {id(q): no for no, q in items}
    rep = classify(P, G, [q for _, q in items])
    print(f"{len(items)} inequalities: {len(rep.classes)} classes, {len(rep.non_facets)} non-facets, {len(rep.invalid)} invalid")
    for k, (key, qs) in enumerate(rep.classes.items()):
        print(f"class {k}: {len(qs)} inputs | tight {len(key)} | {fileio.fmt_inequality(qs[0])}")
    for q in rep.non_facets:
        print(f"non-facet line {lines[id(q)]}: {fileio.fmt_inequality(q)}")
    for q, why in rep.invalid:
        print(f"invalid line {lines[id(q)]}: {why}: {fileio.fmt_inequality(q)}")
    return EXIT_OK


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors exit 1; status 2 is reserved for partial results
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="adjsample", description="Facet classes of Bell and cut polytopes.")
    sub = ap.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a polytope file")
    g.add_argument("kind", choices=["bell", "cut"])
    g.add_argument("params", nargs="+")
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    e = sub.add_parser("enumerate", help="enumerate facet classes")
    e.add_argument("target", help="polytope file or a name like L3322, K8, K1_1_3_3")
    e.add_argument("--method", choices=["as", "ad", "dd"], default="as")
    e.add_argument("--cutoff", type=int, default=20)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--visits", type=int, default=1, help="descents per class (fresh seed each)")
    e.add_argument("--max-classes", type=int)
    e.add_argument("--max-seconds", type=float)
    e.add_argument("--max-mem-mb", type=float)
    e.add_argument("--resume", action="store_true")
    e.add_argument("--out")
    e.add_argument("--log", help="run log path (default: <out>.log)")
    e.add_argument("--orbits", action="store_true", help="record orbit sizes")
    e.add_argument("--orbit-cap", type=int, default=10**6)
    e.add_argument("--progress", type=float, default=10.0, help="seconds between status lines")
    e.add_argument("--quiet", action="store_true")
    e.set_defaults(func=cmd_enumerate)

    v = sub.add_parser("verify", help="re-check a class file")
    v.add_argument("classes")
    v.add_argument("target")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("classify", help="group an inequality list into classes")
    c.add_argument("inequalities")
    c.add_argument("target")
    c.set_defaults(func=cmd_classify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ScenarioError) as exc:
        ap.error(str(exc))
    except (fileio.FormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
