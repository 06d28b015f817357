#!/usr/bin/env python3
"""Reproduce the adjacency-sampling class counts for the reference instances.

    python scripts/run_table1.py                  # gating rows, R = 1
    python scripts/run_table1.py --visits 30      # R descents per class
    python scripts/run_table1.py --stretch K5_5   # report-only rows
"""

import argparse
import sys

from adjsample.benchmarks import TABLE1, run_instance


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("names", nargs="*", help="restrict to these instances")
    ap.add_argument("--visits", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--max-seconds", type=float, default=1800)
    ap.add_argument("--stretch", action="store_true", help="include the report-only rows")
    ap.add_argument("--progress", type=float, default=None)
    args = ap.parse_args(argv)
    rows = [i for i in TABLE1 if (i.gating or args.stretch) and (not args.names or i.name in args.names)]
    failed = 0
    for inst in rows:
        r = run_instance(inst, visits=args.visits, seed=args.seed, workers=args.workers, max_seconds=args.max_seconds, progress=args.progress)
        tag = "PASS" if r.ok else ("FAIL" if inst.gating else "INFO")
        failed += tag == "FAIL"
        print(f"{tag} {r.line()}", flush=True)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
