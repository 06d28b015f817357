#!/usr/bin/env python3
"""Coverage of adjacency sampling per seed and visit count R.

    python scripts/seed_sweep.py L2235 K4_6 --seeds 0 1 2 --visits 1 3 10
"""

import argparse

from adjsample.benchmarks import TABLE1, run_instance


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("names", nargs="+")
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    ap.add_argument("--visits", type=int, nargs="+", default=[1])
    ap.add_argument("--cutoff", type=int, help="override the reference cutoff")
    args = ap.parse_args(argv)
    by_name = {i.name: i for i in TABLE1}
    for name in args.names:
        inst = by_name[name]
        if args.cutoff is not None:
            inst = type(inst)(inst.name, args.cutoff, inst.classes, inst.gating)
        for R in args.visits:
            for seed in args.seeds:
                r = run_instance(inst, visits=R, seed=seed)
                print(f"R={R:<3d} seed={seed:<3d} {r.line()}", flush=True)


if __name__ == "__main__":
    main()
