"""Singular-value spread of random block encodings versus circuit size.

For each system size n, samples freshly seeded instances at the default
depth and prints the spread (max - min singular value) statistics of the
encoded block.  A spread of zero means the block happened to be unitary.

Usage:
    python3 scripts/spread_stats.py --sizes 1,2,3,4 --samples 100
"""

import argparse
import sys

from racbem.generator import (
    GeneratorConfig,
    default_depth,
    linear_coupling_map,
    sv_spread_stats,
)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1,2,3,4", help="comma-separated n values")
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args(argv)

    print(f"{'n':>3} {'depth':>6} {'mean':>8} {'std':>8} {'min':>9} {'max':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        cfg = GeneratorConfig(linear_coupling_map(n + 1),
                              depth=default_depth(n), seed=args.seed)
        s = sv_spread_stats(args.samples, n, cfg)
        print(f"{n:>3} {cfg.depth:>6} {s.mean:>8.4f} {s.std:>8.4f}"
              f" {s.min:>9.2e} {s.max:>8.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
