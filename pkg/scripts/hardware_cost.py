#!/usr/bin/env python3
"""Per-iteration operation counts and fixed-point gate costs.

Prints the predicted multiplication/addition/division/square-root counts
and the unit-gate cost (204-gate adders, 2336-gate multipliers) for each
algorithm over a range of filter lengths, for both input structures.
"""

import argparse

from dcdrtls import complexity as cx


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", default="4,8,16,32,64", help="comma-separated filter lengths")
    ap.add_argument("--dcd-n", type=int, default=1, help="solver updates per step N")
    ap.add_argument("--dcd-m", type=int, default=16, help="solver ladder bits M")
    args = ap.parse_args()

    dims = [int(v) for v in args.dims.split(",")]
    for structured in (True, False):
        print("shift-structured input" if structured else "non-shift-structured input")
        print(f"{'algo':>10} {'L':>4} {'mul':>6} {'add':>6} {'div':>4} {'sqrt':>5} {'gates':>9}")
        for L in dims:
            for algo in cx.ALGOS:
                c = cx.predicted_ops(algo, L, args.dcd_n, args.dcd_m, structured)
                print(f"{algo:>10} {L:>4} {c.mul:>6} {c.add:>6} {c.div:>4} "
                      f"{c.sqrt:>5} {cx.gate_cost(c):>9}")
        print()


if __name__ == "__main__":
    main()
