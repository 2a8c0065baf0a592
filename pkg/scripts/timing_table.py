"""Block durations and total simulation time for several lattice widths.

Usage: python scripts/timing_table.py [--cols 2,3,4] [--out timing.csv]
"""

from __future__ import annotations

import argparse

from daqc.experiments import timing_table


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--cols", default="2,3,4")
    parser.add_argument("--steps", default="10,20,30")
    parser.add_argument("--at", type=float, default=4.0)
    parser.add_argument("--ag1-ghz", type=float, default=0.08)
    parser.add_argument("--out")
    args = parser.parse_args()
    text = timing_table(
        [int(c) for c in args.cols.split(",")],
        args.at,
        [int(n) for n in args.steps.split(",")],
        args.ag1_ghz,
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    print(text, end="")


if __name__ == "__main__":
    main()
