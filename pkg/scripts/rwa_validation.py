"""Lab-frame versus rotating-wave populations for every built-in drive preset.

Usage: python scripts/rwa_validation.py [--outdir results]
"""

from __future__ import annotations

import argparse
from pathlib import Path

from daqc.experiments import RWA_PRESETS, rwa_report


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=201)
    parser.add_argument("--outdir", default="results")
    args = parser.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for name in RWA_PRESETS:
        text, result = rwa_report(name, n_samples=args.samples)
        (out / f"rwa_{name}.csv").write_text(text)
        print(f"{name}: max population deviation {result.max_deviation:.4f}")


if __name__ == "__main__":
    main()
