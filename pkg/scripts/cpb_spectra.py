"""Charge-qubit spectra versus offset charge for the built-in presets.

Usage: python scripts/cpb_spectra.py [--outdir results]
"""

from __future__ import annotations

import argparse
from pathlib import Path

from daqc.experiments import (
    SPECTRUM_PRESETS,
    TRANSITION_PRESETS,
    impedance_report,
    spectrum_report,
    squid_spectrum_report,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=101)
    parser.add_argument("--outdir", default="results")
    args = parser.parse_args()
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for name, (ratio, gamma) in SPECTRUM_PRESETS.items():
        text = spectrum_report(ratio, gamma, ng_min=-1.0, ng_max=1.0, ng_points=args.points,
                               transitions=name in TRANSITION_PRESETS)
        (out / f"spectrum_{name}.csv").write_text(text)
        print(f"wrote spectrum_{name}.csv")
    (out / "spectrum_squid-island.csv").write_text(
        squid_spectrum_report(ng_min=-1.0, ng_max=1.0, ng_points=args.points)
    )
    (out / "impedance_ratio.csv").write_text(impedance_report())
    print("wrote spectrum_squid-island.csv and impedance_ratio.csv")


if __name__ == "__main__":
    main()
