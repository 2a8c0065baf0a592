"""Command-line entry point: ``daqc <subcommand> [options]``.

Exit codes: 0 success, 2 invalid input, 3 resource guard.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from daqc import experiments as ex
from daqc.errors import ResourceLimitError, ValidationError
from daqc.hubbard import block_count, compile_schedule, export_schedule


def _steps(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad step list {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("empty step list")
    return values


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="write CSV here instead of stdout")
    parser.add_argument("--seed", type=int, help="64-bit seed for random states")
    parser.add_argument("--config", help="key=value settings file ('#' comments)")


def _lattice_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--rows", type=int)
    parser.add_argument("--cols", type=int)
    parser.add_argument("--at", type=float, help="dimensionless A*t")
    parser.add_argument("--coulomb", action="store_true", default=None)
    parser.add_argument("--onsite", type=float, help="on-site strength B in units of A")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="daqc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="charge-basis spectrum versus offset charge")
    _common(p)
    p.add_argument("--preset", choices=sorted(ex.SPECTRUM_PRESETS) + ["squid-island"])
    p.add_argument("--ej-over-ec", type=float)
    p.add_argument("--gamma-over-ec", type=float)
    p.add_argument("--ng-min", type=float)
    p.add_argument("--ng-max", type=float)
    p.add_argument("--ng-points", type=int)
    p.add_argument("--truncation", type=int)
    p.add_argument("--transitions", action="store_true", default=None)

    p = sub.add_parser("impedance", help="SQUID/qubit impedance ratio versus flux")
    _common(p)
    p.add_argument("--phi-max", type=float)
    p.add_argument("--points", type=int)

    p = sub.add_parser("rwa-check", help="lab-frame versus rotating-wave populations")
    _common(p)
    p.add_argument("--preset", choices=ex.RWA_PRESETS)
    p.add_argument("--samples", type=int, help="number of time samples")
    p.add_argument("--dt", type=float, help="RK4 step in ns")

    p = sub.add_parser("compile", help="export the analog-block schedule")
    _common(p)
    _lattice_args(p)
    p.add_argument("--steps", type=int, help="Trotter steps")

    p = sub.add_parser("simulate", help="fidelity curve for one initial state")
    _common(p)
    _lattice_args(p)
    p.add_argument("--steps", type=_steps, help="comma list of Trotter steps")
    p.add_argument("--initial", help="e.g. 'up@1,1;up@2,2', 'ghz-pair', 'random(7)'")
    p.add_argument("--points", type=int, help="samples of A*t in [0, at]")

    p = sub.add_parser("benchmark", help="mean fidelity over random initial states")
    _common(p)
    _lattice_args(p)
    p.add_argument("--random", type=int, dest="samples", help="number of random states")
    p.add_argument("--steps", type=_steps, help="comma list of Trotter steps")

    p = sub.add_parser("timing", help="block durations and total simulation time")
    _common(p)
    p.add_argument("--cols-list", type=_steps, help="comma list of column counts")
    p.add_argument("--at", type=float)
    p.add_argument("--steps", type=_steps)
    p.add_argument("--ag1-ghz", type=float, help="A*g1/2pi in GHz")
    return parser


def _settings(args: argparse.Namespace) -> dict[str, str]:
    """Config-file values overridden by explicit flags."""
    values = ex.read_config_file(args.config) if args.config else {}
    for key, value in vars(args).items():
        if key in ("command", "config") or value is None:
            continue
        if isinstance(value, tuple):
            value = ",".join(str(v) for v in value)
        values[key.replace("-", "_")] = str(value)
    return values


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _take(values: dict[str, str], key: str, default, cast=float):
    raw = values.pop(key, None)
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError as exc:
        raise ValidationError(f"bad value {raw!r} for {key}") from exc


def _as_bool(raw: str) -> bool:
    return str(raw).lower() in ("1", "true", "yes", "on")


def _run_spectrum(values: dict[str, str]) -> None:
    out = values.pop("out", None)
    preset = values.pop("preset", None)
    ratio, gamma = ex.SPECTRUM_PRESETS.get(preset, (1.0, 0.0))
    kwargs = dict(
        ng_min=_take(values, "ng_min", 0.0),
        ng_max=_take(values, "ng_max", 1.0),
        ng_points=_take(values, "ng_points", 101, int),
        truncation=_take(values, "truncation", 10, int),
    )
    transitions = _take(values, "transitions", preset in ex.TRANSITION_PRESETS, _as_bool)
    if preset == "squid-island":
        _emit(ex.squid_spectrum_report(**kwargs), out)
        return
    ratio = _take(values, "ej_over_ec", ratio)
    gamma = _take(values, "gamma_over_ec", gamma)
    _emit(ex.spectrum_report(ratio, gamma, transitions=transitions, **kwargs), out)


def _run_impedance(values: dict[str, str]) -> None:
    out = values.pop("out", None)
    text = ex.impedance_report(
        phi_max=_take(values, "phi_max", 1.5), points=_take(values, "points", 151, int)
    )
    _emit(text, out)


def _run_rwa(values: dict[str, str]) -> None:
    out = values.pop("out", None)
    preset = values.pop("preset", "xx-pair")
    text, result = ex.rwa_report(
        preset, n_samples=_take(values, "samples", 201, int), dt=_take(values, "dt", None)
    )
    _emit(text, out)
    print(f"preset={preset} max_deviation={result.max_deviation:.6f}", file=sys.stderr)


def _config(values: dict[str, str]) -> ex.ExperimentConfig:
    known = {k: v for k, v in values.items() if k in ex.ExperimentConfig.__dataclass_fields__}
    return ex.ExperimentConfig().with_overrides(known)


def _run_compile(values: dict[str, str]) -> None:
    steps = _take(values, "steps", 1, int)
    cfg = _config(values)
    lattice = cfg.lattice()
    schedule = compile_schedule(lattice, cfg.at, steps)
    _emit(export_schedule(schedule), cfg.out)
    emitted = schedule.emitted_counts()
    line = (
        f"blocks_per_step={emitted.total} type_a={emitted.type_a} type_b={emitted.type_b}"
    )
    if not lattice.include_coulomb:
        formula = block_count(lattice.cols)
        line += (
            f" formula_total={formula.total} formula_type_a={formula.type_a}"
            f" formula_type_b={formula.type_b}"
        )
    print(line, file=sys.stderr if cfg.out is None else sys.stdout)


def _run_simulate(values: dict[str, str]) -> None:
    cfg = _config(values)
    report = ex.fidelity_experiment(cfg)
    _emit(report.curve_csv(), cfg.out)


def _run_benchmark(values: dict[str, str]) -> None:
    cfg = _config(values)
    report = ex.mean_fidelity_experiment(cfg)
    _emit(report.rows_csv(), cfg.out)
    sys.stderr.write(report.summary_csv())


def _run_timing(values: dict[str, str]) -> None:
    out = values.pop("out", None)
    cols = _take(values, "cols_list", (2,), _steps)
    text = ex.timing_table(
        cols,
        _take(values, "at", 4.0),
        _take(values, "steps", (10, 20, 30), _steps),
        _take(values, "ag1_ghz", 0.08),
    )
    _emit(text, out)


COMMANDS = {
    "spectrum": _run_spectrum,
    "impedance": _run_impedance,
    "rwa-check": _run_rwa,
    "compile": _run_compile,
    "simulate": _run_simulate,
    "benchmark": _run_benchmark,
    "timing": _run_timing,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        values = _settings(args)
        COMMANDS[args.command](values)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
