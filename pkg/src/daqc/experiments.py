"""End-to-end experiments: fidelity curves, random-state benchmark, timing,
RWA validation and charge-qubit spectra, all emitting CSV text.

Random states come from ``numpy.random.default_rng(seed)`` (the PCG64
generator): ``2**N`` complex standard-normal amplitudes, normalized.
"""

from __future__ import annotations

import io
import math
import re
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from daqc.circuit import (
    CpbSpectrumRequest,
    TwoQubitCircuitParams,
    charging_energy,
    cpb_spectrum,
    impedance_ratio,
)
from daqc.errors import ResourceLimitError, ValidationError
from daqc.hubbard import (
    LatticeSpec,
    compile_schedule,
    hubbard_pauli_sum,
    number_sectors,
    sector_step_unitaries,
    simulate_schedule,
    spinless_index,
    timing,
)
from daqc.numerics import MAX_DENSE_QUBITS, BlockDiagonalPropagator, fidelity
from daqc.spin import ChainSpec, DriveSettings, RwaComparison, rwa_deviation

TWO_PI = 2 * math.pi
FLOAT_DIGITS = 12


def fmt(value: float) -> str:
    return f"{value:.{FLOAT_DIGITS}g}"


def write_csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) if isinstance(v, float) else str(v) for v in row) + "\n")
    return buf.getvalue()


@dataclass
class ExperimentConfig:
    """Settings shared by the harness subcommands; GHz values are omega/2pi."""

    experiment: str = "benchmark"
    rows: int = 3
    cols: int = 2
    hopping: float = 1.0
    onsite: float = 0.0
    coulomb: bool = False
    at: float = 4.0
    steps: tuple[int, ...] = (10, 20, 30)
    ag1_ghz: float = 0.08
    seed: int = 2024
    samples: int = 1000
    points: int = 81
    initial: str = "up@1,1"
    out: str | None = None

    def lattice(self) -> LatticeSpec:
        return LatticeSpec(self.cols, self.rows, self.hopping, self.onsite, self.coulomb)

    def with_overrides(self, values: dict[str, str]) -> ExperimentConfig:
        known = {f.name: f for f in fields(self)}
        parsed = {}
        for key, raw in values.items():
            key = key.replace("-", "_")
            if key not in known:
                raise ValidationError(f"unknown config key {key!r}")
            parsed[key] = _parse_value(key, raw, getattr(self, key))
        return replace(self, **parsed)


def _parse_value(key: str, raw: str, current: object) -> object:
    raw = raw.strip()
    try:
        if isinstance(current, bool):
            if raw.lower() in ("1", "true", "yes", "on"):
                return True
            if raw.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if isinstance(current, tuple):
            return tuple(int(x) for x in raw.split(",") if x.strip())
        if isinstance(current, int):
            return int(raw)
        if isinstance(current, float):
            return float(raw)
    except ValueError as exc:
        raise ValidationError(f"bad value {raw!r} for {key}") from exc
    return raw


def read_config_file(path: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for number, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"{path}:{number}: expected key=value")
            key, value = line.split("=", 1)
            values[key.strip()] = value.strip()
    return values


# --------------------------------------------------------------------------
# Initial states

_OCCUPATION = re.compile(r"^(up|down)@(\d+),(\d+)$")
_RANDOM = re.compile(r"^random\((\d+)\)$")


def random_states(n_qubits: int, count: int, seed: int) -> np.ndarray:
    """``count`` Haar-random states as columns."""
    rng = np.random.default_rng(seed)
    dim = 1 << n_qubits
    raw = rng.standard_normal((dim, count)) + 1j * rng.standard_normal((dim, count))
    return raw / np.linalg.norm(raw, axis=0)


def initial_state(spec: str, lattice: LatticeSpec) -> np.ndarray:
    """Parse an initial-state description.

    * ``up@r,c;down@r,c;...`` occupies the listed modes (rows and columns from 1);
    * ``ghz-pair`` is (all occupied + vacuum)/sqrt(2);
    * ``random(seed)`` is a seeded Haar-random state.
    """
    n = lattice.n_qubits
    if n > MAX_DENSE_QUBITS:
        raise ResourceLimitError(f"{n} qubits exceeds the simulation limit")
    dim = 1 << n
    spec = spec.strip()
    if spec == "ghz-pair":
        psi = np.zeros(dim, dtype=complex)
        psi[0] = psi[dim - 1] = 1 / math.sqrt(2)
        return psi
    match = _RANDOM.match(spec)
    if match:
        return random_states(n, 1, int(match.group(1)))[:, 0]
    bits = ["1"] * n  # vacuum: every mode in |1>
    for item in filter(None, (s.strip() for s in spec.split(";"))):
        match = _OCCUPATION.match(item)
        if not match:
            raise ValidationError(f"cannot parse initial-state item {item!r}")
        spin, row, col = match.group(1), int(match.group(2)), int(match.group(3))
        position = spinless_index(lattice, row - 1, col, spin)
        if bits[position - 1] == "0":
            raise ValidationError(f"mode {item} listed twice")
        bits[position - 1] = "0"
    psi = np.zeros(dim, dtype=complex)
    psi[int("".join(bits), 2)] = 1.0
    return psi


# --------------------------------------------------------------------------
# Hopping dynamics


@lru_cache(maxsize=8)
def exact_propagator(lattice: LatticeSpec) -> BlockDiagonalPropagator:
    """Exact propagator; the Hamiltonian conserves particle number, so it is
    diagonalized one number sector at a time."""
    n = lattice.n_qubits
    if n > MAX_DENSE_QUBITS:
        raise ResourceLimitError(f"{n} qubits exceeds the simulation limit")
    h = hubbard_pauli_sum(lattice).sparse()
    blocks = []
    covered = 0.0
    for idx in number_sectors(n):
        block = h[idx][:, idx]
        covered += abs(block).sum()
        blocks.append((idx, block.toarray()))
    if not math.isclose(covered, abs(h).sum(), rel_tol=1e-12, abs_tol=1e-12):
        raise ValidationError("Hamiltonian couples different particle numbers")
    return BlockDiagonalPropagator(1 << n, blocks)


def exact_hopping_evolution(lattice: LatticeSpec, t: float, psi0: np.ndarray) -> np.ndarray:
    return exact_propagator(lattice).evolve(t, np.asarray(psi0, dtype=complex))


@dataclass
class FidelityReport:
    rows: list[tuple[float, int, int, float]] = field(default_factory=list)
    summary: list[tuple[int, float, float, int]] = field(default_factory=list)

    def rows_csv(self) -> str:
        return write_csv(("at", "n", "sample", "fidelity"), self.rows)

    def curve_csv(self) -> str:
        return write_csv(("at", "n", "fidelity"), [(a, n, f) for a, n, _, f in self.rows])

    def summary_csv(self) -> str:
        return write_csv(("n", "mean", "std", "samples"), self.summary)

    def endpoint(self, n: int) -> float:
        return max((r for r in self.rows if r[1] == n), key=lambda r: r[0])[3]


def fidelity_experiment(cfg: ExperimentConfig, psi0: np.ndarray | None = None) -> FidelityReport:
    """Fidelity against exact evolution on a uniform grid of ``A t`` in ``[0, at]``."""
    lattice = cfg.lattice()
    if psi0 is None:
        psi0 = initial_state(cfg.initial, lattice)
    if cfg.points < 1:
        raise ValidationError("need at least one sample point")
    grid = np.linspace(0.0, cfg.at, cfg.points) if cfg.points > 1 else np.array([cfg.at])
    report = FidelityReport()
    for n in cfg.steps:
        for at in grid:
            exact = exact_hopping_evolution(lattice, at / lattice.hopping, psi0)
            trotter = simulate_schedule(compile_schedule(lattice, float(at), n), psi0)
            report.rows.append((float(at), n, 0, fidelity(exact, trotter)))
    return report


def trotter_evolve_batch(lattice: LatticeSpec, at: float, steps: int,
                         states: np.ndarray) -> np.ndarray:
    """Apply the full ``steps``-step schedule to the columns of ``states``.

    One Trotter step is assembled per particle-number sector by running every
    block on that sector's basis vectors; its ``steps``-th power then acts on
    all states at once.
    """
    schedule = compile_schedule(lattice, at, steps)
    out = np.zeros_like(states)
    for idx, step in zip(number_sectors(lattice.n_qubits), sector_step_unitaries(schedule)):
        out[idx] = np.linalg.matrix_power(step, steps) @ states[idx]
    return out


def mean_fidelity_experiment(cfg: ExperimentConfig) -> FidelityReport:
    if cfg.samples < 1:
        raise ValidationError("need at least one random sample")
    lattice = cfg.lattice()
    states = random_states(lattice.n_qubits, cfg.samples, cfg.seed)
    exact = exact_propagator(lattice).evolve_batch(cfg.at / lattice.hopping, states)
    report = FidelityReport()
    for n in cfg.steps:
        trotter = trotter_evolve_batch(lattice, cfg.at, n, states)
        overlaps = np.abs(np.sum(exact.conj() * trotter, axis=0)) ** 2
        values = np.minimum(overlaps, 1.0)
        for i, f in enumerate(values):
            report.rows.append((cfg.at, n, i, float(f)))
        report.summary.append((n, float(values.mean()), float(values.std()), cfg.samples))
    return report


def timing_table(cols: Sequence[int], at: float, steps: Sequence[int], ag1_ghz: float) -> str:
    lines = ["cols,n,tau_a_ns,tau_b_ns,tau_sim_us"]
    for ell in cols:
        for n in steps:
            r = timing(ell, at, n, TWO_PI * ag1_ghz)
            lines.append(f"{ell},{n},{r.tau_a_ns:.3f},{r.tau_b_ns:.3f},{r.tau_sim_us:.3f}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Rotating-wave validation


@dataclass(frozen=True)
class RwaPreset:
    chain: ChainSpec
    drives: tuple[DriveSettings, ...]
    initial: str
    observables: tuple[str, ...]
    t_max: float


def _chain(n: int, g0_ghz: float, ag1_ghz: float, amplitude: float = 0.1) -> ChainSpec:
    return ChainSpec.uniform(n, TWO_PI * 9, TWO_PI * 1, TWO_PI * g0_ghz,
                             TWO_PI * ag1_ghz / amplitude)


def rwa_preset(name: str) -> RwaPreset:
    """Parameter sets of the lab-frame versus rotating-wave comparisons.

    Qubits sit at 9 and 1 GHz; flux amplitudes are 0.1 with ``g1`` chosen so
    that ``A*g1`` hits the target coupling.

    * ``xx-pair``: two qubits, ``+XX`` drive, ``g0/2pi = 0.2``, ``A*g1/2pi = 0.08`` GHz;
    * ``xx-chain``: three qubits, ``+XX`` on both links, ``A*g1/2pi = 0.1`` GHz;
    * ``exchange-only`` / ``pairing-only``: a single tone at the detuning or the sum;
    * ``idle``: no drive, only the static coupling.
    """
    two = ("00", "01", "10", "11")
    if name == "xx-pair":
        chain = _chain(2, 0.2, 0.08)
        drive = DriveSettings.resonant(chain, 1, 0.1, (Fraction(2), Fraction(1)))
        return RwaPreset(chain, (drive,), "01", two, 12.5)
    if name == "xx-chain":
        chain = _chain(3, 0.2, 0.1)
        drives = tuple(
            DriveSettings.resonant(chain, j, 0.1, (Fraction(2), Fraction(1))) for j in (1, 2)
        )
        return RwaPreset(chain, drives, "000", ("000", "011", "101", "110"), 10.0)
    if name == "exchange-only":
        chain = _chain(2, 0.05, 0.08)
        drive = DriveSettings.resonant(chain, 1, 0.1, (Fraction(2), Fraction(2)), a2=0.0)
        return RwaPreset(chain, (drive,), "01", two, 12.5)
    if name == "pairing-only":
        chain = _chain(2, 0.05, 0.08)
        drive = replace(
            DriveSettings.resonant(chain, 1, 0.1, (Fraction(2), Fraction(2))), a1=0.0
        )
        return RwaPreset(chain, (drive,), "00", two, 12.5)
    if name == "idle":
        return RwaPreset(_chain(2, 0.05, 0.08), (), "01", two, 12.5)
    raise ValidationError(f"unknown RWA preset {name!r}")


RWA_PRESETS = ("xx-pair", "xx-chain", "exchange-only", "pairing-only", "idle")


def rwa_report(name: str, n_samples: int = 201, dt: float | None = None) -> tuple[str, RwaComparison]:
    preset = rwa_preset(name)
    result = rwa_deviation(
        preset.chain, list(preset.drives), preset.t_max, list(preset.observables),
        preset.initial, dt=dt, n_samples=n_samples,
    )
    header = ["t_ns"] + [f"p_full_{b}" for b in result.labels] + [f"p_rwa_{b}" for b in result.labels]
    rows = [
        [float(t)] + [float(x) for x in full] + [float(x) for x in rwa]
        for t, full, rwa in zip(result.times, result.p_full, result.p_rwa)
    ]
    return write_csv(header, rows), result


# --------------------------------------------------------------------------
# Spectra and impedance


SPECTRUM_PRESETS = {
    # name: (E_J / E_C, gamma / E_C)
    "ej1-gamma1": (1.0, 1.0),
    "ej1-gamma4": (1.0, 4.0),
    "ej4-gamma1": (4.0, 1.0),
    "charge-0.303": (0.303, 0.0),
    "charge-0.058": (0.058, 0.0),
}
# presets reported as transition energies above the ground state
TRANSITION_PRESETS = ("charge-0.303", "charge-0.058")


def spectrum_report(
    ej_over_ec: float,
    gamma_over_ec: float = 0.0,
    ec: float = 1.0,
    ng_min: float = 0.0,
    ng_max: float = 1.0,
    ng_points: int = 101,
    truncation: int = 10,
    transitions: bool = False,
) -> str:
    if ng_points < 1:
        raise ValidationError("need at least one n_g point")
    grid = np.linspace(ng_min, ng_max, ng_points) if ng_points > 1 else np.array([ng_min])
    req = CpbSpectrumRequest(ej_over_ec * ec, ec, gamma_over_ec * ec,
                             tuple(float(x) for x in grid), truncation, 4)
    energies = cpb_spectrum(req)
    if transitions:
        header = ("n_g", "E1_minus_E0", "E2_minus_E0", "E3_minus_E0")
        rows = [[float(g)] + [float(e - row[0]) for e in row[1:]] for g, row in zip(grid, energies)]
    else:
        header = ("n_g", "E0", "E1", "E2", "E3")
        rows = [[float(g)] + [float(e) for e in row] for g, row in zip(grid, energies)]
    return write_csv(header, rows)


def squid_spectrum_report(e_js_ghz: float = 50.0, c_s_ff: float = 12.0, **kwargs) -> str:
    """Transitions of the SQUID island treated as a charge qubit (qualitative)."""
    ec = charging_energy(c_s_ff)
    return spectrum_report(TWO_PI * e_js_ghz / ec, ec=ec, transitions=True, **kwargs)


def default_circuit() -> TwoQubitCircuitParams:
    """Illustrative two-qubit circuit (fF, rad/ns) used for impedance sweeps."""
    return TwoQubitCircuitParams(
        c_g1=0.5, c_g2=0.5, c_j1=2.0, c_j2=2.0, c_c=1.0, c_s=12.0,
        e_j1=TWO_PI * 9.0, e_j2=TWO_PI * 1.0, e_js=TWO_PI * 50.0,
    )


def impedance_report(p: TwoQubitCircuitParams | None = None, phi_max: float = 1.5,
                     points: int = 151) -> str:
    p = p or default_circuit()
    if points < 1:
        raise ValidationError("need at least one flux point")
    grid = np.linspace(0.0, phi_max, points) if points > 1 else np.array([0.0])
    return write_csv(("phi_ext", "ratio"), [(float(x), impedance_ratio(p, float(x))) for x in grid])
