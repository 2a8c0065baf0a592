"""Driven spin chains: lab-frame model, rotating-wave form, phase lookup.

Chain positions ``j`` and link indices are 1-based here: link ``j`` couples
qubits ``j`` and ``j + 1``.  Odd qubits sit at ``omega_odd``, even ones at
``omega_even``.  Drive phases are stored as exact multiples of pi.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from daqc.errors import ResourceLimitError, ValidationError
from daqc.numerics import (
    HarmonicCoefficient,
    HermitianOperator,
    PauliString,
    PauliSum,
    TimeDependentHamiltonian,
    basis_state,
    evolve_harmonic,
    static_unitary,
)

RESONANCE_RTOL = 1e-9
OFF_RESONANCE_FACTOR = 20
LAB_FRAME_QUBIT_BUDGET = 3


def cos_pi(multiple: Fraction) -> float:
    """``cos(multiple * pi)``, exact for multiples of pi/2."""
    multiple = Fraction(multiple)
    if (2 * multiple).denominator == 1:
        return (1.0, 0.0, -1.0, 0.0)[int(2 * multiple) % 4]
    return math.cos(float(multiple) * math.pi)


def sin_pi(multiple: Fraction) -> float:
    """``sin(multiple * pi)``, exact for multiples of pi/2."""
    multiple = Fraction(multiple)
    if (2 * multiple).denominator == 1:
        return (0.0, 1.0, 0.0, -1.0)[int(2 * multiple) % 4]
    return math.sin(float(multiple) * math.pi)


def format_pi_multiple(multiple: Fraction) -> str:
    multiple = Fraction(multiple)
    if multiple.denominator == 1:
        return str(multiple.numerator)
    return f"{multiple.numerator}/{multiple.denominator}"


@dataclass(frozen=True)
class ChainSpec:
    """A chain of qubits with alternating frequencies and per-link couplings."""

    n_qubits: int
    omega_odd: float
    omega_even: float
    g0: tuple[float, ...]
    g1: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.n_qubits < 2:
            raise ValidationError("a chain needs at least two qubits")
        links = self.n_qubits - 1
        if len(self.g0) != links or len(self.g1) != links:
            raise ValidationError(f"expected {links} per-link couplings")
        detuning = abs(self.omega_odd - self.omega_even)
        if any(detuning < OFF_RESONANCE_FACTOR * abs(g) for g in self.g0):
            warnings.warn(
                "qubit detuning is below 20*g0; the static coupling is not far off resonance",
                stacklevel=2,
            )

    @classmethod
    def uniform(
        cls, n_qubits: int, omega_odd: float, omega_even: float, g0: float, g1: float
    ) -> ChainSpec:
        links = n_qubits - 1
        return cls(n_qubits, omega_odd, omega_even, (g0,) * links, (g1,) * links)

    def omega(self, j: int) -> float:
        return self.omega_odd if j % 2 == 1 else self.omega_even

    def detuning(self, link: int) -> float:
        return abs(self.omega(link) - self.omega(link + 1))

    def frequency_sum(self, link: int) -> float:
        return self.omega(link) + self.omega(link + 1)


@dataclass(frozen=True)
class DriveSettings:
    """Two-tone AC flux drive on one SQUID (link)."""

    link: int
    a1: float
    a2: float
    nu1: float
    nu2: float
    phase1: Fraction = Fraction(0)
    phase2: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if self.link < 1:
            raise ValidationError("link indices start at 1")
        object.__setattr__(self, "phase1", Fraction(self.phase1))
        object.__setattr__(self, "phase2", Fraction(self.phase2))

    @classmethod
    def resonant(
        cls,
        chain: ChainSpec,
        link: int,
        amplitude: float,
        phases: tuple[Fraction, Fraction],
        a2: float | None = None,
    ) -> DriveSettings:
        """Drive with the exchange tone at the detuning and the other at the sum."""
        return cls(
            link,
            amplitude,
            amplitude if a2 is None else a2,
            chain.detuning(link),
            chain.frequency_sum(link),
            phases[0],
            phases[1],
        )

    def tones(self) -> tuple[tuple[float, float, float], ...]:
        out = []
        if self.a1 != 0:
            out.append((self.a1, self.nu1, float(self.phase1) * math.pi))
        if self.a2 != 0:
            out.append((self.a2, self.nu2, float(self.phase2) * math.pi))
        return tuple(out)


@dataclass(frozen=True)
class TwoLocalTarget:
    """``sign * sigma_j^a sigma_{j+1}^b`` on link ``j``."""

    sign: int
    axes: tuple[str, str]
    link: int

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValidationError("sign must be +1 or -1")
        if len(self.axes) != 2 or any(a not in ("X", "Y") for a in self.axes):
            raise ValidationError(f"axes must be drawn from X and Y, got {self.axes!r}")
        if self.link < 1:
            raise ValidationError("link indices start at 1")


def _check_drives(chain: ChainSpec, drives: Sequence[DriveSettings]) -> None:
    seen = set()
    for d in drives:
        if d.link in seen:
            raise ValidationError(f"link {d.link} driven twice")
        if d.link > chain.n_qubits - 1:
            raise ValidationError(f"link {d.link} outside a {chain.n_qubits}-qubit chain")
        seen.add(d.link)


def _pair(n_qubits: int, link: int, a: str, b: str) -> PauliString:
    return PauliString.from_sites(n_qubits, {link - 1: a, link: b})


def lab_frame_hamiltonian(
    chain: ChainSpec, drives: Sequence[DriveSettings]
) -> TimeDependentHamiltonian:
    """``sum_l (omega_l/2) Z_l + sum_j [g0 + g1 * phi_ac(t)] Y_j Y_{j+1}``."""
    _check_drives(chain, drives)
    n = chain.n_qubits
    h = TimeDependentHamiltonian(n)
    for j in range(1, n + 1):
        h.add(PauliString.from_sites(n, {j - 1: "Z"}), HarmonicCoefficient(chain.omega(j) / 2))
    by_link = {d.link: d for d in drives}
    for link in range(1, n):
        g0, g1 = chain.g0[link - 1], chain.g1[link - 1]
        drive = by_link.get(link)
        tones = ()
        if drive is not None:
            tones = tuple((g1 * a, nu, ph) for a, nu, ph in drive.tones())
        h.add(_pair(n, link, "Y", "Y"), HarmonicCoefficient(g0, tones))
    return h


def _is_resonant(nu: float, target: float) -> bool:
    return abs(nu - target) <= RESONANCE_RTOL * max(abs(target), 1.0)


def rwa_terms(chain: ChainSpec, drives: Sequence[DriveSettings]) -> PauliSum:
    """Interaction-picture Hamiltonian after dropping fast-rotating terms."""
    _check_drives(chain, drives)
    n = chain.n_qubits
    out = PauliSum(n)
    for d in drives:
        j = d.link
        if d.a1 != 0 and not _is_resonant(d.nu1, chain.detuning(j)):
            raise ValidationError(f"exchange tone on link {j} is off resonance")
        if d.a2 != 0 and not _is_resonant(d.nu2, chain.frequency_sum(j)):
            raise ValidationError(f"double-excitation tone on link {j} is off resonance")
        scale = chain.g1[j - 1] / 4
        parity = 1 if j % 2 == 0 else -1
        c1, s1 = cos_pi(d.phase1), sin_pi(d.phase1)
        c2, s2 = cos_pi(d.phase2), sin_pi(d.phase2)
        coefficients = {
            ("X", "X"): d.a1 * c1 - d.a2 * c2,
            ("X", "Y"): parity * d.a1 * s1 - d.a2 * s2,
            ("Y", "X"): -parity * d.a1 * s1 - d.a2 * s2,
            ("Y", "Y"): d.a1 * c1 + d.a2 * c2,
        }
        for (a, b), value in coefficients.items():
            out.add(_pair(n, j, a, b).scaled(scale * value))
    return out


def rwa_hamiltonian(chain: ChainSpec, drives: Sequence[DriveSettings]) -> HermitianOperator:
    return HermitianOperator(rwa_terms(chain, drives).dense())


def two_local_coefficients(chain: ChainSpec, drive: DriveSettings) -> dict[str, float]:
    """The four two-local coefficients of a single drive, keyed ``"XX"`` etc."""
    terms = rwa_terms(chain, [drive]).terms
    out = {}
    for a in "XY":
        for b in "XY":
            out[a + b] = float(np.real(terms.get(_pair(chain.n_qubits, drive.link, a, b).letters, 0)))
    return out


def phase_lookup(target: TwoLocalTarget) -> tuple[Fraction, Fraction]:
    """Drive phases (multiples of pi) that activate ``target`` alone."""
    j = target.link
    even = Fraction(1 + Fraction((-1) ** j, 2))
    odd = Fraction(1 + Fraction((-1) ** (j + 1), 2))
    table = {
        (1, ("Y", "Y")): (Fraction(2), Fraction(2)),
        (-1, ("Y", "Y")): (Fraction(1), Fraction(1)),
        (1, ("X", "X")): (Fraction(2), Fraction(1)),
        (-1, ("X", "X")): (Fraction(1), Fraction(2)),
        (1, ("Y", "X")): (even, Fraction(3, 2)),
        (-1, ("Y", "X")): (odd, Fraction(1, 2)),
        (1, ("X", "Y")): (odd, Fraction(3, 2)),
        (-1, ("X", "Y")): (even, Fraction(1, 2)),
    }
    return table[(target.sign, tuple(target.axes))]


@dataclass
class RwaComparison:
    times: np.ndarray
    labels: list[str]
    p_full: np.ndarray
    p_rwa: np.ndarray
    max_deviation: float = field(init=False)

    def __post_init__(self) -> None:
        self.max_deviation = float(np.max(np.abs(self.p_full - self.p_rwa)))


def rwa_deviation(
    chain: ChainSpec,
    drives: Sequence[DriveSettings],
    t_max: float,
    observables: Sequence[str],
    psi0: np.ndarray | str,
    dt: float | None = None,
    n_samples: int = 201,
    allow_large: bool = False,
) -> RwaComparison:
    """Co-simulate the lab-frame and rotating-wave models.

    Basis populations are unchanged by the diagonal frame transformation, so
    they are compared directly.  ``observables`` are bit strings such as
    ``"01"``.  ``dt`` defaults to a quarter of the stability ceiling.
    """
    n = chain.n_qubits
    if n > LAB_FRAME_QUBIT_BUDGET and not allow_large:
        raise ResourceLimitError(
            f"lab-frame integration is budgeted to {LAB_FRAME_QUBIT_BUDGET} qubits"
        )
    if n_samples < 2:
        raise ValidationError("need at least two time samples")
    if isinstance(psi0, str):
        psi0 = basis_state(n, psi0)
    lab = lab_frame_hamiltonian(chain, drives)
    rwa = rwa_hamiltonian(chain, drives)
    if dt is None:
        dt = lab.max_step() / 4 if math.isfinite(lab.max_step()) else t_max / 1000
    indices = [int(bits, 2) for bits in observables]
    for bits in observables:
        if len(bits) != n or set(bits) - {"0", "1"}:
            raise ValidationError(f"bad observable {bits!r}")

    times = np.linspace(0.0, t_max, n_samples)
    p_full = np.zeros((n_samples, len(indices)))
    p_rwa = np.zeros_like(p_full)
    psi = np.asarray(psi0, dtype=complex)
    spacing = times[1] - times[0]
    step_unitary = static_unitary(rwa, spacing)
    psi_rwa = psi.copy()
    for i, t in enumerate(times):
        if i > 0:
            psi = evolve_harmonic(lab, times[i - 1], t, psi, dt)
            psi_rwa = step_unitary @ psi_rwa
        p_full[i] = np.abs(psi[indices]) ** 2
        p_rwa[i] = np.abs(psi_rwa[indices]) ** 2
    return RwaComparison(times, list(observables), p_full, p_rwa)
