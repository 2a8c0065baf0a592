"""Charge-qubit and SQUID-coupler circuit formulas.

Capacitances may be given in any common unit (fF in the examples);
Josephson and charging energies are angular frequencies in rad/ns.
Gate charges are reported in units where the Cooper-pair charge 2e = 1,
so ``C * V`` products enter in the same arbitrary units as the voltages.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import constants

from daqc.errors import ValidationError

DIVERGENCE_TOL = 1e-6
SMALL_AC_RATIO = 0.1
MIN_TRUNCATION = 5
DEFAULT_TRUNCATION = 10
CONVERGENCE_TOL = 1e-8


class DivergenceError(ValidationError):
    """The SQUID effective Josephson energy vanishes (singular inductance)."""


class TruncationError(ValidationError):
    """The charge-basis spectrum is not converged at the requested truncation."""


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not value > 0:
            raise ValidationError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class TwoQubitCircuitParams:
    """Two charge qubits coupled through a grounded SQUID."""

    c_g1: float
    c_g2: float
    c_j1: float
    c_j2: float
    c_c: float
    c_s: float
    e_j1: float
    e_j2: float
    e_js: float
    v_g1: float = 0.0
    v_g2: float = 0.0

    def __post_init__(self) -> None:
        _require_positive(
            c_g1=self.c_g1, c_g2=self.c_g2, c_j1=self.c_j1, c_j2=self.c_j2,
            c_c=self.c_c, c_s=self.c_s, e_j1=self.e_j1, e_j2=self.e_j2, e_js=self.e_js,
        )

    @property
    def c1(self) -> float:
        return self.c_g1 + self.c_j1

    @property
    def c2(self) -> float:
        return self.c_g2 + self.c_j2

    def swapped(self) -> TwoQubitCircuitParams:
        """The same circuit with the qubit labels exchanged."""
        return TwoQubitCircuitParams(
            self.c_g2, self.c_g1, self.c_j2, self.c_j1, self.c_c, self.c_s,
            self.e_j2, self.e_j1, self.e_js, self.v_g2, self.v_g1,
        )


@dataclass(frozen=True)
class ThreeQubitCircuitParams:
    """Three charge qubits and two identical SQUID couplers; qubit 3 copies qubit 1."""

    c_g1: float
    c_g2: float
    c_j1: float
    c_j2: float
    c_c: float
    c_s: float
    e_j1: float
    e_j2: float
    e_js: float

    def __post_init__(self) -> None:
        _require_positive(
            c_g1=self.c_g1, c_g2=self.c_g2, c_j1=self.c_j1, c_j2=self.c_j2,
            c_c=self.c_c, c_s=self.c_s, e_j1=self.e_j1, e_j2=self.e_j2, e_js=self.e_js,
        )

    @property
    def c1(self) -> float:
        return self.c_g1 + self.c_j1

    @property
    def c2(self) -> float:
        return self.c_g2 + self.c_j2


@dataclass(frozen=True)
class FluxBias:
    """External SQUID flux ``phi_dc + sum_k A_k cos(nu_k t + phase_k)``.

    ``tones`` holds up to two ``(amplitude, frequency, phase)`` triples.
    """

    phi_dc: float
    tones: tuple[tuple[float, float, float], ...] = ()

    def __post_init__(self) -> None:
        if len(self.tones) > 2:
            raise ValidationError("a SQUID bias carries at most two AC tones")
        for amplitude, _, _ in self.tones:
            if abs(amplitude) > SMALL_AC_RATIO * abs(self.phi_dc):
                warnings.warn(
                    f"AC amplitude {amplitude:g} exceeds {SMALL_AC_RATIO:g}*|phi_dc|; "
                    "the linearized coupling is no longer accurate",
                    stacklevel=2,
                )


@dataclass(frozen=True)
class EffectiveSpinParams:
    omega1: float
    omega2: float
    g0: float
    g1: float


@dataclass(frozen=True)
class ThreeQubitSpinParams:
    omega1: float
    omega2: float
    g0: tuple[float, float]
    g1: tuple[float, float]


@dataclass(frozen=True)
class ChargeCouplings:
    c_star_cubed: float
    c_tilde_j1: float
    c_tilde_j2: float
    c_tilde_js: float
    n_g1: float
    n_g2: float
    n_gs: float
    g12: float
    g1s: float
    g2s: float


@dataclass(frozen=True)
class CpbSpectrumRequest:
    e_j: float
    e_c: float
    gamma: float = 0.0
    n_g: tuple[float, ...] = field(default_factory=lambda: (0.5,))
    truncation: int = DEFAULT_TRUNCATION
    levels: int = 4

    def __post_init__(self) -> None:
        if self.truncation < MIN_TRUNCATION:
            raise ValidationError(f"truncation must be at least {MIN_TRUNCATION}")
        if not 1 <= self.levels <= 2 * self.truncation + 1:
            raise ValidationError("requested more levels than the truncated basis holds")
        if self.e_c <= 0:
            raise ValidationError("charging energy must be positive")
        if len(self.n_g) == 0:
            raise ValidationError("empty n_g grid")


def squid_effective_ej(e_js: float, phi_ext: float) -> float:
    """``2 E_Js cos(phi_ext)``; diverges as the flux approaches pi/2 mod pi."""
    c = math.cos(phi_ext)
    if abs(c) <= DIVERGENCE_TOL:
        raise DivergenceError(f"cos({phi_ext:g}) is within {DIVERGENCE_TOL:g} of zero")
    return 2.0 * e_js * c


def _coupler_denominator_g0(c1: float, c2: float, c_c: float) -> float:
    return 4.0 * (c1 + c_c) * (c2 + c_c)


def two_qubit_effective_params(p: TwoQubitCircuitParams, bias: FluxBias) -> EffectiveSpinParams:
    ej_eff = squid_effective_ej(p.e_js, bias.phi_dc)
    g0 = p.c_c**2 * p.e_j1 * p.e_j2 / (_coupler_denominator_g0(p.c1, p.c2, p.c_c) * ej_eff)
    g1 = g0 * math.tan(bias.phi_dc)
    return EffectiveSpinParams(omega1=p.e_j1, omega2=p.e_j2, g0=g0, g1=g1)


def three_qubit_effective_params(
    p: ThreeQubitCircuitParams, biases: tuple[FluxBias, FluxBias]
) -> ThreeQubitSpinParams:
    if len(biases) != 2:
        raise ValidationError("need one bias per SQUID")
    g0s = []
    g1s = []
    for bias in biases:
        ej_eff = squid_effective_ej(p.e_js, bias.phi_dc)
        # The middle qubit sees both couplers, hence the 2*C_c.
        g0 = p.c_c**2 * p.e_j1 * p.e_j2 / (
            4.0 * (p.c1 + p.c_c) * (p.c2 + 2 * p.c_c) * ej_eff
        )
        g0s.append(g0)
        g1s.append(g0 * math.tan(bias.phi_dc))
    return ThreeQubitSpinParams(p.e_j1, p.e_j2, (g0s[0], g0s[1]), (g1s[0], g1s[1]))


def squid_ej_for_coupling(
    c1: float, c2: float, c_c: float, e_j1: float, e_j2: float, phi_dc: float, g0: float
) -> float:
    """Invert the two-qubit ``g0`` formula for the SQUID junction energy ``E_Js``."""
    _require_positive(g0=g0)
    c = math.cos(phi_dc)
    if abs(c) <= DIVERGENCE_TOL:
        raise DivergenceError("flux bias too close to pi/2")
    return c_c**2 * e_j1 * e_j2 / (_coupler_denominator_g0(c1, c2, c_c) * 2.0 * c * g0)


def design_two_qubit_bias(
    base: TwoQubitCircuitParams, phi_dc: float, g0: float, amplitude_g1: float
) -> tuple[TwoQubitCircuitParams, float]:
    """Choose ``E_Js`` and the AC amplitude hitting target ``g0`` and ``A*g1``.

    Returns the circuit with the solved ``E_Js`` and the amplitude ``A``.
    """
    e_js = squid_ej_for_coupling(base.c1, base.c2, base.c_c, base.e_j1, base.e_j2, phi_dc, g0)
    circuit = TwoQubitCircuitParams(
        base.c_g1, base.c_g2, base.c_j1, base.c_j2, base.c_c, base.c_s,
        base.e_j1, base.e_j2, e_js, base.v_g1, base.v_g2,
    )
    amplitude = amplitude_g1 / (g0 * math.tan(phi_dc))
    return circuit, amplitude


def full_charge_couplings(p: TwoQubitCircuitParams) -> ChargeCouplings:
    c1, c2, cc, cs = p.c1, p.c2, p.c_c, p.c_s
    c_star3 = cc * (c1 + c2) * (cs + cc) + cc**2 * cs + c1 * c2 * (2 * cc + cs)
    ct_j1 = c_star3 / (c2 * (2 * cc + cs) + cc * (cc + cs))
    ct_j2 = c_star3 / (c1 * (2 * cc + cs) + cc * (cc + cs))
    ct_js = c_star3 / ((cc + c1) * (cc + c2))
    q1 = p.c_g1 * p.v_g1
    q2 = p.c_g2 * p.v_g2
    n_g1 = -q1 - ct_j1 * cc**2 * q2 / c_star3
    n_g2 = -q2 - ct_j2 * cc**2 * q1 / c_star3
    n_gs = -ct_js * cc / c_star3 * ((c2 + cc) * q1 + (c1 + cc) * q2)
    return ChargeCouplings(
        c_star_cubed=c_star3,
        c_tilde_j1=ct_j1,
        c_tilde_j2=ct_j2,
        c_tilde_js=ct_js,
        n_g1=n_g1,
        n_g2=n_g2,
        n_gs=n_gs,
        g12=cc**2 / c_star3,
        g1s=cc * (c2 + cc) / c_star3,
        g2s=cc * (c1 + cc) / c_star3,
    )


def impedance_ratio(p: TwoQubitCircuitParams, phi_ext: float) -> float:
    """SQUID-to-qubit impedance ratio with ``Z = sqrt(L_J / C)`` and ``L_J ~ 1/E_J``.

    The flux-quantum prefactor of ``L_J`` cancels in the ratio.  The qubit
    capacitance is ``C_1 + C_c`` and the SQUID capacitance ``C_s``.
    """
    ej_eff = abs(squid_effective_ej(p.e_js, phi_ext))
    return math.sqrt((p.e_j1 / ej_eff) * ((p.c1 + p.c_c) / p.c_s))


def charging_energy(capacitance_ff: float) -> float:
    """``e^2 / (2C)`` as an angular frequency in rad/ns."""
    _require_positive(capacitance_ff=capacitance_ff)
    energy = constants.e**2 / (2 * capacitance_ff * 1e-15)
    return energy / constants.hbar * 1e-9


def charge_basis_hamiltonian(
    e_j: float, e_c: float, gamma: float, n_g: float, truncation: int
) -> np.ndarray:
    charges = np.arange(-truncation, truncation + 1, dtype=float)
    raise_charge = np.diag(np.ones(2 * truncation), k=1)  # |n><n+1|
    cos_phi = 0.5 * (raise_charge + raise_charge.T)
    sin_phi = -0.5j * (raise_charge - raise_charge.T)
    h = np.diag(4.0 * e_c * (charges - n_g) ** 2).astype(complex)
    h -= e_j * cos_phi
    h += gamma * (sin_phi @ sin_phi)
    return h


def _spectrum(req: CpbSpectrumRequest, truncation: int) -> np.ndarray:
    rows = []
    for n_g in req.n_g:
        h = charge_basis_hamiltonian(req.e_j, req.e_c, req.gamma, n_g, truncation)
        rows.append(np.linalg.eigvalsh(h)[: req.levels])
    return np.array(rows)


def cpb_spectrum(req: CpbSpectrumRequest, check_convergence: bool = True) -> np.ndarray:
    """Lowest ``req.levels`` eigenvalues for every ``n_g`` (rows), ascending."""
    energies = _spectrum(req, req.truncation)
    if check_convergence:
        wider = _spectrum(req, req.truncation + 4)
        drift = float(np.max(np.abs(wider - energies)))
        if drift >= CONVERGENCE_TOL * req.e_c:
            raise TruncationError(
                f"levels move by {drift:.3g} when the charge cutoff grows; raise truncation"
            )
    return energies
