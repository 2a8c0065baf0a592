"""Fermi-Hubbard lattices on a qubit chain and their analog-block schedules.

Sites of an ``cols x rows`` lattice are numbered row by row; fermionic site
``j = k*cols + c`` (row ``k`` from 0, column ``c`` from 1) carries spin up on
chain position ``2j - 1`` and spin down on ``2j``.  Chain positions are 1-based.
An occupied mode is the ``Z = +1`` state ``|0>``, so the vacuum is ``|1...1>``.

A hopping step is built from *interactions*: a type-a core
``exp(-i theta sum_p sigma_p sigma_p')`` on disjoint nearest-neighbour pairs,
conjugated by a dressing ``V`` made of pi/4 type-b blocks, so that
``V exp(-i theta C) V^dagger = exp(-i theta V C V^dagger)`` with ``V C V^dagger``
a sum of Jordan-Wigner hopping strings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from daqc.errors import ResourceLimitError, ValidationError
from daqc.numerics import (
    MAX_DENSE_QUBITS,
    HermitianOperator,
    PauliString,
    PauliSum,
    popcount,
)
from daqc.spin import ChainSpec, DriveSettings, TwoLocalTarget, format_pi_multiple, phase_lookup

QUARTER_TURN = math.pi / 4

TYPE_A = "type_a"
TYPE_B = "type_b"
COULOMB_A = "coulomb_a"
LOCAL = "local"


@dataclass(frozen=True)
class LatticeSpec:
    cols: int
    rows: int
    hopping: float = 1.0
    onsite: float = 0.0
    include_coulomb: bool = False

    def __post_init__(self) -> None:
        if self.cols < 1 or self.rows < 1:
            raise ValidationError("lattice needs at least one row and one column")
        if self.cols > self.rows:
            raise ValidationError(f"columns ({self.cols}) may not exceed rows ({self.rows})")

    @property
    def n_sites(self) -> int:
        return self.cols * self.rows

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_sites


def spinless_index(lattice: LatticeSpec, row: int, col: int, spin: str) -> int:
    """Chain position of ``(row, col, spin)``; ``row`` from 0, ``col`` from 1."""
    if not 0 <= row < lattice.rows or not 1 <= col <= lattice.cols:
        raise ValidationError(f"site (row {row}, col {col}) outside the lattice")
    if spin not in ("up", "down"):
        raise ValidationError(f"spin must be 'up' or 'down', got {spin!r}")
    site = row * lattice.cols + col
    return 2 * site - 1 if spin == "up" else 2 * site


def jw_hopping_string(j: int, k: int, n_qubits: int) -> tuple[PauliString, PauliString]:
    """``-1/2 X_j Z...Z X_k`` and ``-1/2 Y_j Z...Z Y_k`` summing to ``b_j^+ b_k + h.c.``."""
    if not 1 <= j < k <= n_qubits:
        raise ValidationError(f"need 1 <= j < k <= {n_qubits}, got j={j}, k={k}")
    if (k - j) % 2:
        raise ValidationError("Jordan-Wigner strings here require an even separation k - j")
    strings = []
    for axis in "XY":
        sites = {q - 1: "Z" for q in range(j + 1, k)}
        sites[j - 1] = axis
        sites[k - 1] = axis
        strings.append(PauliString.from_sites(n_qubits, sites, -0.5))
    return strings[0], strings[1]


def horizontal_hops(lattice: LatticeSpec) -> list[tuple[int, int]]:
    ell = lattice.cols
    hops = []
    for k in range(lattice.rows):
        for j in range(1, ell):
            hops.append((2 * k * ell + 2 * j - 1, 2 * k * ell + 2 * j + 1))
            hops.append((2 * k * ell + 2 * j, 2 * k * ell + 2 * j + 2))
    return hops


def vertical_hops(lattice: LatticeSpec) -> list[tuple[int, int]]:
    ell = lattice.cols
    return [
        (2 * k * ell + j, 2 * (k + 1) * ell + j)
        for k in range(lattice.rows - 1)
        for j in range(1, 2 * ell + 1)
    ]


def hopping_terms(lattice: LatticeSpec) -> PauliSum:
    out = PauliSum(lattice.n_qubits)
    for j, k in horizontal_hops(lattice) + vertical_hops(lattice):
        for s in jw_hopping_string(j, k, lattice.n_qubits):
            out.add(s.scaled(lattice.hopping))
    return out


def coulomb_terms(lattice: LatticeSpec) -> PauliSum:
    """``(B/4) sum_j (Z_{2j-1} + I)(Z_{2j} + I)``."""
    n = lattice.n_qubits
    out = PauliSum(n)
    weight = lattice.onsite / 4
    for site in range(1, lattice.n_sites + 1):
        up, down = 2 * site - 2, 2 * site - 1
        out.add(PauliString.from_sites(n, {up: "Z", down: "Z"}, weight))
        out.add(PauliString.from_sites(n, {up: "Z"}, weight))
        out.add(PauliString.from_sites(n, {down: "Z"}, weight))
        out.add(PauliString("I" * n, weight))
    return out


def hubbard_pauli_sum(lattice: LatticeSpec) -> PauliSum:
    out = hopping_terms(lattice)
    if lattice.include_coulomb:
        for s in coulomb_terms(lattice).strings():
            out.add(s)
    return out.simplified()


def hubbard_spin_hamiltonian(lattice: LatticeSpec) -> HermitianOperator:
    if lattice.n_qubits > MAX_DENSE_QUBITS:
        raise ResourceLimitError(f"{lattice.n_qubits} qubits exceeds the dense limit")
    return HermitianOperator(hubbard_pauli_sum(lattice).dense())


# --------------------------------------------------------------------------
# Analog blocks


Term = tuple[tuple[int, str], ...]


@dataclass(frozen=True)
class AnalogBlock:
    """``prod_t exp(-i angle P_t)`` over commuting, qubit-disjoint Pauli terms.

    ``terms`` lists each ``P_t`` as ``((site, axis), ...)`` with 1-based sites.
    ``dagger`` flips the sign of ``angle``.
    """

    kind: str
    terms: tuple[Term, ...]
    angle: float
    dagger: bool = False

    def __post_init__(self) -> None:
        used = [site for term in self.terms for site, _ in term]
        if len(used) != len(set(used)):
            raise ValidationError(f"{self.kind} block acts twice on one qubit: {self.terms}")
        if self.kind in (TYPE_A, TYPE_B, COULOMB_A):
            for term in self.terms:
                sites = sorted(site for site, _ in term)
                if len(sites) != 2 or sites[1] != sites[0] + 1:
                    raise ValidationError(f"two-local term {term} is not a chain link")

    @property
    def effective_angle(self) -> float:
        return -self.angle if self.dagger else self.angle

    def inverse(self) -> AnalogBlock:
        return AnalogBlock(self.kind, self.terms, self.angle, not self.dagger)

    def pauli_terms(self, n_qubits: int) -> list[PauliString]:
        return [
            PauliString.from_sites(n_qubits, {site - 1: axis for site, axis in term})
            for term in self.terms
        ]


def _link_block(kind: str, axes: tuple[str, str], links: Iterable[int], angle: float,
                dagger: bool = False) -> AnalogBlock:
    terms = tuple(((j, axes[0]), (j + 1, axes[1])) for j in links)
    return AnalogBlock(kind, terms, angle, dagger)


def _dressing(axis: str, links: Iterable[int], dagger: bool = False) -> AnalogBlock:
    return _link_block(TYPE_B, (axis, axis), links, QUARTER_TURN, dagger)


@dataclass(frozen=True)
class Interaction:
    """A core conjugated by ``V = dressing[0] dressing[1] ... dressing[-1]``."""

    core: AnalogBlock
    dressing: tuple[AnalogBlock, ...]

    def blocks(self) -> list[AnalogBlock]:
        """Blocks in application order: ``V^dagger`` first, then the core, then ``V``."""
        undo = [d.inverse() for d in self.dressing]
        return undo + [self.core] + list(reversed(self.dressing))

    def generator(self, n_qubits: int) -> PauliSum:
        """``V C V^dagger`` with ``C`` the unit-weight sum of the core's terms."""
        out = PauliSum(n_qubits)
        for p in self.core.pauli_terms(n_qubits):
            current = [p]
            for d in reversed(self.dressing):
                current = [q for c in current for q in conjugate(c, d, n_qubits)]
            out.extend(current)
        return out.simplified()


def conjugate(p: PauliString, block: AnalogBlock, n_qubits: int) -> list[PauliString]:
    """``U p U^dagger`` for ``U = prod exp(-i a R)``; exact for quarter turns."""
    current = [p]
    a = block.effective_angle
    for r in block.pauli_terms(n_qubits):
        nxt = []
        for q in current:
            if q.commutes_with(r):
                nxt.append(q)
                continue
            # exp(-i a R) Q exp(i a R) = cos(2a) Q - i sin(2a) R Q for anticommuting R, Q
            if abs(abs(a) - QUARTER_TURN) < 1e-15:
                nxt.append((r * q).scaled(-1j * math.copysign(1.0, a)))
            else:
                nxt.append(q.scaled(math.cos(2 * a)))
                nxt.append((r * q).scaled(-1j * math.sin(2 * a)))
        current = nxt
    return current


# --------------------------------------------------------------------------
# Compilation


def _horizontal_family_sizes(ell: int) -> tuple[int, int]:
    m1 = (2 * ell - 1 - (-1) ** (ell + 1)) // 4
    m2 = (2 * ell - 3 + (-1) ** (ell + 1)) // 4
    return m1, m2


# Time order of the horizontal families, labelled (n, i).
HORIZONTAL_FAMILY_ORDER = ((2, 5), (2, 4), (1, 3), (1, 2))


def horizontal_interactions(lattice: LatticeSpec, theta: float) -> list[Interaction]:
    ell = lattice.cols
    if ell < 2:
        return []
    sizes = dict(zip((1, 2), _horizontal_family_sizes(ell)))
    out = []
    for family, offset in HORIZONTAL_FAMILY_ORDER:
        count = sizes[family]
        if count == 0:
            continue
        cores = []
        for k in range(lattice.rows):
            base = 2 * k * ell
            for j in range(1, count + 1):
                cores.append(base + 4 * j - 5 + offset)
        dress_links = [c + 1 for c in cores]
        # X_c Y_{c+1} dressed by U^x-dagger, then Y_c X_{c+1} dressed by U^y.
        out.append(Interaction(
            _link_block(TYPE_A, ("X", "Y"), cores, theta),
            (_dressing("X", dress_links, dagger=True),),
        ))
        out.append(Interaction(
            _link_block(TYPE_A, ("Y", "X"), cores, theta),
            (_dressing("Y", dress_links),),
        ))
    return out


def vertical_groups(lattice: LatticeSpec) -> list[list[int]]:
    """Vertical hops (by lower chain position) grouped by residue mod ``2*cols + 1``."""
    ell = lattice.cols
    period = 2 * ell + 1
    lows = [j for j, _ in vertical_hops(lattice)]
    groups = []
    for residue in range(1, period + 1):
        members = [m for m in lows if m % period == residue % period]
        if members:
            groups.append(members)
    return groups


def _vertical_interaction(ell: int, lows: Sequence[int], core_axes: tuple[str, str],
                          theta: float) -> Interaction:
    cores = [m + ell - 1 for m in lows]
    if core_axes == ("Y", "X"):
        single = _dressing("Y", [c + 1 for c in cores])
        inner, outer = "X", "Y"
    else:
        single = _dressing("X", [c + 1 for c in cores], dagger=True)
        inner, outer = "Y", "X"
    layers = []
    for i in range(1, ell):
        axis = inner if (ell - 1 - i) % 2 == 0 else outer
        links = []
        for m in lows:
            links.extend((m + i - 1, m + 2 * ell - i))
        layers.append(_dressing(axis, links))
    return Interaction(_link_block(TYPE_A, core_axes, cores, theta), tuple(layers) + (single,))


def vertical_interactions(lattice: LatticeSpec, theta: float) -> list[Interaction]:
    out = []
    for lows in vertical_groups(lattice):
        out.append(_vertical_interaction(lattice.cols, lows, ("X", "Y"), theta))
        out.append(_vertical_interaction(lattice.cols, lows, ("Y", "X"), theta))
    return out


def compile_horizontal(lattice: LatticeSpec, theta: float) -> list[AnalogBlock]:
    return [b for inter in horizontal_interactions(lattice, theta) for b in inter.blocks()]


def compile_vertical(lattice: LatticeSpec, theta: float) -> list[AnalogBlock]:
    return [b for inter in vertical_interactions(lattice, theta) for b in inter.blocks()]


def compile_coulomb(lattice: LatticeSpec, theta_b: float) -> list[AnalogBlock]:
    """On-site step ``exp(-i theta_b Z Z) exp(-i theta_b (Z + Z))`` per site.

    The ``ZZ`` factor runs as an ``XX`` analog block between local y-rotations,
    using ``exp(-i pi/4 Y) X exp(i pi/4 Y) = -Z``.  The identity part of the
    on-site term is a global phase and is dropped.
    """
    if lattice.onsite == 0 or theta_b == 0:
        return []
    n = lattice.n_qubits
    everyone = tuple(((q, "Y"),) for q in range(1, n + 1))
    pairs = [2 * s - 1 for s in range(1, lattice.n_sites + 1)]
    return [
        AnalogBlock(LOCAL, everyone, QUARTER_TURN, dagger=True),
        _link_block(COULOMB_A, ("X", "X"), pairs, theta_b),
        AnalogBlock(LOCAL, everyone, QUARTER_TURN),
        AnalogBlock(LOCAL, tuple(((q, "Z"),) for q in range(1, n + 1)), theta_b),
    ]


def reconstruct_hopping(lattice: LatticeSpec) -> PauliSum:
    """Hopping Hamiltonian rebuilt as ``(A/2) sum V C V^dagger`` over compiled interactions."""
    out = PauliSum(lattice.n_qubits)
    inters = horizontal_interactions(lattice, 0.0) + vertical_interactions(lattice, 0.0)
    for inter in inters:
        out.extend(s.scaled(lattice.hopping / 2) for s in inter.generator(lattice.n_qubits).strings())
    return out.simplified()


@dataclass(frozen=True)
class BlockCounts:
    total: int
    type_a: int
    type_b: int


def block_count(ell: int) -> BlockCounts:
    """Per-step block counts of the hopping schedule as stated in closed form."""
    if ell < 2:
        raise ValidationError("block counts are defined for at least two columns")
    if ell == 2:
        return BlockCounts(62, 14, 48)
    type_a = 4 * ell + 10
    type_b = 8 * ell**2 + 4 * ell + 16
    total = 2 * (2 * ell + 1) ** 2 + 24
    assert total == type_a + type_b
    return BlockCounts(total, type_a, type_b)


@dataclass(frozen=True)
class Schedule:
    lattice: LatticeSpec
    steps: int
    at: float
    step_blocks: tuple[AnalogBlock, ...]

    def blocks(self) -> Iterable[tuple[int, int, AnalogBlock]]:
        """``(step, index, block)`` with 1-based step and index."""
        for s in range(1, self.steps + 1):
            for i, b in enumerate(self.step_blocks, start=1):
                yield s, i, b

    def emitted_counts(self) -> BlockCounts:
        type_a = sum(1 for b in self.step_blocks if b.kind in (TYPE_A, COULOMB_A))
        type_b = sum(1 for b in self.step_blocks if b.kind == TYPE_B)
        return BlockCounts(len(self.step_blocks), type_a, type_b)

    @cached_property
    def _gates(self) -> list[tuple[int, np.ndarray]]:
        """``(first qubit, local unitary)`` for every term, in application order."""
        gates = []
        for block in self.step_blocks:
            a = block.effective_angle
            for term in block.terms:
                term = sorted(term)
                local = PauliString("".join(axis for _, axis in term)).dense()
                unitary = math.cos(a) * np.eye(local.shape[0]) - 1j * math.sin(a) * local
                gates.append((term[0][0] - 1, unitary))
        return gates

    def apply_step(self, states: np.ndarray) -> np.ndarray:
        """One Trotter step on a state vector or on the columns of a matrix."""
        shape = states.shape
        for first, unitary in self._gates:
            states = np.matmul(unitary, states.reshape(1 << first, unitary.shape[0], -1))
        return states.reshape(shape)


def compile_schedule(lattice: LatticeSpec, at: float, steps: int) -> Schedule:
    """First-order Trotter schedule for total evolution ``A t = at`` in ``steps`` steps."""
    if steps < 1:
        raise ValidationError("need at least one Trotter step")
    if lattice.cols < 2:
        raise ValidationError("the hopping compiler needs at least two columns")
    theta = at / (2 * steps)
    blocks = compile_horizontal(lattice, theta) + compile_vertical(lattice, theta)
    if lattice.include_coulomb:
        t = at / lattice.hopping
        blocks += compile_coulomb(lattice, lattice.onsite * t / (4 * steps))
    return Schedule(lattice, steps, at, tuple(blocks))


def simulate_schedule(schedule: Schedule, psi0: np.ndarray) -> np.ndarray:
    n = schedule.lattice.n_qubits
    if n > MAX_DENSE_QUBITS:
        raise ResourceLimitError(f"{n} qubits exceeds the simulation limit")
    psi = np.asarray(psi0, dtype=complex)
    if psi.shape[0] != 1 << n:
        raise ValidationError("state dimension does not match the lattice")
    for _ in range(schedule.steps):
        psi = schedule.apply_step(psi)
    return psi


def number_sectors(n_qubits: int) -> list[np.ndarray]:
    """Basis indices grouped by particle number ``sum (Z+1)/2`` (= count of zero bits)."""
    idx = np.arange(1 << n_qubits)
    particles = n_qubits - popcount(idx)
    return [idx[particles == k] for k in range(n_qubits + 1)]


def sector_step_unitaries(schedule: Schedule, leak_tol: float = 1e-10) -> list[np.ndarray]:
    """One Trotter step restricted to each particle-number sector.

    Built by pushing sector basis vectors through every block; raises if any
    amplitude leaks out of the sector, which would signal a compilation error.
    """
    n = schedule.lattice.n_qubits
    if n > MAX_DENSE_QUBITS:
        raise ResourceLimitError(f"{n} qubits exceeds the simulation limit")
    dim = 1 << n
    out = []
    for idx in number_sectors(n):
        cols = np.zeros((dim, idx.size), dtype=complex)
        cols[idx, np.arange(idx.size)] = 1.0
        cols = schedule.apply_step(cols)
        block = cols[idx]
        leak = np.linalg.norm(cols) ** 2 - np.linalg.norm(block) ** 2
        if leak > leak_tol * max(1, idx.size):
            raise ValidationError(f"Trotter step leaks {leak:.2e} out of a number sector")
        out.append(block)
    return out


# --------------------------------------------------------------------------
# Timing and hardware export


@dataclass(frozen=True)
class TimingReport:
    tau_a_ns: float
    tau_b_ns: float
    tau_sim_us: float


def timing(ell: int, at: float, steps: int, ag1: float) -> TimingReport:
    """Block durations and the closed-form total for ``ag1 = A*g1`` in rad/ns."""
    if ag1 <= 0:
        raise ValidationError("A*g1 must be positive")
    if steps < 1:
        raise ValidationError("need at least one Trotter step")
    counts = block_count(ell)
    tau_a = at / (ag1 * steps)
    tau_b = math.pi / (2 * ag1)
    tau_sim = counts.type_a * tau_a + counts.type_b * tau_b
    return TimingReport(tau_a, tau_b, tau_sim / 1000.0)


def default_chain(n_qubits: int) -> ChainSpec:
    """Hardware model used for exports: 9 / 1 GHz qubits, g0/2pi = 0.05 GHz, A*g1/2pi = 0.08 GHz."""
    two_pi = 2 * math.pi
    amplitude = 0.1
    return ChainSpec.uniform(n_qubits, two_pi * 9, two_pi * 1, two_pi * 0.05,
                             two_pi * 0.08 / amplitude)


def drive_settings_for(block: AnalogBlock, chain: ChainSpec,
                       amplitude: float = 0.1) -> list[DriveSettings]:
    """Per-link drives that realize ``block`` on the SQUID chain."""
    if block.kind == LOCAL:
        raise ValidationError("local rotations are digital steps, not SQUID drives")
    sign = 1 if block.effective_angle >= 0 else -1
    out = []
    for term in block.terms:
        (j, a), (k, b) = sorted(term)
        if k != j + 1:
            raise ValidationError(f"term {term} is not on a chain link")
        phases = phase_lookup(TwoLocalTarget(sign, (a, b), j))
        out.append(DriveSettings.resonant(chain, j, amplitude, phases))
    return out


def _format_angle(angle: float) -> str:
    quarters = angle / QUARTER_TURN
    if abs(quarters - round(quarters)) < 1e-12:
        return format_pi_multiple(Fraction(round(quarters), 4))
    return f"{angle / math.pi:.12g}"


def export_schedule(schedule: Schedule, chain: ChainSpec | None = None) -> str:
    chain = chain or default_chain(schedule.lattice.n_qubits)
    lines = ["step,index,kind,angle_over_pi,pairs,dagger,phases"]
    for step, index, block in schedule.blocks():
        pairs = ";".join("-".join(f"{s}:{a}" for s, a in term) for term in block.terms)
        phases = ""
        if block.kind != LOCAL:
            phases = ";".join(
                f"{d.link}:{format_pi_multiple(d.phase1)}:{format_pi_multiple(d.phase2)}"
                for d in drive_settings_for(block, chain)
            )
        lines.append(
            f"{step},{index},{block.kind},{_format_angle(block.angle)},{pairs},"
            f"{int(block.dagger)},{phases}"
        )
    return "\n".join(lines) + "\n"
