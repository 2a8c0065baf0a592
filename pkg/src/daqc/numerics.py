"""Pauli algebra, dense operators and state propagation.

Conventions used throughout the package:

* qubit 0 is the most significant bit of a basis index, so ``|q0 q1 ... q_{n-1}>``
  maps to the integer ``q0 * 2**(n-1) + ... + q_{n-1}``;
* ``|0>`` is the ``+1`` eigenstate of ``Z``;
* times are in ns and angular frequencies in rad/ns, with hbar = 1.

Qubit indices in this module are 0-based.  The spin and Hubbard modules use
1-based chain positions and convert at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from daqc.errors import ResourceLimitError, StepSizeError, ValidationError

MAX_DENSE_QUBITS = 14
HERMITICITY_TOL = 1e-12
NORM_DRIFT_TOL = 1e-6
STEPS_PER_PERIOD = 20

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Single-qubit products: (a, b) -> (phase, c) with a @ b = phase * c.
_PRODUCT_TABLE: dict[tuple[str, str], tuple[complex, str]] = {}
for _a in "IXYZ":
    _PRODUCT_TABLE[("I", _a)] = (1, _a)
    _PRODUCT_TABLE[(_a, "I")] = (1, _a)
    _PRODUCT_TABLE[(_a, _a)] = (1, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _PRODUCT_TABLE[(_a, _b)] = (1j, _c)
    _PRODUCT_TABLE[(_b, _a)] = (-1j, _c)


def check_qubit_count(n_qubits: int) -> None:
    if n_qubits < 1:
        raise ValidationError(f"need at least one qubit, got {n_qubits}")
    if n_qubits > MAX_DENSE_QUBITS:
        raise ResourceLimitError(
            f"dense realization limited to {MAX_DENSE_QUBITS} qubits, got {n_qubits}"
        )


@dataclass(frozen=True)
class PauliString:
    """A coefficient times a tensor product of single-qubit Paulis.

    ``letters[q]`` is the Pauli acting on qubit ``q``.
    """

    letters: str
    coefficient: complex = 1.0

    def __post_init__(self) -> None:
        if not self.letters or any(ch not in "IXYZ" for ch in self.letters):
            raise ValidationError(f"invalid Pauli letters {self.letters!r}")

    @classmethod
    def from_sites(
        cls, n_qubits: int, sites: dict[int, str], coefficient: complex = 1.0
    ) -> PauliString:
        """Build from a ``{qubit: letter}`` map with identities elsewhere."""
        chars = ["I"] * n_qubits
        for q, letter in sites.items():
            if not 0 <= q < n_qubits:
                raise ValidationError(f"qubit {q} out of range for {n_qubits} qubits")
            if letter not in "IXYZ":
                raise ValidationError(f"invalid Pauli letter {letter!r}")
            chars[q] = letter
        return cls("".join(chars), coefficient)

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(q for q, ch in enumerate(self.letters) if ch != "I")

    def scaled(self, factor: complex) -> PauliString:
        return PauliString(self.letters, self.coefficient * factor)

    def __mul__(self, other: PauliString) -> PauliString:
        if self.n_qubits != other.n_qubits:
            raise ValidationError("Pauli strings act on different qubit counts")
        phase: complex = 1
        chars = []
        for a, b in zip(self.letters, other.letters):
            p, c = _PRODUCT_TABLE[(a, b)]
            phase *= p
            chars.append(c)
        return PauliString("".join(chars), self.coefficient * other.coefficient * phase)

    def commutes_with(self, other: PauliString) -> bool:
        clashes = sum(
            1
            for a, b in zip(self.letters, other.letters)
            if a != "I" and b != "I" and a != b
        )
        return clashes % 2 == 0

    def dense(self) -> np.ndarray:
        check_qubit_count(self.n_qubits)
        perm, phase = pauli_action(self.letters)
        dim = perm.size
        out = np.zeros((dim, dim), dtype=complex)
        out[np.arange(dim), perm] = phase
        return self.coefficient * out

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """Return ``P @ psi``; ``psi`` may carry extra trailing batch axes."""
        perm, phase = pauli_action(self.letters)
        return self.coefficient * _apply_action(perm, phase, psi)


def _apply_action(perm: np.ndarray, phase: np.ndarray, psi: np.ndarray) -> np.ndarray:
    if psi.ndim == 1:
        return phase * psi[perm]
    return phase.reshape((-1,) + (1,) * (psi.ndim - 1)) * psi[perm]


@lru_cache(maxsize=4096)
def pauli_action(letters: str) -> tuple[np.ndarray, np.ndarray]:
    """Permutation and phases realizing a unit Pauli string.

    ``(P psi)[y] = phase[y] * psi[perm[y]]``.
    """
    n = len(letters)
    check_qubit_count(n)
    flip = 0
    zy_mask = 0
    n_y = 0
    for q, ch in enumerate(letters):
        bit = 1 << (n - 1 - q)
        if ch in "XY":
            flip |= bit
        if ch in "YZ":
            zy_mask |= bit
        if ch == "Y":
            n_y += 1
    idx = np.arange(1 << n, dtype=np.int64)
    source = idx ^ flip
    parity = _popcount(source & zy_mask) & 1
    phase = (1j**n_y) * (1 - 2 * parity).astype(complex)
    perm = source
    perm.setflags(write=False)
    phase.setflags(write=False)
    return perm, phase


def _popcount(values: np.ndarray) -> np.ndarray:
    values = values.astype(np.uint64)
    count = np.zeros(values.shape, dtype=np.int64)
    while np.any(values):
        count += (values & np.uint64(1)).astype(np.int64)
        values = values >> np.uint64(1)
    return count


def popcount(values: np.ndarray | int) -> np.ndarray:
    return _popcount(np.asarray(values, dtype=np.int64))


def pauli_dense(letters: str) -> np.ndarray:
    """Dense matrix of a unit Pauli string."""
    return PauliString(letters).dense()


@dataclass
class PauliSum:
    """A linear combination of Pauli strings on a fixed number of qubits."""

    n_qubits: int
    terms: dict[str, complex] = field(default_factory=dict)

    def add(self, term: PauliString) -> None:
        if term.n_qubits != self.n_qubits:
            raise ValidationError("term acts on the wrong number of qubits")
        self.terms[term.letters] = self.terms.get(term.letters, 0) + term.coefficient

    def extend(self, terms: Iterable[PauliString]) -> None:
        for term in terms:
            self.add(term)

    def simplified(self, tol: float = 1e-14) -> PauliSum:
        kept = {k: v for k, v in self.terms.items() if abs(v) > tol}
        return PauliSum(self.n_qubits, kept)

    def strings(self) -> list[PauliString]:
        return [PauliString(k, v) for k, v in sorted(self.terms.items())]

    def dense(self) -> np.ndarray:
        check_qubit_count(self.n_qubits)
        dim = 1 << self.n_qubits
        out = np.zeros((dim, dim), dtype=complex)
        rows = np.arange(dim)
        for letters, coeff in self.terms.items():
            perm, phase = pauli_action(letters)
            out[rows, perm] += coeff * phase
        return out

    def apply(self, psi: np.ndarray) -> np.ndarray:
        out = np.zeros_like(psi, dtype=complex)
        for letters, coeff in self.terms.items():
            perm, phase = pauli_action(letters)
            out += coeff * _apply_action(perm, phase, psi)
        return out

    def sparse(self):
        """CSR realization; useful beyond a few qubits."""
        from scipy import sparse

        dim = 1 << self.n_qubits
        rows = np.arange(dim)
        mats = []
        for letters, coeff in self.terms.items():
            perm, phase = pauli_action(letters)
            mats.append(sparse.csr_matrix((coeff * phase, (rows, perm)), shape=(dim, dim)))
        if not mats:
            return sparse.csr_matrix((dim, dim), dtype=complex)
        total = mats[0]
        for m in mats[1:]:
            total = total + m
        return total.tocsr()

    def is_close(self, other: PauliSum, tol: float = 1e-12) -> bool:
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.terms.get(k, 0) - other.terms.get(k, 0)) <= tol for k in keys)


@dataclass(frozen=True)
class HermitianOperator:
    """A dense Hermitian matrix on ``n_qubits`` qubits."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"operator must be square, got shape {m.shape}")
        dim = m.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise ValidationError(f"dimension {dim} is not a power of two")
        scale = max(1.0, float(np.max(np.abs(m))))
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL * scale:
            raise ValidationError("operator is not Hermitian")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1


def check_state(psi: np.ndarray, dim: int | None = None, tol: float = 1e-9) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValidationError("state must be a 1-d amplitude vector")
    if dim is not None and psi.size != dim:
        raise ValidationError(f"state has dimension {psi.size}, expected {dim}")
    if abs(np.linalg.norm(psi) - 1.0) > tol:
        raise ValidationError("state is not normalized")
    return psi


def basis_state(n_qubits: int, bits: str | Sequence[int]) -> np.ndarray:
    """Computational basis state from a bit string such as ``"010"``."""
    bits = [int(b) for b in bits]
    if len(bits) != n_qubits or any(b not in (0, 1) for b in bits):
        raise ValidationError(f"bad bit pattern {bits!r} for {n_qubits} qubits")
    index = int("".join(map(str, bits)), 2)
    psi = np.zeros(1 << n_qubits, dtype=complex)
    psi[index] = 1.0
    return psi


def evolve_static(h: HermitianOperator | np.ndarray, duration: float, psi: np.ndarray) -> np.ndarray:
    """Apply ``exp(-i h duration)`` via Hermitian eigendecomposition."""
    op = h if isinstance(h, HermitianOperator) else HermitianOperator(h)
    psi = check_state(psi, op.dim)
    energies, vecs = np.linalg.eigh(op.matrix)
    return vecs @ (np.exp(-1j * energies * duration) * (vecs.conj().T @ psi))


def static_unitary(h: HermitianOperator | np.ndarray, duration: float) -> np.ndarray:
    op = h if isinstance(h, HermitianOperator) else HermitianOperator(h)
    energies, vecs = np.linalg.eigh(op.matrix)
    return (vecs * np.exp(-1j * energies * duration)) @ vecs.conj().T


class BlockDiagonalPropagator:
    """Exact propagator of a Hermitian operator that is block diagonal.

    ``blocks`` pairs basis-index arrays with the Hermitian matrix restricted to
    them.  The blocks must partition the full basis.
    """

    def __init__(self, dim: int, blocks: Sequence[tuple[np.ndarray, np.ndarray]]):
        covered = np.concatenate([np.asarray(idx) for idx, _ in blocks])
        if covered.size != dim or np.unique(covered).size != dim:
            raise ValidationError("blocks do not partition the basis")
        self.dim = dim
        self._eig = []
        for idx, block in blocks:
            block = np.asarray(block, dtype=complex)
            scale = max(1.0, float(np.max(np.abs(block))))
            if np.max(np.abs(block - block.conj().T)) > HERMITICITY_TOL * scale:
                raise ValidationError("block is not Hermitian")
            energies, vecs = np.linalg.eigh(block)
            self._eig.append((np.asarray(idx), energies, vecs))

    def evolve(self, duration: float, psi: np.ndarray) -> np.ndarray:
        out = np.zeros(self.dim, dtype=complex)
        for idx, energies, vecs in self._eig:
            part = psi[idx]
            out[idx] = vecs @ (np.exp(-1j * energies * duration) * (vecs.conj().T @ part))
        return out

    def evolve_batch(self, duration: float, states: np.ndarray) -> np.ndarray:
        """Evolve columns of ``states`` (shape ``(dim, m)``)."""
        out = np.zeros_like(states, dtype=complex)
        for idx, energies, vecs in self._eig:
            part = states[idx]
            phases = np.exp(-1j * energies * duration)[:, None]
            out[idx] = vecs @ (phases * (vecs.conj().T @ part))
        return out


@dataclass(frozen=True)
class HarmonicCoefficient:
    """``constant + sum_k amplitude_k * cos(frequency_k * t + phase_k)``."""

    constant: float = 0.0
    tones: tuple[tuple[float, float, float], ...] = ()

    def __call__(self, t: float) -> float:
        value = self.constant
        for amplitude, frequency, phase in self.tones:
            value += amplitude * math.cos(frequency * t + phase)
        return value

    @property
    def max_frequency(self) -> float:
        return max((abs(f) for a, f, _ in self.tones if a != 0), default=0.0)


@dataclass
class TimeDependentHamiltonian:
    """``H(t) = sum_k c_k(t) P_k`` with real harmonic coefficients."""

    n_qubits: int
    terms: list[tuple[PauliString, HarmonicCoefficient]] = field(default_factory=list)

    def add(self, term: PauliString, coefficient: HarmonicCoefficient) -> None:
        if term.n_qubits != self.n_qubits:
            raise ValidationError("term acts on the wrong number of qubits")
        if abs(term.coefficient.imag) > 0:
            raise ValidationError("time-dependent terms need real prefactors")
        self.terms.append((term, coefficient))

    def max_frequency(self) -> float:
        """Largest drive frequency or qubit splitting present.

        A constant single-qubit ``Z`` term ``c Z`` contributes the splitting ``2|c|``.
        """
        fastest = 0.0
        for term, coeff in self.terms:
            fastest = max(fastest, coeff.max_frequency)
            if len(term.support) == 1 and term.letters[term.support[0]] == "Z":
                fastest = max(fastest, 2 * abs(coeff.constant * term.coefficient.real))
        return fastest

    def max_step(self) -> float:
        fastest = self.max_frequency()
        if fastest == 0:
            return math.inf
        return (2 * math.pi / fastest) / STEPS_PER_PERIOD

    def _compiled(self):
        check_qubit_count(self.n_qubits)
        dim = 1 << self.n_qubits
        static = np.zeros((dim, dim), dtype=complex)
        varying_mats = []
        varying_coeffs = []
        for term, coeff in self.terms:
            mat = term.dense()
            if coeff.tones:
                varying_mats.append(mat)
                varying_coeffs.append(coeff)
            static += coeff.constant * mat
        return static, varying_mats, varying_coeffs

    def matrix_at(self, t: float) -> np.ndarray:
        static, mats, coeffs = self._compiled()
        out = static.copy()
        for mat, coeff in zip(mats, coeffs):
            out += (coeff(t) - coeff.constant) * mat
        return out


def evolve_harmonic(
    h: TimeDependentHamiltonian,
    t0: float,
    t1: float,
    psi: np.ndarray,
    dt: float,
) -> np.ndarray:
    """Integrate ``i d psi/dt = H(t) psi`` with fixed-step classical RK4.

    ``dt`` must not exceed one twentieth of the shortest period in ``h``.  The
    step actually used divides ``t1 - t0`` evenly and is at most ``dt``.  After
    every step the state is renormalized when its norm drifted by less than
    ``NORM_DRIFT_TOL``; a larger drift raises :class:`StepSizeError`.
    """
    if dt <= 0:
        raise StepSizeError("time step must be positive")
    ceiling = h.max_step()
    if dt > ceiling * (1 + 1e-12):
        raise StepSizeError(f"dt={dt:g} exceeds the stability ceiling {ceiling:g}")
    if t1 < t0:
        raise ValidationError("t1 must not precede t0")
    psi = check_state(psi, 1 << h.n_qubits).copy()
    span = t1 - t0
    if span == 0:
        return psi

    static, mats, coeffs = h._compiled()
    mats_arr = np.array(mats) if mats else None
    tones = [c.tones for c in coeffs]

    def rhs(t: float, state: np.ndarray) -> np.ndarray:
        hmat = static
        if tones:
            weights = np.array(
                [sum(a * math.cos(f * t + p) for a, f, p in tl) for tl in tones]
            )
            hmat = static + np.tensordot(weights, mats_arr, axes=1)
        return -1j * (hmat @ state)

    n_steps = max(1, math.ceil(span / dt - 1e-9))
    step = span / n_steps
    for i in range(n_steps):
        t = t0 + i * step
        k1 = rhs(t, psi)
        k2 = rhs(t + step / 2, psi + step / 2 * k1)
        k3 = rhs(t + step / 2, psi + step / 2 * k2)
        k4 = rhs(t + step, psi + step * k3)
        psi = psi + step / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) >= NORM_DRIFT_TOL:
            raise StepSizeError(
                f"norm drifted by {abs(norm - 1.0):.2e} in one step; reduce dt"
            )
        psi = psi / norm
    return psi


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """``|<a|b>|^2`` for normalized states, clipped to ``[0, 1]``."""
    if np.shape(a) != np.shape(b):
        raise ValidationError(f"state shapes differ: {np.shape(a)} vs {np.shape(b)}")
    return float(min(1.0, abs(np.vdot(a, b)) ** 2))


def rotation_apply(letters: str, angle: float, psi: np.ndarray) -> np.ndarray:
    """Apply ``exp(-i angle P) = cos(angle) I - i sin(angle) P`` for a unit Pauli ``P``."""
    perm, phase = pauli_action(letters)
    return math.cos(angle) * psi - 1j * math.sin(angle) * _apply_action(perm, phase, psi)


def two_local_unitary(
    axis_j: str, axis_k: str, angle: float, j: int, k: int, n_qubits: int
) -> np.ndarray:
    """Dense ``exp(-i angle sigma_j^a sigma_k^b)`` on ``n_qubits`` qubits (0-based sites)."""
    if j == k:
        raise ValidationError("two-local unitary needs distinct sites")
    for axis in (axis_j, axis_k):
        if axis not in "XYZ" or len(axis) != 1:
            raise ValidationError(f"invalid axis {axis!r}")
    term = PauliString.from_sites(n_qubits, {j: axis_j, k: axis_k})
    dim = 1 << n_qubits
    return math.cos(angle) * np.eye(dim) - 1j * math.sin(angle) * term.dense()
