"""Exact simulation of small qubit registers.

States are either normalized amplitude vectors (pure) or density matrices
(mixed). Qubit 0 is the most significant bit of the basis-state index, so
|q0 q1 ... q_{n-1}> lives at index q0*2^(n-1) + q1*2^(n-2) + ... + q_{n-1}.

Operations never mutate their input; they return fresh states. Global phase
is unphysical, so equality and fidelity are phase-insensitive. Randomness
always enters through an explicit seed or generator, never a global RNG.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .constants import HBAR_EV_S
from .errors import StateError

VECTOR_QUBIT_CAP = 12
MATRIX_QUBIT_CAP = 8

NORM_TOL = 1e-10

_SQ2 = 1.0 / np.sqrt(2.0)

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) * _SQ2
PHASE_S = np.array([[1, 0], [0, 1j]], dtype=complex)
PHASE_T = np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex)

CNOT_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
SWAP_MATRIX = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)
SQRT_SWAP_MATRIX = np.array(
    [
        [1, 0, 0, 0],
        [0, 0.5 + 0.5j, 0.5 - 0.5j, 0],
        [0, 0.5 - 0.5j, 0.5 + 0.5j, 0],
        [0, 0, 0, 1],
    ],
    dtype=complex,
)

# Singlet projector |s><s| with |s> = (|01> - |10>)/sqrt(2).
_SINGLET_KET = np.array([0, _SQ2, -_SQ2, 0], dtype=complex)
SINGLET_PROJECTOR = np.outer(_SINGLET_KET, _SINGLET_KET.conj())

_PAULI_BY_NAME = {"I": PAULI_I, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}


def as_rng(seed_or_rng) -> np.random.Generator:
    """Accept an int seed, a Generator, or a seed sequence list."""
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


@dataclass(frozen=True)
class QuantumState:
    """Register of n qubits, stored as a vector (pure) or matrix (mixed)."""

    data: np.ndarray
    n_qubits: int

    @property
    def is_vector(self) -> bool:
        return self.data.ndim == 1

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    @staticmethod
    def zero(n_qubits: int, cap: int = VECTOR_QUBIT_CAP) -> "QuantumState":
        """|0...0> on n qubits; n = 0 gives the trivial 1-dim register."""
        if n_qubits < 0 or n_qubits > cap:
            raise StateError(f"qubit count {n_qubits} outside [0, {cap}]")
        vec = np.zeros(2**n_qubits, dtype=complex)
        vec[0] = 1.0
        return QuantumState(vec, n_qubits)

    @staticmethod
    def from_vector(vec, cap: int = VECTOR_QUBIT_CAP) -> "QuantumState":
        vec = np.asarray(vec, dtype=complex).reshape(-1)
        n = int(round(np.log2(vec.size)))
        if 2**n != vec.size:
            raise StateError(f"vector length {vec.size} is not a power of two")
        if n > cap:
            raise StateError(f"{n} qubits exceeds vector cap {cap}")
        norm = float(np.sum(np.abs(vec) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise StateError(f"vector norm^2 = {norm}, not 1 within {NORM_TOL}")
        return QuantumState(vec.copy(), n)

    @staticmethod
    def from_matrix(mat, cap: int = MATRIX_QUBIT_CAP) -> "QuantumState":
        mat = np.asarray(mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise StateError("density matrix must be square")
        n = int(round(np.log2(mat.shape[0])))
        if 2**n != mat.shape[0]:
            raise StateError("matrix dimension is not a power of two")
        if n > cap:
            raise StateError(f"{n} qubits exceeds matrix cap {cap}")
        if np.max(np.abs(mat - mat.conj().T)) > NORM_TOL:
            raise StateError("density matrix is not Hermitian")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > NORM_TOL:
            raise StateError(f"trace = {tr}, not 1 within {NORM_TOL}")
        evals = np.linalg.eigvalsh(mat)
        if evals.min() < -NORM_TOL:
            raise StateError(f"negative eigenvalue {evals.min()}")
        return QuantumState(mat.copy(), n)

    def to_density(self, cap: int = MATRIX_QUBIT_CAP) -> "QuantumState":
        """Promote a pure state to its density matrix |psi><psi|."""
        if not self.is_vector:
            return self
        if self.n_qubits > cap:
            raise StateError(f"{self.n_qubits} qubits exceeds matrix cap {cap}")
        return QuantumState(np.outer(self.data, self.data.conj()), self.n_qubits)

    def append_zero_qubit(self, cap: int | None = None) -> "QuantumState":
        """Tensor a fresh |0> qubit on as the new last (least significant) qubit."""
        cap = cap if cap is not None else (
            VECTOR_QUBIT_CAP if self.is_vector else MATRIX_QUBIT_CAP
        )
        if self.n_qubits + 1 > cap:
            raise StateError(f"{self.n_qubits + 1} qubits exceeds cap {cap}")
        if self.is_vector:
            new = np.zeros(2 * self.data.size, dtype=complex)
            new[0::2] = self.data
            return QuantumState(new, self.n_qubits + 1)
        zero = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
        return QuantumState(np.kron(self.data, zero), self.n_qubits + 1)


@dataclass(frozen=True)
class Gate:
    """A named unitary acting on one or two qubits of a register.

    kinds: X Y Z H S T Rot CNOT SWAP SqrtSWAP ExchangeEvolve.
    Rot carries a Bloch axis (normalized on construction) and an angle;
    ExchangeEvolve carries the dimensionless pulse area theta = J*t/hbar.
    """

    kind: str
    targets: tuple[int, ...]
    axis: tuple[float, float, float] | None = None
    angle: float | None = None
    theta: float | None = None

    _ONE_QUBIT = ("X", "Y", "Z", "H", "S", "T", "Rot")
    _TWO_QUBIT = ("CNOT", "SWAP", "SqrtSWAP", "ExchangeEvolve")

    def __post_init__(self):
        if self.kind not in self._ONE_QUBIT and self.kind not in self._TWO_QUBIT:
            raise StateError(f"unknown gate kind {self.kind!r}")
        want = 1 if self.kind in self._ONE_QUBIT else 2
        if len(self.targets) != want:
            raise StateError(f"{self.kind} takes {want} target(s), got {self.targets}")
        if len(set(self.targets)) != len(self.targets):
            raise StateError(f"duplicate targets {self.targets}")
        if any(t < 0 for t in self.targets):
            raise StateError(f"negative target index in {self.targets}")
        if self.kind == "Rot":
            if self.axis is None or self.angle is None:
                raise StateError("Rot needs axis and angle")
            norm = float(np.linalg.norm(self.axis))
            if norm < 1e-12:
                raise StateError("Rot axis must be nonzero")
            object.__setattr__(self, "axis", tuple(float(a) / norm for a in self.axis))
        if self.kind == "ExchangeEvolve" and self.theta is None:
            raise StateError("ExchangeEvolve needs theta")

    @property
    def n_targets(self) -> int:
        return len(self.targets)

    def matrix(self) -> np.ndarray:
        """The gate unitary on its own targets (2x2 or 4x4)."""
        fixed = {
            "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z, "H": HADAMARD,
            "S": PHASE_S, "T": PHASE_T, "CNOT": CNOT_MATRIX,
            "SWAP": SWAP_MATRIX, "SqrtSWAP": SQRT_SWAP_MATRIX,
        }
        if self.kind in fixed:
            return fixed[self.kind].copy()
        if self.kind == "Rot":
            nx, ny, nz = self.axis
            half = 0.5 * self.angle
            ns = nx * PAULI_X + ny * PAULI_Y + nz * PAULI_Z
            return np.cos(half) * PAULI_I - 1j * np.sin(half) * ns
        return exchange_unitary(self.theta)


# Convenience constructors, matching how circuits read.
def gate_x(q: int) -> Gate:
    return Gate("X", (q,))


def gate_y(q: int) -> Gate:
    return Gate("Y", (q,))


def gate_z(q: int) -> Gate:
    return Gate("Z", (q,))


def gate_h(q: int) -> Gate:
    return Gate("H", (q,))


def gate_s(q: int) -> Gate:
    return Gate("S", (q,))


def gate_t(q: int) -> Gate:
    return Gate("T", (q,))


def gate_rot(q: int, axis, angle: float) -> Gate:
    return Gate("Rot", (q,), axis=tuple(axis), angle=float(angle))


def gate_cnot(control: int, target: int) -> Gate:
    return Gate("CNOT", (control, target))


def gate_swap(a: int, b: int) -> Gate:
    return Gate("SWAP", (a, b))


def gate_sqrt_swap(a: int, b: int) -> Gate:
    return Gate("SqrtSWAP", (a, b))


def gate_exchange(a: int, b: int, theta: float) -> Gate:
    return Gate("ExchangeEvolve", (a, b), theta=float(theta))


def pauli_gate(name: str, q: int) -> Gate:
    if name not in ("X", "Y", "Z"):
        raise StateError(f"not a Pauli name: {name!r}")
    return Gate(name, (q,))


def exchange_unitary(theta: float) -> np.ndarray:
    """exp(-i*theta*S1.S2) on two spins, with dimensionless spin-1/2 operators.

    S1.S2 = I/4 - P_singlet, so the triplet picks up exp(-i*theta/4) and the
    singlet exp(+3i*theta/4). theta = pi is SWAP and theta = pi/2 is
    sqrt(SWAP), both up to a global phase.
    """
    return np.exp(-0.25j * theta) * (
        np.eye(4, dtype=complex) + (np.exp(1j * theta) - 1.0) * SINGLET_PROJECTOR
    )


def _check_targets(state: QuantumState, targets: Sequence[int]) -> None:
    for t in targets:
        if not (0 <= t < state.n_qubits):
            raise StateError(
                f"target {t} out of range for {state.n_qubits}-qubit register"
            )
    if len(set(targets)) != len(targets):
        raise StateError(f"duplicate targets {tuple(targets)}")


def _apply_unitary_vec(vec: np.ndarray, u: np.ndarray, targets, n: int) -> np.ndarray:
    k = len(targets)
    psi = vec.reshape([2] * n)
    psi = np.moveaxis(psi, targets, range(k))
    psi = (u @ psi.reshape(2**k, -1)).reshape([2] * n)
    return np.moveaxis(psi, range(k), targets).reshape(-1)


def _apply_unitary_mat(mat: np.ndarray, u: np.ndarray, targets, n: int) -> np.ndarray:
    k = len(targets)
    rho = mat.reshape([2] * (2 * n))
    ket_axes = list(targets)
    bra_axes = [n + t for t in targets]
    rho = np.moveaxis(rho, ket_axes, range(k))
    rho = (u @ rho.reshape(2**k, -1)).reshape([2] * (2 * n))
    rho = np.moveaxis(rho, range(k), ket_axes)
    rho = np.moveaxis(rho, bra_axes, range(k))
    rho = (u.conj() @ rho.reshape(2**k, -1)).reshape([2] * (2 * n))
    rho = np.moveaxis(rho, range(k), bra_axes)
    return rho.reshape(2**n, 2**n)


def apply_gate(state: QuantumState, gate: Gate) -> QuantumState:
    """U|psi> for vectors, U rho U^dagger for matrices."""
    _check_targets(state, gate.targets)
    u = gate.matrix()
    if state.is_vector:
        return QuantumState(
            _apply_unitary_vec(state.data, u, list(gate.targets), state.n_qubits),
            state.n_qubits,
        )
    return QuantumState(
        _apply_unitary_mat(state.data, u, list(gate.targets), state.n_qubits),
        state.n_qubits,
    )


def apply_unitary(state: QuantumState, u: np.ndarray, targets) -> QuantumState:
    """Apply an explicit unitary matrix to the given target qubits."""
    targets = list(targets)
    _check_targets(state, targets)
    if u.shape != (2 ** len(targets), 2 ** len(targets)):
        raise StateError(f"unitary shape {u.shape} does not match targets {targets}")
    if state.is_vector:
        return QuantumState(
            _apply_unitary_vec(state.data, u, targets, state.n_qubits), state.n_qubits
        )
    return QuantumState(
        _apply_unitary_mat(state.data, u, targets, state.n_qubits), state.n_qubits
    )


def exchange_evolution(
    state: QuantumState, pair: tuple[int, int], J: float, t: float
) -> QuantumState:
    """Evolve a pair under the isotropic exchange Hamiltonian H = J*S1.S2.

    J is in eV, t in seconds; the accumulated pulse area is theta = J*t/hbar.
    """
    if J < 0:
        raise StateError(f"negative exchange coupling J = {J}")
    if t < 0:
        raise StateError(f"negative duration t = {t}")
    theta = J * t / HBAR_EV_S
    return apply_gate(state, gate_exchange(pair[0], pair[1], theta))


def qubit_probabilities(state: QuantumState, qubit: int) -> np.ndarray:
    """Marginal Born probabilities (p0, p1) of one qubit."""
    _check_targets(state, [qubit])
    n = state.n_qubits
    if state.is_vector:
        psi = np.abs(state.data.reshape([2] * n)) ** 2
        other = tuple(i for i in range(n) if i != qubit)
        return psi.sum(axis=other)
    rho = state.data.reshape([2] * (2 * n))
    keep = [qubit, n + qubit]
    order = keep + [i for i in range(2 * n) if i not in keep]
    rho = np.transpose(rho, order).reshape(2, 2, -1)
    reduced = np.einsum("ijkk->ij", rho.reshape(2, 2, 2 ** (n - 1), 2 ** (n - 1)))
    return np.real(np.diag(reduced))


def project(
    state: QuantumState, qubit: int, outcome: int, basis: str = "Z"
) -> tuple[float, QuantumState]:
    """Project one qubit onto a basis outcome; returns (probability, state).

    Raises if the branch has (numerically) zero weight.
    """
    if basis not in ("Z", "X"):
        raise StateError(f"unsupported basis {basis!r}")
    if outcome not in (0, 1):
        raise StateError(f"outcome must be 0 or 1, got {outcome}")
    work = state
    if basis == "X":
        work = apply_gate(work, gate_h(qubit))
    probs = qubit_probabilities(work, qubit)
    p = float(probs[outcome])
    if p < 1e-12:
        raise StateError(f"branch ({basis}, {outcome}) has probability {p}")
    n = work.n_qubits
    if work.is_vector:
        psi = work.data.reshape([2] * n).copy()
        idx = [slice(None)] * n
        idx[qubit] = 1 - outcome
        psi[tuple(idx)] = 0.0
        out = QuantumState(psi.reshape(-1) / np.sqrt(p), n)
    else:
        rho = work.data.reshape([2] * (2 * n)).copy()
        for ax in (qubit, n + qubit):
            idx = [slice(None)] * (2 * n)
            idx[ax] = 1 - outcome
            rho[tuple(idx)] = 0.0
        out = QuantumState(rho.reshape(2**n, 2**n) / p, n)
    if basis == "X":
        out = apply_gate(out, gate_h(qubit))
    return p, out


def measure(
    state: QuantumState, qubit: int, basis: str = "Z", rng_seed=0
) -> tuple[int, QuantumState]:
    """Sample one qubit with Born probabilities; deterministic given the seed."""
    rng = as_rng(rng_seed)
    work = apply_gate(state, gate_h(qubit)) if basis == "X" else state
    if basis not in ("Z", "X"):
        raise StateError(f"unsupported basis {basis!r}")
    probs = qubit_probabilities(work, qubit)
    outcome = int(rng.random() < probs[1])
    _, collapsed = project(state, qubit, outcome, basis)
    return outcome, collapsed


def reduced_density(state: QuantumState, qubits: Sequence[int]) -> np.ndarray:
    """Partial trace down to the given qubits, in the order given."""
    qubits = list(qubits)
    _check_targets(state, qubits)
    n = state.n_qubits
    k = len(qubits)
    if state.is_vector:
        psi = state.data.reshape([2] * n)
        psi = np.moveaxis(psi, qubits, range(k)).reshape(2**k, -1)
        return psi @ psi.conj().T
    rho = state.data.reshape([2] * (2 * n))
    keep = qubits + [n + q for q in qubits]
    rest = [i for i in range(n) if i not in qubits]
    order = keep + rest + [n + i for i in rest]
    rho = np.transpose(rho, order).reshape(2**k, 2**k, 2 ** (n - k), 2 ** (n - k))
    return np.einsum("abkk->ab", rho)


def state_fidelity(a: QuantumState, b: QuantumState) -> float:
    """|<a|b>|^2 for pure states, Uhlmann fidelity for mixed ones."""
    if a.n_qubits != b.n_qubits:
        raise StateError(f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}")
    if a.is_vector and b.is_vector:
        return float(np.abs(np.vdot(a.data, b.data)) ** 2)
    if a.is_vector:
        val = np.real(np.vdot(a.data, b.data @ a.data))
        return float(np.clip(val, 0.0, 1.0))
    if b.is_vector:
        return state_fidelity(b, a)
    evals, evecs = np.linalg.eigh(a.data)
    sqrt_a = (evecs * np.sqrt(np.clip(evals, 0.0, None))) @ evecs.conj().T
    inner = sqrt_a @ b.data @ sqrt_a
    mu = np.linalg.eigvalsh(inner)
    return float(np.clip(np.sum(np.sqrt(np.clip(mu, 0.0, None))) ** 2, 0.0, 1.0))


def states_close(a: QuantumState, b: QuantumState, tol: float = 1e-10) -> bool:
    """Phase-insensitive equality: fidelity within tol of 1."""
    return state_fidelity(a, b) >= 1.0 - tol


def phase_aligned_maxdiff(a: np.ndarray, b: np.ndarray) -> float:
    """max |a - e^{i*phi} b| after aligning the global phase on b."""
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    ref = b[idx]
    if abs(ref) < 1e-300:
        return float(np.max(np.abs(a - b)))
    phase = a[idx] / ref
    phase = phase / abs(phase) if abs(phase) > 0 else 1.0
    return float(np.max(np.abs(a - phase * b)))


def norm_error(state: QuantumState) -> float:
    """|norm^2 - 1| for vectors, |trace - 1| for matrices."""
    if state.is_vector:
        return abs(float(np.sum(np.abs(state.data) ** 2)) - 1.0)
    return abs(complex(np.trace(state.data)) - 1.0)


def state_to_dict(state: QuantumState) -> dict:
    """Serializable dump: entries as [re, im] pairs in index order."""
    flat = state.data.reshape(-1)
    return {
        "n_qubits": state.n_qubits,
        "representation": "vector" if state.is_vector else "matrix",
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }


def state_to_json(state: QuantumState) -> str:
    """Canonical JSON dump with 17-significant-digit floats."""
    from .report import dumps_report

    return dumps_report(state_to_dict(state))


def state_from_dict(payload: dict) -> QuantumState:
    entries = np.array(
        [complex(re, im) for re, im in payload["entries"]], dtype=complex
    )
    if payload["representation"] == "vector":
        return QuantumState.from_vector(entries)
    dim = int(round(np.sqrt(entries.size)))
    return QuantumState.from_matrix(entries.reshape(dim, dim))
