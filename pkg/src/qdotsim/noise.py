"""Decoherence channels parameterized by the relaxation times T1 and T2.

Both decay laws are exponential (Markovian). The dephasing channel
multiplies a qubit's off-diagonal coherences by exp(-t/T2); amplitude
damping relaxes toward the spin-up ground state |0> with
gamma = 1 - exp(-t/T1). Because damping already dephases at rate 1/(2*T1),
the combined idle channel uses the pure-dephasing rate
1/T2' = 1/T2 - 1/(2*T1), which is nonnegative exactly when T2 <= 2*T1.

Exact channels act on density matrices. Vector states go through
sample_trajectory, a seeded stochastic unraveling whose ensemble average
reproduces the exact channels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import StateError
from .qstate import (
    PAULI_Z,
    Gate,
    QuantumState,
    apply_gate,
    as_rng,
    gate_z,
    qubit_probabilities,
)

_REL_TOL = 1e-12


@dataclass(frozen=True)
class NoiseParams:
    """T1/T2 pair with an enable switch; defaults T2 = 100 us, T1 = 2*T2."""

    T1: float = 200e-6
    T2: float = 100e-6
    enabled: bool = False

    def __post_init__(self):
        if self.T1 <= 0 or self.T2 <= 0:
            raise StateError(f"T1, T2 must be positive, got {self.T1}, {self.T2}")
        if self.T2 > 2.0 * self.T1 * (1.0 + _REL_TOL):
            raise StateError(
                f"T2 = {self.T2} exceeds 2*T1 = {2 * self.T1}: unphysical channel"
            )


def pure_dephasing_time(T1: float, T2: float) -> float:
    """T2' with 1/T2' = 1/T2 - 1/(2*T1); inf when damping accounts for all of T2."""
    rate = 1.0 / T2 - 0.5 / T1
    if rate < -_REL_TOL / T2:
        raise StateError(f"T2 = {T2} > 2*T1 = {2 * T1}: negative pure-dephasing rate")
    if rate <= 0.0:
        return math.inf
    return 1.0 / rate


def dephasing_kraus(decay: float) -> list[np.ndarray]:
    """Kraus pair {sqrt(p) I, sqrt(1-p) Z} with p = (1 + decay)/2."""
    p = 0.5 * (1.0 + decay)
    return [
        np.sqrt(p) * np.eye(2, dtype=complex),
        np.sqrt(1.0 - p) * PAULI_Z.copy(),
    ]


def damping_kraus(gamma: float) -> list[np.ndarray]:
    """Standard amplitude-damping Kraus pair toward |0>."""
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=complex)
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return [k0, k1]


def apply_kraus(state: QuantumState, qubit: int, kraus: list[np.ndarray]) -> QuantumState:
    """rho -> sum_i K_i rho K_i^dagger on one qubit of a density matrix."""
    if state.is_vector:
        raise StateError(
            "Kraus channels need a density matrix; route vector states "
            "through sample_trajectory"
        )
    n = state.n_qubits
    rho = state.data.reshape([2] * (2 * n))
    out = np.zeros_like(rho)
    for k in kraus:
        term = np.moveaxis(rho, qubit, 0)
        term = np.tensordot(k, term, axes=([1], [0]))
        term = np.moveaxis(term, 0, qubit)
        term = np.moveaxis(term, n + qubit, 0)
        term = np.tensordot(k.conj(), term, axes=([1], [0]))
        term = np.moveaxis(term, 0, n + qubit)
        out = out + term
    return QuantumState(out.reshape(2**n, 2**n), n)


def dephase(state: QuantumState, qubit: int, t: float, T2: float) -> QuantumState:
    """Multiply the qubit's coherences by exp(-t/T2); trace preserved."""
    if t < 0:
        raise StateError(f"negative duration t = {t}")
    if t == 0:
        return state
    return apply_kraus(state, qubit, dephasing_kraus(math.exp(-t / T2)))


def amplitude_damp(state: QuantumState, qubit: int, t: float, T1: float) -> QuantumState:
    """Relax the qubit toward |0> with gamma = 1 - exp(-t/T1)."""
    if t < 0:
        raise StateError(f"negative duration t = {t}")
    if t == 0:
        return state
    return apply_kraus(state, qubit, damping_kraus(1.0 - math.exp(-t / T1)))


def idle_channel(
    state: QuantumState, qubit: int, t: float, params: NoiseParams,
    T2_override: float | None = None,
) -> QuantumState:
    """Exact idle evolution: pure dephasing at 1/T2' composed with damping.

    The combined coherence decay is exp(-t/T2') * exp(-t/(2*T1)) = exp(-t/T2).
    """
    if not params.enabled or t == 0:
        return state
    T2 = T2_override if T2_override is not None else params.T2
    t2p = pure_dephasing_time(params.T1, T2)
    if math.isfinite(t2p):
        state = apply_kraus(state, qubit, dephasing_kraus(math.exp(-t / t2p)))
    return amplitude_damp(state, qubit, t, params.T1)


def jump_probabilities(
    dt: float, params: NoiseParams, T2_override: float | None = None
) -> tuple[float, float]:
    """(p_Z, gamma) for one unraveling step of length dt."""
    if dt < 0:
        raise StateError(f"negative timestep dt = {dt}")
    T2 = T2_override if T2_override is not None else params.T2
    t2p = pure_dephasing_time(params.T1, T2)
    p_z = 0.0 if not math.isfinite(t2p) else 0.5 * (1.0 - math.exp(-dt / t2p))
    gamma = 1.0 - math.exp(-dt / params.T1)
    return p_z, gamma


def apply_idle_jumps(
    state: QuantumState,
    qubit: int,
    dt: float,
    params: NoiseParams,
    rng: np.random.Generator,
    T2_override: float | None = None,
) -> QuantumState:
    """One stochastic step on a vector state: Kraus-sampled damping plus a
    possible Z flip. Averaged over seeds this equals idle_channel exactly."""
    if not state.is_vector:
        raise StateError("trajectory jumps act on vector states")
    if not params.enabled or dt == 0:
        return state
    p_z, gamma = jump_probabilities(dt, params, T2_override)
    if p_z > 0 and rng.random() < p_z:
        state = apply_gate(state, gate_z(qubit))
    if gamma > 0:
        p1 = float(qubit_probabilities(state, qubit)[1])
        p_jump = gamma * p1
        n = state.n_qubits
        psi = state.data.reshape([2] * n).copy()
        sel0 = [slice(None)] * n
        sel1 = [slice(None)] * n
        sel0[qubit], sel1[qubit] = 0, 1
        if rng.random() < p_jump:
            # Jump K1: the excited amplitude collapses onto |0>.
            psi[tuple(sel0)] = psi[tuple(sel1)] / np.sqrt(p1)
            psi[tuple(sel1)] = 0.0
        else:
            psi[tuple(sel1)] *= np.sqrt(1.0 - gamma)
            psi /= np.sqrt(1.0 - p_jump)
        state = QuantumState(psi.reshape(-1), n)
    return state


@dataclass(frozen=True)
class PulseEvent:
    """One timed entry of a pulse schedule.

    gate, when present, is applied before the noise window. noise_qubits
    limits which qubits idle during the window (None means all).
    """

    kind: str
    duration: float
    gate: Gate | None = None
    energy: float = 0.0
    noise_qubits: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.duration < 0:
            raise StateError(f"negative pulse duration {self.duration}")


@dataclass
class PulseSchedule:
    """Time-ordered pulse events with durations and energy costs."""

    events: list[PulseEvent] = field(default_factory=list)

    @property
    def total_duration(self) -> float:
        return sum(e.duration for e in self.events)

    @property
    def total_energy(self) -> float:
        return sum(e.energy for e in self.events)


def sample_trajectory(
    state: QuantumState,
    schedule: PulseSchedule,
    params: NoiseParams,
    rng_seed=0,
) -> QuantumState:
    """Run one stochastic unraveling of a schedule on a vector state."""
    if not state.is_vector:
        raise StateError("sample_trajectory takes a vector state")
    rng = as_rng(rng_seed)
    for event in schedule.events:
        if event.gate is not None:
            state = apply_gate(state, event.gate)
        if not params.enabled or event.duration == 0:
            continue
        qubits = (
            event.noise_qubits
            if event.noise_qubits is not None
            else range(state.n_qubits)
        )
        for q in qubits:
            state = apply_idle_jumps(state, q, event.duration, params, rng)
    return state
