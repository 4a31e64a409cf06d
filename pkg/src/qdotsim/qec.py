"""Five-qubit error correction: encode, decode, syndrome lookup, correction.

The code is the [[5,1,3]] perfect code, stabilized by XZZXI and its cyclic
shifts. One principal qubit carries the protected amplitude; four syndrome
qubits start in |0> and, after decoding, hold a 4-bit pattern that names
the single-qubit Pauli error (if any) that struck while encoded. The 15
possible errors plus "none" exactly fill the 16 syndrome patterns.

The encoding circuit is a fixed Clifford sequence; compiled onto the device
gate set (Rabi rotations plus exchange-composed CNOT/CZ) its pulse count is
reported next to the conventional 500-pulse cycle budget.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .device import DotArray, MaterialParams, Pos
from .errors import AdjacencyError, ProtocolError, StateError
from .qstate import (
    QuantumState,
    apply_gate,
    as_rng,
    gate_cnot,
    gate_h,
    gate_x,
    measure,
    pauli_gate,
    qubit_probabilities,
    reduced_density,
)

STABILIZER_GENERATORS = ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")

# Clifford encoder, principal first: maps (a|0> + b|1>) (x) |0000> onto the
# code space. CZ written as (control, target) though it is symmetric.
_ENCODE_OPS: tuple[tuple[str, tuple[int, ...]], ...] = (
    ("Z", (0,)),
    ("H", (1,)), ("H", (2,)), ("H", (3,)), ("H", (4,)),
    ("CNOT", (4, 0)), ("CNOT", (3, 0)), ("CNOT", (2, 0)), ("CNOT", (1, 0)),
    ("CZ", (0, 4)), ("CZ", (1, 2)), ("CZ", (3, 4)), ("CZ", (0, 1)), ("CZ", (2, 3)),
)

# Device-compilation pulse costs: a CZ is two sqrt-SWAP exchange windows plus
# three z-rotations; a CNOT adds the two basis-change Hadamards.
PULSE_COST = {"1q": 1, "CZ": 5, "CNOT": 7, "measure": 1, "reset": 1}


@dataclass
class LogicalQubit:
    """Five physical qubits: the protected principal plus four syndromes."""

    principal: int
    syndrome_qubits: tuple[int, int, int, int]
    encoded: bool = False

    def __post_init__(self):
        all_q = (self.principal, *self.syndrome_qubits)
        if len(set(all_q)) != 5:
            raise StateError(f"logical qubit needs 5 distinct indices, got {all_q}")

    @property
    def block(self) -> tuple[int, ...]:
        return (self.principal, *self.syndrome_qubits)


@dataclass(frozen=True)
class PulseBudget:
    """How many correction cycles fit into one dephasing time."""

    pulses_per_cycle: int
    t_pulse: float
    cycles_in_T2: int

    def to_dict(self) -> dict:
        return {
            "pulses_per_cycle": self.pulses_per_cycle,
            "t_pulse_s": self.t_pulse,
            "cycles_in_T2": self.cycles_in_T2,
        }


def _apply_cz(state: QuantumState, a: int, b: int) -> QuantumState:
    # CZ = H on target conjugating CNOT.
    state = apply_gate(state, gate_h(b))
    state = apply_gate(state, gate_cnot(a, b))
    return apply_gate(state, gate_h(b))


def _run_ops(state: QuantumState, qubits, inverse: bool = False) -> QuantumState:
    ops = tuple(reversed(_ENCODE_OPS)) if inverse else _ENCODE_OPS
    for kind, locals_ in ops:
        targets = tuple(qubits[i] for i in locals_)
        if kind == "CZ":
            state = _apply_cz(state, *targets)
        elif kind == "CNOT":
            state = apply_gate(state, gate_cnot(*targets))
        else:  # self-inverse single-qubit gates (Z, H)
            state = apply_gate(state, pauli_gate(kind, *targets) if kind == "Z"
                               else gate_h(targets[0]))
    return state


def encode_pulse_count() -> int:
    """Pulses in the compiled encoder: 5 single-qubit, 4 CNOT, 5 CZ."""
    n = 0
    for kind, _ in _ENCODE_OPS:
        n += PULSE_COST.get(kind, PULSE_COST["1q"])
    return n


def _assert_syndromes_ground(state: QuantumState, lq: LogicalQubit) -> None:
    for q in lq.syndrome_qubits:
        if qubit_probabilities(state, q)[1] > 1e-9:
            raise ProtocolError(f"syndrome qubit {q} is not in |0>")


def encode5(state: QuantumState, lq: LogicalQubit) -> QuantumState:
    """Encode the principal amplitude across the five-qubit block."""
    if lq.encoded:
        raise ProtocolError("logical qubit is already encoded")
    _assert_syndromes_ground(state, lq)
    out = _run_ops(state, lq.block)
    lq.encoded = True
    return out


def decode5(state: QuantumState, lq: LogicalQubit) -> QuantumState:
    """Inverse of the encoder; the syndrome qubits disentangle whenever at
    most one single-qubit Pauli error struck since encoding."""
    if not lq.encoded:
        raise ProtocolError("logical qubit is not encoded")
    out = _run_ops(state, lq.block, inverse=True)
    lq.encoded = False
    return out


@lru_cache(maxsize=1)
def _error_tables() -> tuple[dict, dict]:
    """Brute-force both lookup tables on a fresh 5-qubit block.

    Returns (syndrome -> (pauli, block position), syndrome -> principal
    correction). Probe state is a fixed non-symmetric amplitude pair so
    all four candidate corrections are distinguishable."""
    amp = np.array([0.6, 0.8 * np.exp(1j * np.pi / 7)], dtype=complex)
    psi = np.zeros(32, dtype=complex)
    psi[0], psi[16] = amp[0], amp[1]
    base = QuantumState(psi, 5)
    lq = LogicalQubit(0, (1, 2, 3, 4))
    encoded = encode5(base, lq)
    syndrome_map: dict[tuple, tuple[str, int]] = {(0, 0, 0, 0): ("I", -1)}
    correction_map: dict[tuple, str] = {(0, 0, 0, 0): "I"}
    for q in range(5):
        for name in ("X", "Y", "Z"):
            hit = apply_gate(encoded, pauli_gate(name, q))
            dec = _run_ops(hit, lq.block, inverse=True)
            syndrome = []
            for sq in lq.syndrome_qubits:
                p1 = float(qubit_probabilities(dec, sq)[1])
                if 1e-10 < p1 < 1.0 - 1e-10:
                    raise StateError("syndrome qubit not in a basis state")
                syndrome.append(int(p1 > 0.5))
            syndrome = tuple(syndrome)
            if syndrome in syndrome_map:
                raise StateError(f"syndrome collision for {name}{q}")
            rho = reduced_density(dec, [lq.principal])
            for cand in ("I", "X", "Y", "Z"):
                mat = {"I": np.eye(2), "X": [[0, 1], [1, 0]],
                       "Y": [[0, -1j], [1j, 0]], "Z": [[1, 0], [0, -1]]}[cand]
                fixed = np.asarray(mat, dtype=complex) @ rho @ np.asarray(
                    mat, dtype=complex).conj().T
                if float(np.real(amp.conj() @ fixed @ amp)) > 1.0 - 1e-9:
                    correction_map[syndrome] = cand
                    break
            else:
                raise StateError(f"no principal correction for {name}{q}")
            syndrome_map[syndrome] = (name, q)
    return syndrome_map, correction_map


def syndrome_table() -> dict[tuple[int, int, int, int], tuple[str, int]]:
    """All 16 syndromes: 0000 means no error; the 15 others name the
    single-qubit Pauli (kind, block position) that produced them."""
    return dict(_error_tables()[0])


def principal_correction(syndrome: tuple[int, int, int, int]) -> str:
    """Pauli to apply to the decoded principal for a measured syndrome."""
    table = _error_tables()[1]
    if tuple(syndrome) not in table:
        raise StateError(f"not a 4-bit syndrome: {syndrome}")
    return table[tuple(syndrome)]


def cycle_pulse_count(n_corrections: int, n_resets: int) -> int:
    """Compiled pulses in one decode-measure-correct-encode cycle."""
    return (
        2 * encode_pulse_count()
        + 4 * PULSE_COST["measure"]
        + n_corrections * PULSE_COST["1q"]
        + n_resets * PULSE_COST["reset"]
    )


def qec_cycle(
    state: QuantumState,
    lq: LogicalQubit,
    injected_error=None,
    rng_seed=0,
) -> tuple[QuantumState, dict]:
    """One full correction cycle.

    Optionally injects Pauli errors first (a single (name, block position)
    pair or a list of them; two or more exceed the code distance and the
    report flags a possible logical error). Then decode, measure the four
    syndrome qubits, apply the looked-up principal correction, reset the
    syndrome qubits, and re-encode.
    """
    if not lq.encoded:
        raise ProtocolError("logical qubit is not encoded")
    rng = as_rng(rng_seed)
    errors = []
    if injected_error is not None:
        errors = [injected_error] if isinstance(injected_error, tuple) else list(
            injected_error
        )
    for name, block_pos in errors:
        state = apply_gate(state, pauli_gate(name, lq.block[block_pos]))
    state = decode5(state, lq)
    syndrome = []
    for sq in lq.syndrome_qubits:
        bit, state = measure(state, sq, "Z", rng)
        syndrome.append(bit)
    syndrome = tuple(syndrome)
    correction = principal_correction(syndrome)
    if correction != "I":
        state = apply_gate(state, pauli_gate(correction, lq.principal))
    n_resets = 0
    for sq, bit in zip(lq.syndrome_qubits, syndrome):
        if bit:
            state = apply_gate(state, gate_x(sq))
            n_resets += 1
    state = encode5(state, lq)
    diagnosed = syndrome_table()[syndrome]
    report = {
        "syndrome": list(syndrome),
        "diagnosed_error": {"pauli": diagnosed[0], "block_position": diagnosed[1]},
        "principal_correction": correction,
        "injected_errors": [list(e) for e in errors],
        "pulse_count": cycle_pulse_count(int(correction != "I"), n_resets),
        "possible_logical_error": len(errors) >= 2,
    }
    return state, report


def make_cat(array: DotArray, positions: list[Pos]) -> DotArray:
    """Spread (|0...0> + |1...1>)/sqrt(2) over a chain of adjacent dots:
    Hadamard on the head, then a CNOT chain."""
    if len(positions) < 2:
        raise StateError("a cat state needs at least two qubits")
    for a, b in zip(positions, positions[1:]):
        if not array.adjacent(a, b):
            raise AdjacencyError(f"cat chain breaks between {a} and {b}")
    if array.strict:
        for pos in positions:
            q = array.qubit_index(pos)
            if qubit_probabilities(array.state, q)[1] > 1e-9:
                raise ProtocolError(f"cat input at {pos} is not |0>")
    array.apply_gate_at("H", [positions[0]])
    for a, b in zip(positions, positions[1:]):
        array.apply_gate_at("CNOT", [a, b])
    return array


def un_make_cat(array: DotArray, positions: list[Pos]) -> DotArray:
    """Exact adjoint of make_cat: reverse the CNOT chain, then Hadamard."""
    if len(positions) < 2:
        raise StateError("a cat state needs at least two qubits")
    for a, b in reversed(list(zip(positions, positions[1:]))):
        array.apply_gate_at("CNOT", [a, b])
    array.apply_gate_at("H", [positions[0]])
    return array


def parity_measure(
    state: QuantumState, qubits: list[int], ancilla: int, rng_seed=0
) -> tuple[int, QuantumState]:
    """Joint Z-parity via CNOT fan-in onto a fresh |0> ancilla.

    Parity eigenstates pass through untouched (up to the ancilla); anything
    else is projected onto the measured parity sector."""
    if ancilla in qubits:
        raise StateError("ancilla cannot be one of the measured qubits")
    if qubit_probabilities(state, ancilla)[1] > 1e-9:
        raise ProtocolError(f"ancilla {ancilla} is not fresh (|0>)")
    for q in qubits:
        state = apply_gate(state, gate_cnot(q, ancilla))
    bit, state = measure(state, ancilla, "Z", rng_seed)
    if bit:  # reset so the ancilla is reusable
        state = apply_gate(state, gate_x(ancilla))
    return bit, state


def pulse_budget(
    material: MaterialParams, pulses_per_cycle: int = 500
) -> PulseBudget:
    """floor(T2 / (pulses_per_cycle * t_pulse)) cycles fit in one T2."""
    if pulses_per_cycle <= 0:
        raise StateError(f"pulses_per_cycle must be positive, got {pulses_per_cycle}")
    cycles = int(material.noise.T2 / (pulses_per_cycle * material.t_pulse))
    return PulseBudget(
        pulses_per_cycle=pulses_per_cycle,
        t_pulse=material.t_pulse,
        cycles_in_T2=cycles,
    )
