"""Qubit transport: swapping, tunneling, and teleportation channels.

Channel analytics follow the exponential error model f = exp(-lambda*d)
with lambda = t_op / T2 (per-hop operation time over the dephasing time)
and d the line length in qubits. Reported figures:

    latency            = d * t_hop
    physical bandwidth = 1 / latency
    true bandwidth     = physical bandwidth * f
    max distance       = ln(1 - threshold) / (-lambda)

The max-distance formula gives about 100 qubits at threshold 1e-4 for a
swap line with lambda = 1e-6, and about 10 at threshold 1e-5; reports
carry both because the two readings circulate side by side.

Teleportation consumes a pre-shared EPR pair, two measurements, two
classical bits, and conditional X/Z corrections. Purification is one
recurrence round on Werner pairs (bilateral CNOT, compare target-pair
measurements, keep on agreement).
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .device import DotArray, MaterialParams, Pos
from .errors import AdjacencyError, ProtocolError, RoutingError, StateError
from .qstate import (
    QuantumState,
    apply_gate,
    as_rng,
    gate_cnot,
    gate_h,
    gate_x,
    gate_z,
    project,
    measure,
    reduced_density,
)

# Deterministic neighbor expansion order for route planning: +x, +y, -x, -y.
_NEIGHBOR_ORDER = ((1, 0), (0, 1), (-1, 0), (0, -1))

BELL_PHI_PLUS = np.zeros(4, dtype=complex)
BELL_PHI_PLUS[0] = BELL_PHI_PLUS[3] = 1.0 / math.sqrt(2.0)

FIDELITY_THRESHOLD_DEFAULT = 1e-4


@dataclass(frozen=True)
class ChannelSpec:
    """One transport run: mechanism, path (or plain length), error model."""

    kind: str
    path: tuple[Pos, ...] = ()
    lam: float = 1e-6
    t_hop: float = 1e-10
    fidelity_threshold: float = FIDELITY_THRESHOLD_DEFAULT
    length_qubits: int | None = None

    def __post_init__(self):
        if self.kind not in ("swap", "tunnel", "teleport"):
            raise StateError(f"unknown channel kind {self.kind!r}")
        if not 0.0 < self.lam < 1.0:
            raise StateError(f"lambda must be in (0, 1), got {self.lam}")
        if self.t_hop <= 0:
            raise StateError(f"t_hop must be positive, got {self.t_hop}")
        if not 0.0 < self.fidelity_threshold < 1.0:
            raise StateError("fidelity_threshold must be in (0, 1)")
        if self.path:
            if len(set(self.path)) != len(self.path):
                raise StateError("path positions must be pairwise distinct")
            for a, b in zip(self.path, self.path[1:]):
                if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
                    raise StateError(f"path steps {a} -> {b} are not adjacent")
        elif self.length_qubits is None:
            raise StateError("need either a path or length_qubits")

    @property
    def d(self) -> int:
        """Line length in qubits (hops)."""
        if self.path:
            return len(self.path) - 1
        return int(self.length_qubits)


@dataclass(frozen=True)
class ChannelReport:
    """Fidelity/latency/bandwidth figures for one transport run."""

    kind: str
    d: int
    fidelity: float
    latency: float
    physical_bandwidth: float
    true_bandwidth: float
    max_distance_qubits: float
    max_distance_by_threshold: dict = field(default_factory=dict)
    conflicts: tuple = ()
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if not 0.0 < self.fidelity <= 1.0:
            raise StateError(f"fidelity must be in (0, 1], got {self.fidelity}")
        rel = abs(self.true_bandwidth - self.physical_bandwidth * self.fidelity)
        if rel > 1e-9 * max(1.0, self.physical_bandwidth):
            raise StateError("true_bandwidth must equal physical_bandwidth*fidelity")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "length_qubits": self.d,
            "fidelity": self.fidelity,
            "latency_s": self.latency,
            "physical_bandwidth_bits_per_s": self.physical_bandwidth,
            "true_bandwidth_bits_per_s": self.true_bandwidth,
            "max_distance_qubits": self.max_distance_qubits,
            "max_distance_by_threshold": dict(self.max_distance_by_threshold),
            "conflicts": list(self.conflicts),
            "notes": list(self.notes),
        }


def channel_lambda(t_op: float, T2: float) -> float:
    """Per-hop error parameter t_op/T2.

    Oriented so that a 1e-10 s swap against a 1e-4 s dephasing time gives
    1e-6; the inverse ratio would make every fidelity figure collapse."""
    if t_op < 0 or T2 <= 0:
        raise StateError(f"need t_op >= 0 and T2 > 0, got {t_op}, {T2}")
    return t_op / T2


def channel_fidelity(lam: float, d: float) -> float:
    """exp(-lambda*d) for a line of d qubits."""
    if d < 0:
        raise StateError(f"negative line length d = {d}")
    return math.exp(-lam * d)


def max_channel_distance(lam: float, threshold: float = FIDELITY_THRESHOLD_DEFAULT) -> float:
    """Longest line keeping infidelity below threshold: ln(1-thr)/(-lambda)."""
    if not 0.0 < threshold < 1.0:
        raise StateError(f"threshold must be in (0, 1), got {threshold}")
    if lam <= 0:
        raise StateError(f"lambda must be positive, got {lam}")
    return math.log(1.0 - threshold) / (-lam)


MAX_DISTANCE_NOTE = (
    "max distance at threshold 1e-4 evaluates to ~100 qubits for a swap line "
    "with lambda = 1e-6; the companion 10-qubit (1 um) figure corresponds to "
    "threshold 1e-5. Both are reported; the formula is the authority."
)


def _metrics(spec: ChannelSpec, notes: tuple[str, ...]) -> ChannelReport:
    d = spec.d
    f = channel_fidelity(spec.lam, d)
    latency = d * spec.t_hop
    if latency <= 0:
        raise StateError("channel needs at least one hop")
    phys = 1.0 / latency
    return ChannelReport(
        kind=spec.kind,
        d=d,
        fidelity=f,
        latency=latency,
        physical_bandwidth=phys,
        true_bandwidth=phys * f,
        max_distance_qubits=max_channel_distance(spec.lam, spec.fidelity_threshold),
        max_distance_by_threshold={
            "1e-4": max_channel_distance(spec.lam, 1e-4),
            "1e-5": max_channel_distance(spec.lam, 1e-5),
        },
        notes=notes + (MAX_DISTANCE_NOTE,),
    )


def swap_channel_metrics(
    spec: ChannelSpec, material: MaterialParams, array: DotArray | None = None
) -> ChannelReport:
    """Figures for a swap line. With an array given, the path must run
    through occupied dots: swapping needs electrons to swap with."""
    if spec.kind != "swap":
        raise StateError(f"expected a swap spec, got {spec.kind!r}")
    if array is not None and spec.path:
        for pos in spec.path:
            if not array.dots[pos].occupied:
                raise StateError(f"swap channel crosses empty dot {pos}")
    notes = (
        f"hop time {spec.t_hop:.6g} s; material swap window pi*hbar/J_on = "
        f"{material.t_swap:.6g} s",
    )
    return _metrics(spec, notes)


def tunnel_channel_metrics(
    spec: ChannelSpec, material: MaterialParams, array: DotArray | None = None
) -> ChannelReport:
    """Figures for a tunneling line; hops are 10x faster than swaps and the
    path beyond the source must be empty."""
    if spec.kind != "tunnel":
        raise StateError(f"expected a tunnel spec, got {spec.kind!r}")
    if array is not None and spec.path:
        for pos in spec.path[1:]:
            if array.dots[pos].occupied:
                raise StateError(f"tunnel channel crosses occupied dot {pos}")
    notes = (f"hop time t_swap/10 = {material.t_hop:.6g} s",)
    return _metrics(spec, notes)


def plan_tunnel_route(array: DotArray, src: Pos, dst: Pos) -> list[Pos]:
    """Shortest path from an occupied source to an empty destination through
    empty dots only (breadth-first, fixed +x,+y,-x,-y tie-break)."""
    array._pos_check(src)
    array._pos_check(dst)
    if not array.dots[src].occupied:
        raise StateError(f"source dot {src} is empty")
    if array.dots[dst].occupied:
        raise RoutingError(f"destination dot {dst} is occupied")

    def traversable(pos: Pos) -> bool:
        dot = array.dots.get(pos)
        return dot is not None and not dot.occupied and dot.role != "readout"

    if not traversable(dst):
        raise RoutingError(f"destination dot {dst} cannot host an electron")
    parent: dict[Pos, Pos] = {src: src}
    queue = deque([src])
    while queue:
        cur = queue.popleft()
        if cur == dst:
            break
        for dx, dy in _NEIGHBOR_ORDER:
            nxt = (cur[0] + dx, cur[1] + dy)
            if nxt in parent or not traversable(nxt):
                continue
            parent[nxt] = cur
            queue.append(nxt)
    if dst not in parent:
        raise RoutingError(f"no empty path from {src} to {dst}")
    path = [dst]
    while path[-1] != src:
        path.append(parent[path[-1]])
    return path[::-1]


def run_tunnel_route(array: DotArray, path: list[Pos]) -> DotArray:
    """Execute a planned route as successive single hops."""
    for a, b in zip(path, path[1:]):
        array.move_electron(a, b)
    return array


def detect_conflicts(routes: list[tuple[list[Pos], tuple[float, float]]]) -> list[dict]:
    """Flag every grid position shared by two routes whose time windows
    overlap. A moving qubit crossing another's path is where correlated
    errors enter; disjoint tunnel routes come back clean."""
    conflicts = []
    for i in range(len(routes)):
        path_i, (s_i, e_i) = routes[i]
        if e_i < s_i:
            raise StateError(f"route {i} window ends before it starts")
        for j in range(i + 1, len(routes)):
            path_j, (s_j, e_j) = routes[j]
            lo, hi = max(s_i, s_j), min(e_i, e_j)
            if lo > hi:
                continue
            for pos in path_i:
                if pos in set(path_j):
                    conflicts.append(
                        {"position": pos, "window": (lo, hi), "routes": (i, j)}
                    )
    return conflicts


def _assert_ground(array: DotArray, pos: Pos) -> None:
    rho = reduced_density(array.state, [array.qubit_index(pos)])
    if abs(rho[0, 0] - 1.0) > 1e-9:
        raise ProtocolError(f"qubit at {pos} is not in the ground state")


def make_epr(array: DotArray, a: Pos, b: Pos) -> DotArray:
    """Entangle two adjacent ground-state qubits into (|00> + |11>)/sqrt(2):
    Hadamard on the first, then CNOT onto the second."""
    if not array.adjacent(a, b):
        raise AdjacencyError(f"{a} and {b} are not grid neighbors")
    array.qubit_index(a)
    array.qubit_index(b)
    if array.strict:
        _assert_ground(array, a)
        _assert_ground(array, b)
    array.apply_gate_at("H", [a])
    array.apply_gate_at("CNOT", [a, b])
    return array


def _epr_pair_fidelity(array: DotArray, a: Pos, b: Pos) -> float:
    rho = reduced_density(array.state, [array.qubit_index(a), array.qubit_index(b)])
    return float(np.real(BELL_PHI_PLUS.conj() @ rho @ BELL_PHI_PLUS))


def teleport(array: DotArray, c: Pos, a: Pos, b: Pos, rng_seed=0) -> tuple[dict, DotArray]:
    """Teleport the payload at c onto b using the EPR pair (a, b).

    CNOT from c onto a, then the phase of c (X basis) and the amplitude of a
    (Z basis) are measured; the two classical bits steer an X and then a Z
    on b. The payload at c is destroyed by the measurements."""
    rng = as_rng(rng_seed)
    qc, qa, qb = (array.qubit_index(p) for p in (c, a, b))
    if len({qc, qa, qb}) != 3:
        raise StateError("payload and pair must be three distinct qubits")
    if array.strict:
        f_pair = _epr_pair_fidelity(array, a, b)
        if f_pair < 1.0 - 1e-6:
            raise ProtocolError(
                f"no EPR pair on {a},{b}: Bell fidelity {f_pair:.6f}"
            )
    payload_before = reduced_density(array.state, [qc])
    array.apply_gate_at("CNOT", [c, a])
    phase_bit, array.state = measure(array.state, qc, "X", rng)
    amp_bit, array.state = measure(array.state, qa, "Z", rng)
    array._advance(
        2.0 * (array.material.readout_transfer + array.material.readout_measure),
        "teleport_measure", c=c, a=a, bits=[phase_bit, amp_bit],
    )
    if array.material.classical_latency > 0:
        # the two classical bits ride a wire to b's site before correcting
        array.idle(array.material.classical_latency)
    if amp_bit:
        array.apply_gate_at("X", [b])
    if phase_bit:
        array.apply_gate_at("Z", [b])
    payload_after = reduced_density(array.state, [qb])
    fidelity = float(
        np.real(np.trace(payload_before @ payload_after))
        + 2.0 * math.sqrt(
            max(0.0, float(np.real(np.linalg.det(payload_before)))
            ) * max(0.0, float(np.real(np.linalg.det(payload_after))))
        )
    )
    report = {
        "phase_bit": phase_bit,
        "amplitude_bit": amp_bit,
        "payload_fidelity": min(1.0, fidelity),
    }
    return report, array


def teleport_branches(payload: QuantumState) -> list[dict]:
    """Exhaustive check of all four classical branches for one payload.

    Builds the three-qubit register (payload, EPR half A, EPR half B),
    projects each measurement branch instead of sampling, applies the
    conditional corrections, and reports fidelity with the payload."""
    if not payload.is_vector or payload.n_qubits != 1:
        raise StateError("payload must be a single-qubit vector state")
    psi = np.zeros(8, dtype=complex)
    # payload on qubit 0, |00> on (1, 2)
    psi[0] = payload.data[0]
    psi[4] = payload.data[1]
    reg = QuantumState(psi, 3)
    reg = apply_gate(reg, gate_h(1))
    reg = apply_gate(reg, gate_cnot(1, 2))
    reg = apply_gate(reg, gate_cnot(0, 1))
    branches = []
    for phase_bit in (0, 1):
        for amp_bit in (0, 1):
            p1, st = project(reg, 0, phase_bit, "X")
            p2, st = project(st, 1, amp_bit, "Z")
            if amp_bit:
                st = apply_gate(st, gate_x(2))
            if phase_bit:
                st = apply_gate(st, gate_z(2))
            rho_b = reduced_density(st, [2])
            fid = float(np.real(payload.data.conj() @ rho_b @ payload.data))
            branches.append(
                {
                    "phase_bit": phase_bit,
                    "amplitude_bit": amp_bit,
                    "probability": p1 * p2,
                    "fidelity": fid,
                }
            )
    return branches


def purify_fidelity(F: float) -> tuple[float, float]:
    """One recurrence round on Werner pairs of fidelity F.

    Returns (F', success probability):
        F' = (F^2 + (1-F)^2/9) / (F^2 + 2F(1-F)/3 + 5(1-F)^2/9)
    with the denominator the probability that the round keeps the pair.
    Improves F whenever F > 1/2."""
    if not 0.25 < F <= 1.0:
        raise ProtocolError(
            f"pair fidelity {F} at or below the 0.25 purification threshold"
        )
    num = F * F + (1.0 - F) ** 2 / 9.0
    den = F * F + 2.0 * F * (1.0 - F) / 3.0 + 5.0 * (1.0 - F) ** 2 / 9.0
    return num / den, den


def purify(F: float, n_pairs: int, rng_seed=0) -> tuple[int, float]:
    """Consume pairs two at a time through one recurrence round.

    Each attempt succeeds with the round's success probability; the
    survivor count is sampled (seeded) and the survivors share the
    improved fidelity F'."""
    if n_pairs < 0:
        raise StateError(f"negative pair count {n_pairs}")
    f_out, p_success = purify_fidelity(F)
    attempts = n_pairs // 2
    rng = as_rng(rng_seed)
    survivors = int(rng.binomial(attempts, p_success)) if attempts else 0
    return survivors, f_out


def teleport_bandwidth(
    distance_m: float,
    material: MaterialParams,
    purification_rounds: int = 0,
    fidelity_threshold: float = FIDELITY_THRESHOLD_DEFAULT,
) -> dict:
    """Deliverable teleportation rate over a long tunnel line.

    Model (every knob echoed in the returned report):
      * EPR halves ride tunnel hops of t_swap/10 with lambda = t_hop/T2.
      * The line is split into relay segments no longer than the tunnel
        reach at `fidelity_threshold`; segments hand off in pipeline, so
        the physical pair rate is one per segment traversal.
      * Without purification the true bandwidth keeps the channel
        convention rate * fidelity, which for a single segment reduces to
        the plain tunnel-channel figure.
      * Each purification round consumes two pairs per survivor and
        succeeds with the recurrence probability, so the yield is
        prod(p_i) / 2^rounds and the delivered fidelity is the recurrence
        output.
    """
    if distance_m <= 0:
        raise StateError(f"distance must be positive, got {distance_m}")
    if purification_rounds < 0:
        raise StateError(f"negative purification rounds {purification_rounds}")
    t_hop = material.t_hop
    T2 = material.noise.T2
    lam = channel_lambda(t_hop, T2)
    d_total = max(1, int(round(distance_m / material.dot_pitch)))
    reach = max(1, int(max_channel_distance(lam, fidelity_threshold)))
    n_segments = max(1, math.ceil(d_total / reach))
    d_segment = math.ceil(d_total / n_segments)
    pair_rate = 1.0 / (d_segment * t_hop)
    f_raw = channel_fidelity(lam, d_total)
    fidelity = f_raw
    yield_factor = 1.0
    success_probs = []
    for _ in range(purification_rounds):
        fidelity, p = purify_fidelity(fidelity)
        success_probs.append(p)
        yield_factor *= p / 2.0
    bandwidth = pair_rate * yield_factor * fidelity
    return {
        "distance_m": distance_m,
        "dot_pitch_m": material.dot_pitch,
        "length_qubits": d_total,
        "t_hop_s": t_hop,
        "T2_s": T2,
        "lambda": lam,
        "fidelity_threshold": fidelity_threshold,
        "segment_reach_qubits": reach,
        "n_segments": n_segments,
        "segment_length_qubits": d_segment,
        "physical_pair_rate_per_s": pair_rate,
        "raw_pair_fidelity": f_raw,
        "purification_rounds": purification_rounds,
        "round_success_probabilities": success_probs,
        "purification_yield": yield_factor,
        "delivered_fidelity": fidelity,
        "true_bandwidth_bits_per_s": bandwidth,
        "assumptions": [
            "EPR halves travel on tunnel hops of duration t_swap/10",
            "per-hop error lambda = t_hop/T2, line fidelity exp(-lambda*d)",
            "relay segments bounded by the tunnel reach at the stated "
            "threshold, handing off in pipeline (rate = 1/segment time)",
            "raw channel fidelity maps onto the Werner-pair fidelity fed "
            "to the purification recurrence",
            "each purification round consumes 2 pairs per kept pair and "
            "succeeds with the recurrence probability",
            "classical communication and endpoint gate overheads are not "
            "rate limiting",
        ],
    }
