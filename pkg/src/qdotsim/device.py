"""The 2D array of single-electron dots and its clocked event model.

Each dot holds at most one electron (Coulomb blockade). Occupied dots carry
qubit amplitudes in one shared register; the dot <-> qubit mapping lives in
`qubit_positions`. Every event advances the clock by its physical duration
and, when noise is enabled, applies idle decoherence for that window:
exact channels on density-matrix registers, seeded jump sampling on vector
registers. Ideal gate unitaries themselves are noiseless; their duration
contributes an idle window instead. During an exchange window the coupled
pair is excluded from that window's idle noise.

Strict mode additionally applies the always-on residual exchange J_off to
every adjacent occupied pair during each timed window.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .constants import HBAR_EV_S
from .errors import AdjacencyError, BlockadeError, StateError
from .noise import NoiseParams, apply_idle_jumps, idle_channel
from .pulses import drive_report, swap_duration
from .qstate import (
    Gate,
    QuantumState,
    apply_gate,
    as_rng,
    exchange_evolution,
    measure,
)

Pos = tuple[int, int]

ROLES = ("qubit", "empty", "readout", "intermediary")

# Bloch rotation angle behind each named single-qubit gate; sets the
# Rabi-derived pulse duration angle/(2*pi) * rabi_period.
ROTATION_ANGLE = {"X": math.pi, "Y": math.pi, "Z": math.pi, "H": math.pi,
                  "S": math.pi / 2, "T": math.pi / 4}


@dataclass(frozen=True)
class MaterialParams:
    """Material and geometry constants of one dot array design."""

    g_factor: float            # dimensionless, signed
    delta_E_orb: float         # eV, orbital level spacing
    U_charging: float          # eV, on-dot Coulomb repulsion
    J_on: float                # eV, exchange with the barrier lowered
    J_off: float               # eV, residual exchange
    dot_pitch: float           # m, qubit-to-qubit separation
    gate_distance: float       # m, drive wire to dot
    noise: NoiseParams = NoiseParams()
    t_pulse: float = 2e-11     # s, one electrostatic gating pulse
    readout_transfer: float = 100e-12   # s, spin-selective charge transfer
    readout_measure: float = 1e-9       # s, electrometer integration
    rabi_period: float = 100e-9         # s, full Rabi flop under the AC drive
    readout_error: float = 0.0          # probability of a misread bit
    classical_latency: float = 0.0      # s, classical feed-forward delay

    def __post_init__(self):
        if not (self.J_on > self.J_off > 0):
            raise StateError(f"need J_on > J_off > 0, got {self.J_on}, {self.J_off}")
        if self.dot_pitch <= 0 or self.delta_E_orb <= 0:
            raise StateError("dot_pitch and delta_E_orb must be positive")
        if self.U_charging <= 0 or self.gate_distance <= 0:
            raise StateError("U_charging and gate_distance must be positive")
        if min(self.t_pulse, self.readout_transfer, self.readout_measure,
               self.rabi_period) <= 0:
            raise StateError("all durations must be positive")
        if not 0.0 <= self.readout_error <= 1.0:
            raise StateError(f"readout_error must be in [0, 1], got {self.readout_error}")
        if self.classical_latency < 0:
            raise StateError("classical_latency cannot be negative")

    @property
    def t_swap(self) -> float:
        """Full SWAP exchange window, pi hbar / J_on."""
        return swap_duration(self.J_on)

    @property
    def t_hop(self) -> float:
        """One tunneling hop; an order of magnitude faster than a swap."""
        return self.t_swap / 10.0

    def with_noise(self, noise: NoiseParams) -> "MaterialParams":
        return replace(self, noise=noise)


def inas_material(noise: NoiseParams | None = None) -> MaterialParams:
    """InAs composite-well preset: large |g|, 5 ueV on-state exchange."""
    return MaterialParams(
        g_factor=-10.0,
        delta_E_orb=10e-3,
        U_charging=2e-3,
        J_on=5e-6,
        J_off=5e-9,
        dot_pitch=100e-9,
        gate_distance=100e-9,
        noise=noise if noise is not None else NoiseParams(T1=200e-6, T2=100e-6),
    )


def si_material(T2: float, noise_enabled: bool = False) -> MaterialParams:
    """Si MOS preset. T2 must be supplied: no trustworthy default exists,
    only the expectation that it is very long. Structural parameters reuse
    the InAs values as placeholders."""
    if T2 is None or T2 <= 0:
        raise StateError("the Si preset requires an explicit positive T2")
    base = inas_material(NoiseParams(T1=2.0 * T2, T2=T2, enabled=noise_enabled))
    return replace(base, g_factor=2.0)


MATERIAL_PRESETS = {"inas": inas_material}


@dataclass
class Dot:
    role: str = "empty"
    occupied: bool = False
    qubit_id: int | None = None
    t2_override: float | None = None

    def __post_init__(self):
        if self.role not in ROLES:
            raise StateError(f"unknown dot role {self.role!r}")


class DotArray:
    """Mutable array under a single controller; events are serialized by
    the clock and logged for reporting."""

    def __init__(
        self,
        width: int,
        height: int,
        material: MaterialParams,
        roles: dict[Pos, str] | None = None,
        representation: str = "vector",
        strict: bool = False,
        seed=0,
    ):
        if width < 1 or height < 1:
            raise StateError(f"array must be at least 1x1, got {width}x{height}")
        if representation not in ("vector", "matrix"):
            raise StateError(f"unknown representation {representation!r}")
        self.width = width
        self.height = height
        self.material = material
        self.strict = strict
        self.representation = representation
        self.dots: dict[Pos, Dot] = {
            (x, y): Dot() for x in range(width) for y in range(height)
        }
        for pos, role in (roles or {}).items():
            self._pos_check(pos)
            self.dots[pos].role = role
            if role not in ROLES:
                raise StateError(f"unknown dot role {role!r}")
        state = QuantumState.zero(0)
        self.state = state.to_density() if representation == "matrix" else state
        self.qubit_positions: list[Pos] = []
        self.clock = 0.0
        self.events: list[dict] = []
        self._rng = as_rng(seed)

    # -- geometry ---------------------------------------------------------

    def _pos_check(self, pos: Pos) -> None:
        x, y = pos
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise StateError(f"position {pos} outside {self.width}x{self.height} grid")

    @staticmethod
    def adjacent(a: Pos, b: Pos) -> bool:
        return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1

    def qubit_index(self, pos: Pos) -> int:
        self._pos_check(pos)
        dot = self.dots[pos]
        if not dot.occupied or dot.qubit_id is None:
            raise StateError(f"no qubit at {pos}")
        return dot.qubit_id

    def occupied_positions(self) -> list[Pos]:
        return list(self.qubit_positions)

    def adjacent_occupied_pairs(self) -> list[tuple[Pos, Pos]]:
        pairs = []
        for pos in self.qubit_positions:
            for d in ((1, 0), (0, 1)):
                nb = (pos[0] + d[0], pos[1] + d[1])
                if nb in self.dots and self.dots[nb].occupied:
                    pairs.append((pos, nb))
        return pairs

    # -- clock and noise --------------------------------------------------

    def _noise_window(self, duration: float, exclude: frozenset[Pos]) -> None:
        params = self.material.noise
        if not params.enabled or duration <= 0:
            return
        for pos in self.qubit_positions:
            if pos in exclude:
                continue
            q = self.dots[pos].qubit_id
            t2 = self.dots[pos].t2_override
            if self.state.is_vector:
                self.state = apply_idle_jumps(
                    self.state, q, duration, params, self._rng, T2_override=t2
                )
            else:
                self.state = idle_channel(
                    self.state, q, duration, params, T2_override=t2
                )

    def _residual_window(self, duration: float, exclude_pair=None) -> None:
        if not self.strict or duration <= 0:
            return
        for a, b in self.adjacent_occupied_pairs():
            if exclude_pair and {a, b} == set(exclude_pair):
                continue
            self.state = exchange_evolution(
                self.state,
                (self.dots[a].qubit_id, self.dots[b].qubit_id),
                self.material.J_off,
                duration,
            )

    def _advance(self, duration: float, kind: str, *, exclude=frozenset(),
                 exclude_pair=None, energy: float = 0.0, **log) -> dict:
        if duration < 0:
            raise StateError(f"negative event duration {duration}")
        before = self.clock
        self._noise_window(duration, frozenset(exclude))
        self._residual_window(duration, exclude_pair)
        self.clock = before + duration
        entry = {
            "event": kind,
            "clock_before": before,
            "clock_after": self.clock,
            "duration": duration,
            "energy": energy,
            **log,
        }
        self.events.append(entry)
        self._check_invariants()
        return entry

    def _check_invariants(self) -> None:
        occupied = [p for p, d in self.dots.items() if d.occupied]
        if len(occupied) != len(self.qubit_positions):
            raise StateError("occupancy and qubit map out of sync")
        ids = sorted(self.dots[p].qubit_id for p in occupied)
        if ids != list(range(len(occupied))):
            raise StateError(f"qubit ids not unique/contiguous: {ids}")
        for i, pos in enumerate(self.qubit_positions):
            if self.dots[pos].qubit_id != i:
                raise StateError(f"qubit map mismatch at {pos}")
        if self.state.n_qubits != len(occupied):
            raise StateError(
                f"register has {self.state.n_qubits} qubits, grid has {len(occupied)}"
            )

    # -- events -----------------------------------------------------------

    def init_qubit(self, pos: Pos) -> "DotArray":
        """Bring one spin-up electron into an empty dot; the register grows
        by a |0> qubit."""
        self._pos_check(pos)
        dot = self.dots[pos]
        if dot.occupied:
            raise BlockadeError(f"dot {pos} already holds an electron")
        if dot.role == "readout":
            raise StateError(f"dot {pos} is a readout dot")
        self.state = self.state.append_zero_qubit()
        dot.occupied = True
        dot.qubit_id = len(self.qubit_positions)
        self.qubit_positions.append(pos)
        self._advance(self.material.t_pulse, "init", pos=pos)
        return self

    def move_electron(self, src: Pos, dst: Pos) -> "DotArray":
        """Tunnel the electron, spin amplitudes intact, one hop over."""
        self._pos_check(src)
        self._pos_check(dst)
        if not self.dots[src].occupied:
            raise StateError(f"source dot {src} is empty")
        if self.dots[dst].occupied:
            raise BlockadeError(f"destination dot {dst} is occupied")
        if not self.adjacent(src, dst):
            raise AdjacencyError(f"{src} and {dst} are not grid neighbors")
        if self.dots[dst].role == "readout":
            raise StateError(f"cannot park a qubit on readout dot {dst}")
        qid = self.dots[src].qubit_id
        self.dots[dst].occupied = True
        self.dots[dst].qubit_id = qid
        self.dots[src].occupied = False
        self.dots[src].qubit_id = None
        self.qubit_positions[qid] = dst
        self._advance(self.material.t_hop, "move", src=src, dst=dst)
        return self

    def coupling_window(self, a: Pos, b: Pos, theta: float) -> "DotArray":
        """Lower the barrier between two neighboring qubits for the time
        that accumulates exchange pulse area theta = J_on*t/hbar."""
        if theta < 0:
            raise StateError(f"negative pulse area theta = {theta}")
        qa, qb = self.qubit_index(a), self.qubit_index(b)
        if not self.adjacent(a, b):
            raise AdjacencyError(f"{a} and {b} are not grid neighbors")
        if theta == 0:
            return self
        t = theta * HBAR_EV_S / self.material.J_on
        self.state = exchange_evolution(self.state, (qa, qb), self.material.J_on, t)
        self._advance(t, "coupling_window", exclude={a, b}, exclude_pair=(a, b),
                      a=a, b=b, theta=theta)
        return self

    def apply_gate_at(self, kind: str, positions: list[Pos], *,
                      axis=None, angle=None, theta=None) -> "DotArray":
        """Run one named gate on qubits addressed by grid position.

        Single-qubit gates take their Rabi-derived duration; two-qubit gates
        are exchange-composed and are booked as one coupling window."""
        targets = tuple(self.qubit_index(p) for p in positions)
        gate = Gate(kind, targets, axis=axis, angle=angle, theta=theta)
        mat = self.material
        exclude: set[Pos] = set()
        exclude_pair = None
        energy = 0.0
        if gate.n_targets == 1:
            rot = ROTATION_ANGLE.get(kind, abs(angle) if angle is not None else math.pi)
            duration = rot / (2.0 * math.pi) * mat.rabi_period
            energy = drive_report(
                mat.g_factor, mat.rabi_period, mat.gate_distance
            ).power * duration
        else:
            if not self.adjacent(*positions):
                raise AdjacencyError(f"{positions} are not grid neighbors")
            if kind == "SqrtSWAP":
                duration = mat.t_swap / 2.0
            elif kind == "ExchangeEvolve":
                duration = theta * HBAR_EV_S / mat.J_on
            else:
                duration = mat.t_swap
            exclude = set(positions)
            exclude_pair = tuple(positions)
        self.state = apply_gate(self.state, gate)
        self._advance(duration, "gate", exclude=exclude, exclude_pair=exclude_pair,
                      energy=energy, gate_kind=kind, positions=list(positions))
        return self

    def readout(self, qubit_pos: Pos, readout_pos: Pos, rng_seed=None) -> tuple[int, "DotArray"]:
        """Spin-to-charge readout: project the qubit in Z. A ground-state
        (spin-up, |0>) electron tunnels to the readout dot and registers a
        charge event; the excited spin stays put."""
        self._pos_check(readout_pos)
        rdot = self.dots[readout_pos]
        if rdot.role != "readout":
            raise StateError(f"dot {readout_pos} is not a readout dot")
        if rdot.occupied:
            raise BlockadeError(f"readout dot {readout_pos} is occupied")
        q = self.qubit_index(qubit_pos)
        rng = self._rng if rng_seed is None else as_rng(rng_seed)
        outcome, self.state = measure(self.state, q, "Z", rng)
        bit = outcome
        if self.material.readout_error > 0 and rng.random() < self.material.readout_error:
            bit = 1 - bit
        charge_event = bit == 0
        self._advance(
            self.material.readout_transfer + self.material.readout_measure,
            "readout",
            qubit=qubit_pos,
            readout=readout_pos,
            outcome=bit,
            charge_event=charge_event,
        )
        return bit, self

    def idle(self, t: float) -> "DotArray":
        """Let the array sit for t seconds; only noise and residual exchange act."""
        if t < 0:
            raise StateError(f"negative idle time {t}")
        self._advance(t, "idle", t=t)
        return self

    def residual_coupling_error(self, idle_t: float) -> dict[tuple[Pos, Pos], float]:
        """Accumulated off-state exchange pulse area J_off*t/hbar for every
        adjacent occupied pair. Query only; strict mode applies it."""
        if idle_t < 0:
            raise StateError(f"negative idle time {idle_t}")
        theta = self.material.J_off * idle_t / HBAR_EV_S
        return {pair: theta for pair in self.adjacent_occupied_pairs()}

    # -- export -----------------------------------------------------------

    def pulse_schedule(self):
        """The event log as a PulseSchedule (for replay or trajectory runs)."""
        from .noise import PulseEvent, PulseSchedule

        return PulseSchedule([
            PulseEvent(
                kind=e["event"],
                duration=e["duration"],
                energy=e.get("energy", 0.0),
            )
            for e in self.events
        ])

    def snapshot(self) -> dict:
        return {
            "width": self.width,
            "height": self.height,
            "dots": [
                {
                    "x": x,
                    "y": y,
                    "occupied": self.dots[(x, y)].occupied,
                    "role": self.dots[(x, y)].role,
                    "qubit_id": self.dots[(x, y)].qubit_id,
                }
                for y in range(self.height)
                for x in range(self.width)
            ],
            "clock": self.clock,
        }

    def snapshot_json(self) -> str:
        from .report import dumps_report

        return dumps_report(self.snapshot())
