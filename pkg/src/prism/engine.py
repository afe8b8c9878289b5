"""Residue-cycled discovery protocol on a slotted collision channel.

A run proceeds in phases of q rounds. In phase phi every transmitter's
label is multiplied by the generator g mod p, and the transmitter is
active only in round (label mod q), sending its *initial* label as
payload. Receivers cross off candidates on silence and singleton rounds;
collisions reveal nothing.

Two execution paths produce identical results:

* a vectorized path for exact-degree-L topologies (completion is then
  equivalent to having heard all L neighbors as singletons), used for
  large Monte Carlo sweeps;
* a plain per-round path built from ``observe`` and ``receiver_update``,
  used for irregular topologies and as the readable reference.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .numtheory import mod_pow
from .params import LabelAssignment, ProtocolParams
from .topology import Topology


class SimulationError(RuntimeError):
    """Internal invariant breach (e.g. a decoded label with no owner)."""


class ObservationKind(str, enum.Enum):
    SILENCE = "silence"
    SINGLETON = "singleton"
    COLLISION = "collision"


@dataclass(frozen=True)
class RoundObservation:
    """Channel outcome at one receiver for one round."""

    kind: ObservationKind
    label: int | None = None

    def __post_init__(self):
        if (self.kind is ObservationKind.SINGLETON) != (self.label is not None):
            raise ValueError("exactly singleton observations carry a label")


@dataclass
class TransmitterState:
    id: int
    x0: int
    x_current: int


@dataclass
class ReceiverState:
    """Candidate-elimination state machine of one receiver."""

    id: int
    candidates: set[int]
    discovered: set[int] = field(default_factory=set)
    complete_at: int | None = None  # 1-based global round index


@dataclass
class SimResult:
    completed: bool
    network_rounds: int
    phases_used: int
    per_receiver_rounds: dict[int, int | None]
    discovered: dict[int, tuple[int, ...]]
    trace: list[tuple[int, int, int, str, int | None]] | None = None

    def to_dict(self) -> dict:
        return {
            "completed": self.completed,
            "network_rounds": self.network_rounds,
            "phases_used": self.phases_used,
            "per_receiver_rounds": {str(j): r for j, r in self.per_receiver_rounds.items()},
            "discovered": {str(j): list(d) for j, d in self.discovered.items()},
        }


TRACE_HEADER = "phase,round,receiver,kind,label"


def advance_labels(states: list[TransmitterState], params: ProtocolParams) -> list[TransmitterState]:
    """One phase step: multiply every current label by g mod p.

    Multiplication by a generator permutes [1, p-1], so distinct labels
    stay distinct.
    """
    for s in states:
        s.x_current = s.x_current * params.g % params.p
    return states


def round_of(x_current: int, params: ProtocolParams) -> int:
    """Round index in [0, q-1] a label maps to this phase."""
    return x_current % params.q


def observe(
    topology: Topology,
    receiver_id: int,
    transmitting: list[tuple[int, int]],
) -> RoundObservation:
    """Collision-channel outcome at one receiver given the globally active
    (transmitter id, payload label) pairs this round."""
    nbrs = topology.neighbors[receiver_id]
    active = [(i, lab) for i, lab in transmitting if i in nbrs]
    if not active:
        return RoundObservation(ObservationKind.SILENCE)
    if len(active) == 1:
        return RoundObservation(ObservationKind.SINGLETON, label=active[0][1])
    return RoundObservation(ObservationKind.COLLISION)


def receiver_update(
    state: ReceiverState,
    phase: int,
    round_idx: int,
    obs: RoundObservation,
    params: ProtocolParams,
    labels: LabelAssignment,
) -> ReceiverState:
    """Apply one round's observation to a receiver.

    Silence clears every candidate mapped to this round; a singleton
    additionally moves the decoded transmitter into the discovered set;
    a collision changes nothing. Completion triggers when the candidate
    set empties or L neighbors have been discovered.
    """
    if state.complete_at is not None:
        return state
    if obs.kind is ObservationKind.COLLISION:
        return state
    gp = mod_pow(params.g, phase, params.p)
    mapped = {
        i
        for i in state.candidates
        if (labels.label_of(i) * gp % params.p) % params.q == round_idx
    }
    if obs.kind is ObservationKind.SINGLETON:
        tx = labels.id_of_label(obs.label)
        if tx is None:
            raise SimulationError(f"decoded label {obs.label} has no assigned transmitter")
        state.discovered.add(tx)
    state.candidates -= mapped
    state.candidates -= state.discovered
    if not state.candidates or len(state.discovered) == params.L:
        state.complete_at = (phase - 1) * params.q + round_idx + 1
    return state


def run_prism(
    topology: Topology,
    params: ProtocolParams,
    labels: LabelAssignment,
    max_phases: int | None = None,
    record_trace: bool = False,
) -> SimResult:
    """Execute the protocol until every receiver completes or the phase
    budget runs out.

    max_phases defaults to 10 * M (the probabilistic budget with headroom).
    Rounds are counted 1-based and globally; a receiver's completion round
    is the exact round of its completing observation, and the network total
    includes only the elapsed part of the final phase.
    """
    if max_phases is None:
        max_phases = 10 * params.M
    if max_phases < 1:
        raise ValueError("max_phases must be >= 1")
    degrees = [len(topology.neighbors[j]) for j in range(1, topology.K + 1)]
    if all(d == params.L for d in degrees) and not record_trace:
        return _run_vectorized(topology, params, labels, max_phases)
    return _run_reference(topology, params, labels, max_phases, record_trace)


def _run_vectorized(
    topology: Topology,
    params: ProtocolParams,
    labels: LabelAssignment,
    max_phases: int,
) -> SimResult:
    # With exact degree L, the candidate set always contains every
    # undiscovered true neighbor, so it cannot empty before the L-th
    # singleton; completion reduces to "heard all L neighbors".
    K, L, p, q, g = params.K, params.L, params.p, params.q, params.g
    nbr = topology.neighbor_array()  # (K, L), ids
    x0 = np.array([labels.label_of(i) for i in range(1, K + 1)], dtype=np.int64)
    rows = np.repeat(np.arange(K), L)
    first_heard = np.full((K, L), -1, dtype=np.int64)
    complete_at = np.full(K, -1, dtype=np.int64)
    gpow = 1
    phases_used = max_phases
    completed = False
    for phase in range(1, max_phases + 1):
        gpow = gpow * g % p
        y = (x0 * gpow) % p % q
        y_n = y[nbr - 1]  # (K, L) round index of each neighbor
        counts = np.bincount(rows * q + y_n.ravel(), minlength=K * q).reshape(K, q)
        heard = counts[np.arange(K)[:, None], y_n] == 1
        new = heard & (first_heard < 0) & (complete_at < 0)[:, None]
        first_heard[new] = (phase - 1) * q + y_n[new] + 1
        done_now = (complete_at < 0) & (first_heard >= 0).all(axis=1)
        complete_at[done_now] = first_heard[done_now].max(axis=1)
        if (complete_at >= 0).all():
            completed = True
            phases_used = phase
            break
    per_receiver: dict[int, int | None] = {}
    discovered: dict[int, tuple[int, ...]] = {}
    for j in range(K):
        per_receiver[j + 1] = int(complete_at[j]) if complete_at[j] >= 0 else None
        discovered[j + 1] = tuple(int(i) for i in nbr[j][first_heard[j] >= 0])
    network_rounds = int(complete_at.max()) if completed else max_phases * q
    return SimResult(
        completed=completed,
        network_rounds=network_rounds,
        phases_used=phases_used,
        per_receiver_rounds=per_receiver,
        discovered=discovered,
    )


def _run_reference(
    topology: Topology,
    params: ProtocolParams,
    labels: LabelAssignment,
    max_phases: int,
    record_trace: bool,
) -> SimResult:
    K, q = topology.K, params.q
    txs = [TransmitterState(i, labels.label_of(i), labels.label_of(i)) for i in range(1, K + 1)]
    rxs = [ReceiverState(j, candidates=set(range(1, K + 1))) for j in range(1, K + 1)]
    trace: list[tuple] | None = [] if record_trace else None
    phases_used = max_phases
    completed = False
    for phase in range(1, max_phases + 1):
        advance_labels(txs, params)
        schedule: dict[int, list[tuple[int, int]]] = {r: [] for r in range(q)}
        for s in txs:
            schedule[round_of(s.x_current, params)].append((s.id, s.x0))
        for r in range(q):
            transmitting = schedule[r]
            for rx in rxs:
                obs = observe(topology, rx.id, transmitting)
                if trace is not None:
                    trace.append((phase, r, rx.id, obs.kind.value, obs.label))
                receiver_update(rx, phase, r, obs, params, labels)
        if all(rx.complete_at is not None for rx in rxs):
            completed = True
            phases_used = phase
            break
    per_receiver = {rx.id: rx.complete_at for rx in rxs}
    discovered = {rx.id: tuple(sorted(rx.discovered)) for rx in rxs}
    rounds_done = [r for r in per_receiver.values() if r is not None]
    network_rounds = max(rounds_done) if completed else max_phases * q
    return SimResult(
        completed=completed,
        network_rounds=network_rounds,
        phases_used=phases_used,
        per_receiver_rounds=per_receiver,
        discovered=discovered,
        trace=trace,
    )
