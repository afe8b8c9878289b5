"""Baseline discovery protocols under the same collision channel and
completion criterion: slotted random access (ALOHA) and a deterministic
one-transmitter-per-slot round robin (TDMA).

Both emit SimResult in the same shape as the main protocol so the sweep
harness treats every algorithm uniformly. For these baselines a "phase"
is a single slot, so phases_used equals network_rounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engine import SimResult
from .params import LabelAssignment
from .topology import Topology


@dataclass(frozen=True)
class AlohaConfig:
    """p_tx: per-slot transmission probability; max_rounds: slot budget."""

    p_tx: float
    max_rounds: int

    def __post_init__(self):
        if not 0 < self.p_tx <= 1:
            raise ValueError("p_tx must be in (0, 1]")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")


def run_aloha(
    topology: Topology,
    cfg: AlohaConfig,
    labels: LabelAssignment,
    seed: int,
) -> SimResult:
    """Slotted ALOHA discovery.

    Each slot, every transmitter independently sends its label with
    probability p_tx (one uniform draw per transmitter per slot, in id
    order, from PCG64(seed)). Receivers record a neighbor whenever a slot
    is a singleton in their neighborhood; with no schedule to predict,
    silence eliminates nothing, and a receiver completes only once all L
    neighbors are heard.
    """
    K, L = topology.K, topology.L
    nbr = topology.neighbor_array()
    rng = np.random.Generator(np.random.PCG64(seed))
    first_heard = np.full((K, L), -1, dtype=np.int64)
    complete_at = np.full(K, -1, dtype=np.int64)
    completed = False
    rounds = cfg.max_rounds
    for slot in range(1, cfg.max_rounds + 1):
        active = rng.random(K) < cfg.p_tx
        a = active[nbr - 1]  # (K, L)
        singleton = a & (a.sum(axis=1) == 1)[:, None]
        new = singleton & (first_heard < 0)
        first_heard[new] = slot
        done_now = (complete_at < 0) & (first_heard >= 0).all(axis=1)
        complete_at[done_now] = slot
        if (complete_at >= 0).all():
            completed = True
            rounds = slot
            break
    per_receiver: dict[int, int | None] = {}
    discovered: dict[int, tuple[int, ...]] = {}
    for j in range(K):
        per_receiver[j + 1] = int(complete_at[j]) if complete_at[j] >= 0 else None
        discovered[j + 1] = tuple(int(i) for i in nbr[j][first_heard[j] >= 0])
    return SimResult(
        completed=completed,
        network_rounds=rounds,
        phases_used=rounds,
        per_receiver_rounds=per_receiver,
        discovered=discovered,
    )


def run_tdma(topology: Topology, labels: LabelAssignment) -> SimResult:
    """Round-robin reference: transmitter i is alone on the channel in slot
    i, so receiver j hears each neighbor as a singleton in that neighbor's
    slot and completes at slot max(N(R_j)). Always finishes within K slots.
    """
    per_receiver: dict[int, int | None] = {}
    discovered: dict[int, tuple[int, ...]] = {}
    for j, nbrs in topology.neighbors.items():
        per_receiver[j] = max(nbrs)
        discovered[j] = tuple(sorted(nbrs))
    network_rounds = max(r for r in per_receiver.values() if r is not None)
    return SimResult(
        completed=True,
        network_rounds=network_rounds,
        phases_used=network_rounds,
        per_receiver_rounds=per_receiver,
        discovered=discovered,
    )
