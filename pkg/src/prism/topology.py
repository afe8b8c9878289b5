"""Seeded generation of (K, L)-bounded bipartite interference graphs.

Reproducibility contract: all randomness flows from a 64-bit master seed
through the SplitMix64 finalizer (sub-seed derivation) into numpy's PCG64
generator. Both algorithms are fixed and documented, so identical
(K, L, seed) inputs give identical graphs on any platform.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """SplitMix64 finalizer."""
    z &= _MASK64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


def derive_subseed(master: int, *values: int) -> int:
    """Fold a master seed and a tuple of integers into one 64-bit sub-seed.

    Each value advances the state by the SplitMix64 increment plus the
    value, then applies the finalizer; the chain is order-sensitive.
    """
    state = master & _MASK64
    for v in values:
        state = _mix64((state + _GAMMA + (v & _MASK64)) & _MASK64)
    return state


@dataclass(frozen=True)
class Seed:
    """Master seed plus realization index; sub-seeds are derived, never
    consumed directly."""

    master: int
    realization_index: int = 0


@dataclass(frozen=True)
class Topology:
    """Bipartite interference graph: receiver id -> sorted tuple of
    transmitter ids, all sets of size exactly L."""

    K: int
    L: int
    neighbors: dict[int, tuple[int, ...]]

    def to_json(self) -> str:
        return json.dumps(
            {
                "K": self.K,
                "L": self.L,
                "neighbors": {str(j): list(n) for j, n in self.neighbors.items()},
            }
        )

    @staticmethod
    def from_json(text: str) -> "Topology":
        obj = json.loads(text)
        return Topology(
            K=obj["K"],
            L=obj["L"],
            neighbors={int(j): tuple(n) for j, n in obj["neighbors"].items()},
        )

    def neighbor_array(self) -> np.ndarray:
        """(K, L) int array; row j-1 holds the neighbor ids of receiver j."""
        return np.array([self.neighbors[j] for j in range(1, self.K + 1)], dtype=np.int64)


def generate(K: int, L: int, seed: Seed) -> Topology:
    """Uniformly random L-subset of {1..K} per receiver, independently.

    Sampling: draw L ids with replacement, redraw any receiver row that
    contains a duplicate. Conditioned on distinctness the draw is uniform
    over ordered L-tuples, hence uniform over L-subsets.
    """
    if not 1 <= L < K:
        raise ValueError("generate requires 1 <= L < K")
    sub = derive_subseed(seed.master, K, L, seed.realization_index)
    rng = np.random.Generator(np.random.PCG64(sub))
    nbrs = rng.integers(1, K + 1, size=(K, L), dtype=np.int64)
    if L > 1:
        while True:
            rows_sorted = np.sort(nbrs, axis=1)
            bad = (np.diff(rows_sorted, axis=1) == 0).any(axis=1)
            if not bad.any():
                break
            nbrs[bad] = rng.integers(1, K + 1, size=(int(bad.sum()), L), dtype=np.int64)
    nbrs = np.sort(nbrs, axis=1)
    return Topology(
        K=K,
        L=L,
        neighbors={j + 1: tuple(int(x) for x in nbrs[j]) for j in range(K)},
    )


def validate(t: Topology) -> bool:
    """True iff every receiver 1..K has exactly L distinct neighbors, all
    with ids in [1, K]."""
    if set(t.neighbors.keys()) != set(range(1, t.K + 1)):
        return False
    for nbrs in t.neighbors.values():
        if len(nbrs) != t.L or len(set(nbrs)) != t.L:
            return False
        if any(not 1 <= i <= t.K for i in nbrs):
            return False
    return True
