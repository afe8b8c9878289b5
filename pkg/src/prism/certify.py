"""Analytic bounds and the linear-time residue-alignment check that
certifies deterministic convergence for a given (p, q, g, W).

Two labels collide in a phase exactly when their difference r satisfies
(g^phi * r mod p) mod q in {0, p mod q}; since multiplication by g only
cyclically shifts the sequence across pairs, checking the representative
r = 1 covers all pairs. The certificate requires every cyclic window of
W consecutive phases to contain at most ceil(4W/q) marked (collision-
admissible) positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .params import ProtocolParams


@dataclass(frozen=True)
class WindowReport:
    p: int
    q: int
    g: int
    W: int
    threshold: int
    max_hits: int
    mark_count: int
    passed: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        return d


def mark_sequence(p: int, q: int, g: int) -> np.ndarray:
    """Boolean array of length p-1; entry phi is True iff
    (g^phi mod p) mod q lies in {0, p mod q} (representative r = 1)."""
    if q == p:
        raise ValueError("q must differ from p")
    powers = np.empty(p - 1, dtype=np.int64)
    x = 1
    for phi in range(p - 1):
        powers[phi] = x
        x = x * g % p
    residues = powers % q
    return (residues == 0) | (residues == p % q)


def check_window_property(p: int, q: int, g: int, W: int) -> WindowReport:
    """Slide a length-W cyclic window over all p-1 start positions and
    compare the worst mark count against the threshold ceil(4W/q).

    Incremental endpoint updates keep the sweep O(p) after the O(p) mark
    sequence construction.
    """
    n = p - 1
    if not 1 <= W <= n:
        raise ValueError("W must satisfy 1 <= W <= p-1")
    marks = mark_sequence(p, q, g).astype(np.int64)
    cur = int(marks[:W].sum())
    max_hits = cur
    for s in range(1, n):
        cur += int(marks[(s + W - 1) % n]) - int(marks[s - 1])
        if cur > max_hits:
            max_hits = cur
    mark_count = int(marks.sum())
    threshold = -(-4 * W // q)
    return WindowReport(
        p=p,
        q=q,
        g=g,
        W=W,
        threshold=threshold,
        max_hits=max_hits,
        mark_count=mark_count,
        passed=max_hits <= threshold,
    )


def survival_bound(L: int, q: int) -> float:
    """Per-phase survival probability bound L^2 / (2 q^2) for a false
    candidate, capped at 1."""
    if L < 1 or q < 1:
        raise ValueError("L and q must be >= 1")
    return min(L * L / (2.0 * q * q), 1.0)


def required_phases(K: int, L: int, q: int, delta: float) -> int:
    """Smallest integer M strictly exceeding
    (delta+1) * ln K / ln(1 / P_survive)."""
    if K < 2:
        raise ValueError("K must be >= 2")
    ps = survival_bound(L, q)
    if ps >= 1.0:
        raise ValueError("survival bound >= 1; increase q")
    return math.floor((delta + 1) * math.log(K) / math.log(1.0 / ps)) + 1


@dataclass(frozen=True)
class StuckBound:
    """Cap on consecutive phases a false candidate can stay collided with
    one fixed true neighbor. The derivation assumes g <= q; when the
    generator exceeds q the bound is still reported but flagged as not
    applicable."""

    bound: int
    applicable: bool

    def to_dict(self) -> dict:
        return asdict(self)


def stuck_phase_bound(p: int, q: int, g: int) -> StuckBound:
    """ceil(1 + log_g(p/q)), applicable iff g <= q."""
    if g < 2:
        raise ValueError("g must be >= 2")
    bound = math.ceil(1 + math.log(p / q) / math.log(g))
    return StuckBound(bound=bound, applicable=g <= q)


def empirical_survival(
    params: ProtocolParams,
    n_trials: int,
    seed: int,
) -> float:
    """Monte Carlo estimate of the per-phase survival probability.

    Each trial draws a false candidate plus L true neighbors with distinct
    labels uniform in [1, p-1], pushes them through one phase (multiply by
    g mod p), and checks whether the candidate's round holds at least two
    true neighbors (the only way it avoids elimination).
    """
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    p, g, q, L = params.p, params.g, params.q, params.L
    rng = np.random.Generator(np.random.PCG64(seed))
    labs = rng.integers(1, p, size=(n_trials, L + 1), dtype=np.int64)
    while True:
        rows_sorted = np.sort(labs, axis=1)
        bad = (np.diff(rows_sorted, axis=1) == 0).any(axis=1)
        if not bad.any():
            break
        labs[bad] = rng.integers(1, p, size=(int(bad.sum()), L + 1), dtype=np.int64)
    y = (labs * g % p) % q
    hits = (y[:, 1:] == y[:, :1]).sum(axis=1) >= 2
    return float(hits.mean())
