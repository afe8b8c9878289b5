"""Protocol configuration: derive (p, q, g, M, W) from (K, L, c, delta)
and assign transmitter labels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

from .numtheory import factorize, mod_pow, next_prime


@dataclass(frozen=True)
class ProtocolParams:
    """Full static configuration of one protocol instance.

    K: transmitter/receiver count
    L: maximum receiver degree
    c: round-budget ratio q/L requested by the caller (q is then rounded
       up to a prime)
    delta: failure exponent for the probabilistic phase budget
    p: label modulus, prime > K
    q: rounds per phase, prime > L
    g: generator of the multiplicative group mod p
    M: phase budget for the probabilistic regime
    W: window length for the deterministic-separation check
    """

    K: int
    L: int
    c: float
    delta: float
    p: int
    q: int
    g: int
    M: int
    W: int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class LabelAssignment:
    """Distinct initial labels in [1, p-1], one per transmitter id 1..K."""

    labels: dict[int, int]

    def label_of(self, tx_id: int) -> int:
        return self.labels[tx_id]

    def id_of_label(self, label: int) -> int | None:
        return self._inverse().get(label)

    def _inverse(self) -> dict[int, int]:
        inv = getattr(self, "_inv_cache", None)
        if inv is None:
            inv = {x: i for i, x in self.labels.items()}
            object.__setattr__(self, "_inv_cache", inv)
        return inv


def choose_generator(p: int, q: int) -> int:
    """Deterministic generator selection for the label-cycling step.

    A pair of labels whose difference keeps landing on a collision-
    admissible residue stays collided for about log_s(p/q) consecutive
    phases, where s = min(g, p-g, g^-1 mod p, p - g^-1 mod p): tiny
    multipliers in either direction (or with either sign) produce long
    stuck runs that dominate completion time. We therefore take the
    smallest primitive root whose multiplier spread s exceeds q, falling
    back to the smallest primitive root when p is too small to offer one.
    """
    phi = p - 1
    prime_factors = sorted(set(factorize(phi)))
    fallback = None
    for g in range(2, p):
        if any(mod_pow(g, phi // r, p) == 1 for r in prime_factors):
            continue
        if fallback is None:
            fallback = g
        inv = pow(g, -1, p)
        if min(g, p - g, inv, p - inv) > q:
            return g
    if fallback is None:
        raise AssertionError(f"no primitive root found for prime {p}")
    return fallback


def survival_probability(L: int, q: int) -> float:
    """Analytic per-phase survival bound for a false candidate: L^2/(2 q^2),
    clipped to 1/2 so the phase-budget formula stays finite."""
    return min(L * L / (2.0 * q * q), 0.5)


def derive_params(K: int, L: int, c: float, delta: float) -> ProtocolParams:
    """Derive the complete configuration.

    p  = smallest prime > K
    q  = smallest prime >= ceil(c*L) that is also > L
    g  = choose_generator(p, q)
    M  = floor((delta+1) * ln K / ln(1/P_survive)) + 1
    W  = ceil(2 * q * ln p)
    """
    if K < 2:
        raise ValueError("K must be >= 2")
    if not 1 <= L < K:
        raise ValueError("L must satisfy 1 <= L < K")
    if not c > 1:
        raise ValueError("c must be > 1")
    if delta < 0:
        raise ValueError("delta must be >= 0")
    p = next_prime(K)
    q = next_prime(max(L, math.ceil(c * L) - 1))
    if p == q:  # coprimality is load-bearing; p only needs to exceed K
        p = next_prime(p)
    g = choose_generator(p, q)
    p_surv = survival_probability(L, q)
    M = math.floor((delta + 1) * math.log(K) / math.log(1.0 / p_surv)) + 1
    W = math.ceil(2 * q * math.log(p))
    return ProtocolParams(K=K, L=L, c=c, delta=delta, p=p, q=q, g=g, M=M, W=W)


def assign_labels(params: ProtocolParams) -> LabelAssignment:
    """Identity label assignment: transmitter i gets initial label i.

    Valid because p > K, so every i in 1..K lies in [1, p-1]; identity keeps
    runs reproducible and makes decoded labels directly readable as ids.
    """
    return LabelAssignment(labels={i: i for i in range(1, params.K + 1)})
