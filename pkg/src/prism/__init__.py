"""Deterministic topology discovery on a slotted collision channel:
residue-cycled scheduling, convergence certification, baselines, and a
reproducible experiment harness."""

from .params import ProtocolParams, LabelAssignment, derive_params, assign_labels
from .topology import Seed, Topology, generate, validate
from .engine import SimResult, run_prism
from .baselines import AlohaConfig, run_aloha, run_tdma

__all__ = [
    "ProtocolParams",
    "LabelAssignment",
    "derive_params",
    "assign_labels",
    "Seed",
    "Topology",
    "generate",
    "validate",
    "SimResult",
    "run_prism",
    "AlohaConfig",
    "run_aloha",
    "run_tdma",
]
