"""Seeded experiment sweeps over (algorithm, K, L, c) grids.

For each (K, L, realization) one topology is generated and shared by every
algorithm and every c value, so comparisons are paired. Record lists are a
pure function of the configuration: realizations may run in parallel, and
the output is canonically sorted before use.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from .baselines import AlohaConfig, run_aloha, run_tdma
from .engine import run_prism
from .params import ProtocolParams, assign_labels, derive_params
from .topology import Seed, derive_subseed, generate

SWEEP_HEADER = "algorithm,K,L,q,c,p,g,seed,realization,network_rounds,completed,phases_used"
AGGREGATE_HEADER = "algorithm,K,L,c,n,mean_rounds,max_rounds,q25,q75,stddev,incomplete"

KNOWN_ALGORITHMS = ("prism", "aloha", "tdma")

# Stream separator so ALOHA's transmission draws never reuse the topology
# sub-seed stream.
_ALOHA_TAG = 0xA70A


@dataclass(frozen=True)
class ExperimentConfig:
    algorithms: tuple[str, ...]
    K_values: tuple[int, ...]
    L_values: tuple[int, ...]
    c_values: tuple[float, ...]
    delta: float = 1.0
    realizations: int = 200
    master_seed: int = 0
    max_phase_multiplier: float = 10.0
    aloha_p_tx: float | None = None  # None -> 1/L

    def __post_init__(self):
        for a in self.algorithms:
            if a not in KNOWN_ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}")
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")
        if not self.K_values or not self.L_values:
            raise ValueError("K_values and L_values must be nonempty")
        if "prism" in self.algorithms and not self.c_values:
            raise ValueError("c_values must be nonempty when sweeping prism")
        if min(self.K_values) <= max(self.L_values):
            raise ValueError("all K values must exceed all L values")
        if self.max_phase_multiplier <= 0:
            raise ValueError("max_phase_multiplier must be positive")

    @staticmethod
    def from_dict(obj: dict) -> "ExperimentConfig":
        return ExperimentConfig(
            algorithms=tuple(obj["algorithms"]),
            K_values=tuple(int(k) for k in obj["K_values"]),
            L_values=tuple(int(l) for l in obj["L_values"]),
            c_values=tuple(float(c) for c in obj.get("c_values", ())),
            delta=float(obj.get("delta", 1.0)),
            realizations=int(obj.get("realizations", 200)),
            master_seed=int(obj.get("master_seed", 0)),
            max_phase_multiplier=float(obj.get("max_phase_multiplier", 10.0)),
            aloha_p_tx=(None if obj.get("aloha_p_tx") is None else float(obj["aloha_p_tx"])),
        )

    @staticmethod
    def from_json_file(path: str) -> "ExperimentConfig":
        with open(path) as f:
            return ExperimentConfig.from_dict(json.load(f))


@dataclass(frozen=True)
class SweepRecord:
    algorithm: str
    K: int
    L: int
    q: int
    c: float
    p: int
    g: int
    seed: int
    realization: int
    network_rounds: int
    completed: bool
    phases_used: int

    def sort_key(self):
        return (self.algorithm, self.K, self.L, self.c, self.realization)


@dataclass(frozen=True)
class AggregateRow:
    algorithm: str
    K: int
    L: int
    c: float
    n: int
    mean_rounds: float
    max_rounds: int
    q25: int
    q75: int
    stddev: float
    incomplete: int


def sweep_params(K: int, L: int, c: float, delta: float) -> ProtocolParams:
    """derive_params, but tolerant of grid points at or below c = 1:
    q still comes out as the smallest prime > L, showing the degradation
    left of the optimum without special-casing the sweep grid."""
    if c > 1:
        return derive_params(K, L, c, delta)
    strict = derive_params(K, L, 1.0 + 1e-12, delta)
    return ProtocolParams(
        K=strict.K, L=strict.L, c=c, delta=strict.delta,
        p=strict.p, q=strict.q, g=strict.g, M=strict.M, W=strict.W,
    )


def _realization_records(
    cfg: ExperimentConfig, K: int, L: int, realization: int
) -> list[SweepRecord]:
    records: list[SweepRecord] = []
    topo_seed = derive_subseed(cfg.master_seed, K, L, realization)
    topo = generate(K, L, Seed(cfg.master_seed, realization))
    for algorithm in cfg.algorithms:
        if algorithm == "prism":
            for c in cfg.c_values:
                params = sweep_params(K, L, c, cfg.delta)
                labels = assign_labels(params)
                max_phases = math.ceil(cfg.max_phase_multiplier * params.M)
                res = run_prism(topo, params, labels, max_phases=max_phases)
                records.append(SweepRecord(
                    algorithm="prism", K=K, L=L, q=params.q, c=c,
                    p=params.p, g=params.g, seed=topo_seed,
                    realization=realization,
                    network_rounds=res.network_rounds,
                    completed=res.completed, phases_used=res.phases_used,
                ))
        elif algorithm == "aloha":
            params = sweep_params(K, L, max(cfg.c_values, default=2.0), cfg.delta)
            labels = assign_labels(params)
            p_tx = cfg.aloha_p_tx if cfg.aloha_p_tx is not None else 1.0 / L
            budget = math.ceil(cfg.max_phase_multiplier) * K
            aloha_seed = derive_subseed(cfg.master_seed, K, L, realization, _ALOHA_TAG)
            res = run_aloha(topo, AlohaConfig(p_tx=p_tx, max_rounds=budget), labels, aloha_seed)
            records.append(SweepRecord(
                algorithm="aloha", K=K, L=L, q=0, c=0.0, p=0, g=0,
                seed=topo_seed, realization=realization,
                network_rounds=res.network_rounds,
                completed=res.completed, phases_used=res.phases_used,
            ))
        elif algorithm == "tdma":
            params = sweep_params(K, L, max(cfg.c_values, default=2.0), cfg.delta)
            labels = assign_labels(params)
            res = run_tdma(topo, labels)
            records.append(SweepRecord(
                algorithm="tdma", K=K, L=L, q=0, c=0.0, p=0, g=0,
                seed=topo_seed, realization=realization,
                network_rounds=res.network_rounds,
                completed=res.completed, phases_used=res.phases_used,
            ))
    return records


def _task(args) -> list[SweepRecord]:
    return _realization_records(*args)


def run_sweep(cfg: ExperimentConfig, jobs: int = 1) -> list[SweepRecord]:
    """Execute the full grid; output is sorted by
    (algorithm, K, L, c, realization) regardless of execution order."""
    tasks = [
        (cfg, K, L, r)
        for K in cfg.K_values
        for L in cfg.L_values
        for r in range(cfg.realizations)
    ]
    records: list[SweepRecord] = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for chunk in pool.map(_task, tasks, chunksize=8):
                records.extend(chunk)
    else:
        for t in tasks:
            records.extend(_task(t))
    records.sort(key=SweepRecord.sort_key)
    return records


def _nearest_rank(sorted_values: list[int], fraction: float) -> int:
    n = len(sorted_values)
    rank = max(1, math.ceil(fraction * n))
    return sorted_values[rank - 1]


def aggregate(records: list[SweepRecord]) -> list[AggregateRow]:
    """Group by (algorithm, K, L, c); statistics cover completed runs, and
    budget-exhausted runs are surfaced in the incomplete count."""
    groups: dict[tuple, list[SweepRecord]] = {}
    for rec in records:
        groups.setdefault((rec.algorithm, rec.K, rec.L, rec.c), []).append(rec)
    rows = []
    for key in sorted(groups):
        algorithm, K, L, c = key
        recs = groups[key]
        done = sorted(r.network_rounds for r in recs if r.completed)
        incomplete = sum(1 for r in recs if not r.completed)
        if done:
            arr = np.array(done, dtype=np.float64)
            rows.append(AggregateRow(
                algorithm=algorithm, K=K, L=L, c=c, n=len(done),
                mean_rounds=float(arr.mean()), max_rounds=int(done[-1]),
                q25=_nearest_rank(done, 0.25), q75=_nearest_rank(done, 0.75),
                stddev=float(arr.std()), incomplete=incomplete,
            ))
        else:
            rows.append(AggregateRow(
                algorithm=algorithm, K=K, L=L, c=c, n=0,
                mean_rounds=0.0, max_rounds=0, q25=0, q75=0,
                stddev=0.0, incomplete=incomplete,
            ))
    return rows


def fit_scaling(
    rows: list[AggregateRow],
    L: int,
    metric: str,
    algorithm: str = "prism",
    c: float | None = None,
) -> dict:
    """OLS of the chosen metric against L*ln(K); the log2 slope is the
    exact rescaling slope_ln * ln 2 (intercept and R^2 are base-invariant).
    """
    if metric not in ("mean", "max"):
        raise ValueError("metric must be 'mean' or 'max'")
    sel = [r for r in rows if r.algorithm == algorithm and r.L == L]
    if c is not None:
        sel = [r for r in sel if r.c == c]
    else:
        cs = sorted({r.c for r in sel})
        if len(cs) > 1:
            raise ValueError(f"ambiguous c values {cs}; pass c explicitly")
    ks = sorted({r.K for r in sel})
    if len(ks) < 3:
        raise ValueError("need at least 3 distinct K values to fit")
    sel.sort(key=lambda r: r.K)
    x = np.array([L * math.log(r.K) for r in sel])
    y = np.array([r.mean_rounds if metric == "mean" else float(r.max_rounds) for r in sel])
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(((y - pred) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r_squared = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return {
        "L": L,
        "metric": metric,
        "slope_ln": float(slope),
        "slope_log2": float(slope) * math.log(2),
        "intercept": float(intercept),
        "r_squared": r_squared,
    }


def heatmap_table(
    rows: list[AggregateRow],
    metric: str,
    algorithm: str = "prism",
) -> dict[int, dict[float, float]]:
    """Per-K relative degradation over c: each cell divided by the row
    minimum, so the best c in every K row sits at exactly 1.0. Rows must
    already be filtered to one L."""
    if metric not in ("mean", "max"):
        raise ValueError("metric must be 'mean' or 'max'")
    sel = [r for r in rows if r.algorithm == algorithm]
    ls = {r.L for r in sel}
    if len(ls) > 1:
        raise ValueError(f"rows span multiple L values {sorted(ls)}; filter first")
    grid: dict[int, dict[float, float]] = {}
    for r in sel:
        value = r.mean_rounds if metric == "mean" else float(r.max_rounds)
        grid.setdefault(r.K, {})[r.c] = value
    out: dict[int, dict[float, float]] = {}
    for K, row in grid.items():
        best = min(row.values())
        out[K] = {c: v / best for c, v in sorted(row.items())}
    return out


def write_sweep_csv(records: list[SweepRecord], path: str) -> None:
    with open(path, "w", newline="") as f:
        f.write(SWEEP_HEADER + "\n")
        for r in records:
            f.write(
                f"{r.algorithm},{r.K},{r.L},{r.q},{r.c},{r.p},{r.g},{r.seed},"
                f"{r.realization},{r.network_rounds},"
                f"{'true' if r.completed else 'false'},{r.phases_used}\n"
            )


def read_sweep_csv(path: str) -> list[SweepRecord]:
    records = []
    with open(path) as f:
        header = f.readline().strip()
        if header != SWEEP_HEADER:
            raise ValueError(f"unexpected sweep header: {header}")
        for line in f:
            parts = line.strip().split(",")
            records.append(SweepRecord(
                algorithm=parts[0], K=int(parts[1]), L=int(parts[2]),
                q=int(parts[3]), c=float(parts[4]), p=int(parts[5]),
                g=int(parts[6]), seed=int(parts[7]), realization=int(parts[8]),
                network_rounds=int(parts[9]), completed=parts[10] == "true",
                phases_used=int(parts[11]),
            ))
    return records


def write_aggregate_csv(rows: list[AggregateRow], path: str) -> None:
    with open(path, "w", newline="") as f:
        f.write(AGGREGATE_HEADER + "\n")
        for r in rows:
            f.write(
                f"{r.algorithm},{r.K},{r.L},{r.c},{r.n},{r.mean_rounds},"
                f"{r.max_rounds},{r.q25},{r.q75},{r.stddev},{r.incomplete}\n"
            )


def read_aggregate_csv(path: str) -> list[AggregateRow]:
    rows = []
    with open(path) as f:
        header = f.readline().strip()
        if header != AGGREGATE_HEADER:
            raise ValueError(f"unexpected aggregate header: {header}")
        for line in f:
            parts = line.strip().split(",")
            rows.append(AggregateRow(
                algorithm=parts[0], K=int(parts[1]), L=int(parts[2]),
                c=float(parts[3]), n=int(parts[4]), mean_rounds=float(parts[5]),
                max_rounds=int(parts[6]), q25=int(parts[7]), q75=int(parts[8]),
                stddev=float(parts[9]), incomplete=int(parts[10]),
            ))
    return rows
