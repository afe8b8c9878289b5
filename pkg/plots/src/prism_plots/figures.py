"""Render experiment figures from aggregate CSV files.

The only input contract is the aggregate CSV emitted by the experiment
harness, with header

    algorithm,K,L,c,n,mean_rounds,max_rounds,q25,q75,stddev,incomplete

Everything here is read-only with respect to that file.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.fonttype"] = "none"
matplotlib.rcParams["svg.hashsalt"] = "prism-plots"

import matplotlib.pyplot as plt
import numpy as np

FIGURES = ("heatmap_mean", "heatmap_max", "scaling_mean", "scaling_max", "comparison")

# Columns each figure reads, in the order missing ones are reported.
REQUIRED_COLUMNS = {
    "heatmap_mean": ("algorithm", "K", "L", "c", "mean_rounds"),
    "heatmap_max": ("algorithm", "K", "L", "c", "max_rounds"),
    "scaling_mean": ("algorithm", "K", "L", "c", "mean_rounds", "q25", "q75"),
    "scaling_max": ("algorithm", "K", "L", "c", "max_rounds"),
    "comparison": ("algorithm", "K", "L", "c", "mean_rounds"),
}

_INT_COLUMNS = ("K", "L", "n", "max_rounds", "incomplete")
_FLOAT_COLUMNS = ("c", "mean_rounds", "q25", "q75", "stddev")


class FigureError(ValueError):
    """Raised when the input CSV or figure request is unusable."""


@dataclass(frozen=True)
class FigureSpec:
    input: str
    figure: str
    out: str
    L: int | None = None
    c: float | None = None

    def __post_init__(self) -> None:
        if self.figure not in FIGURES:
            raise FigureError(f"unknown figure {self.figure!r}, expected one of {', '.join(FIGURES)}")


def load_aggregate(path: str, figure: str) -> list[dict]:
    """Read the aggregate CSV, checking the columns `figure` needs.

    Raises FigureError naming the first missing required column. Values
    are converted to int or float where the schema says so; columns
    outside the schema are kept as strings.
    """
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in REQUIRED_COLUMNS[figure]:
            if col not in header:
                raise FigureError(f"missing column {col!r} in {path}")
        rows = []
        for raw in reader:
            row: dict = dict(raw)
            for col in _INT_COLUMNS:
                if col in row:
                    row[col] = int(row[col])
            for col in _FLOAT_COLUMNS:
                if col in row:
                    row[col] = float(row[col])
            rows.append(row)
    if not rows:
        raise FigureError(f"no data rows in {path}")
    return rows


def _select(rows: list[dict], algorithm: str | None = None,
            L: int | None = None, c: float | None = None) -> list[dict]:
    out = rows
    if algorithm is not None:
        out = [r for r in out if r["algorithm"] == algorithm]
    if L is not None:
        out = [r for r in out if r["L"] == L]
    if c is not None:
        out = [r for r in out if math.isclose(r["c"], c)]
    return out


def _single_L(rows: list[dict], L: int | None) -> int:
    values = sorted({r["L"] for r in rows})
    if L is not None:
        if L not in values:
            raise FigureError(f"no rows with L={L}")
        return L
    if len(values) != 1:
        raise FigureError(f"multiple L values {values} present, pass an L filter")
    return values[0]


def relative_grid(rows: list[dict], metric: str, L: int | None = None):
    """Per-K relative degradation of `metric` over the (K, c) grid.

    Returns (K_values, c_values, matrix) where matrix[i][j] is the metric
    at (K_values[i], c_values[j]) divided by the minimum over that K row,
    so every row's minimum is exactly 1.0. Cells with no data are NaN.
    """
    rows = _select(rows, algorithm="prism", L=_single_L(_select(rows, algorithm="prism"), L))
    if not rows:
        raise FigureError("no prism rows to plot")
    K_values = sorted({r["K"] for r in rows})
    c_values = sorted({r["c"] for r in rows})
    grid = np.full((len(K_values), len(c_values)), np.nan)
    for r in rows:
        grid[K_values.index(r["K"]), c_values.index(r["c"])] = float(r[metric])
    for i in range(grid.shape[0]):
        row = grid[i]
        if np.all(np.isnan(row)):
            raise FigureError(f"empty heatmap row for K={K_values[i]}")
        grid[i] = row / np.nanmin(row)
    return K_values, c_values, grid


def _fit_against_L_logK(K: np.ndarray, y: np.ndarray, L: int):
    """Least-squares y = slope * (L * ln K) + intercept, slope also in log2."""
    x = L * np.log(K)
    if len(K) >= 2:
        slope, intercept = np.polyfit(x, y, 1)
    else:
        slope, intercept = 0.0, float(y[0])
    return float(slope), float(slope) * math.log(2.0), float(intercept)


def _render_heatmap(rows: list[dict], metric: str, spec: FigureSpec) -> None:
    K_values, c_values, grid = relative_grid(rows, metric, spec.L)
    fig, ax = plt.subplots(figsize=(1.2 + 0.9 * len(c_values), 1.0 + 0.6 * len(K_values)))
    im = ax.imshow(grid, aspect="auto", cmap="viridis", origin="lower")
    ax.set_xticks(range(len(c_values)), [f"{c:g}" for c in c_values])
    ax.set_yticks(range(len(K_values)), [str(k) for k in K_values])
    ax.set_xlabel("c (q selection multiplier)")
    ax.set_ylabel("K")
    label = "mean" if metric == "mean_rounds" else "max"
    ax.set_title(f"Relative degradation of {label} completion rounds")
    for i in range(len(K_values)):
        for j in range(len(c_values)):
            if not math.isnan(grid[i, j]):
                ax.text(j, i, f"{grid[i, j]:.2f}", ha="center", va="center",
                        color="white", fontsize=8)
    fig.colorbar(im, ax=ax, label=f"{label} / per-K minimum")
    fig.tight_layout()
    fig.savefig(spec.out)
    plt.close(fig)


def _scaling_series(rows: list[dict], spec: FigureSpec) -> tuple[list[dict], int, float]:
    prism = _select(rows, algorithm="prism", c=spec.c)
    L = _single_L(prism, spec.L)
    prism = _select(prism, L=L)
    c_values = sorted({r["c"] for r in prism})
    if len(c_values) != 1:
        raise FigureError(f"multiple c values {c_values} present, pass a c filter")
    prism.sort(key=lambda r: r["K"])
    return prism, L, c_values[0]


def _render_scaling(rows: list[dict], metric: str, spec: FigureSpec) -> None:
    series, L, c = _scaling_series(rows, spec)
    K = np.array([r["K"] for r in series], dtype=float)
    y = np.array([float(r[metric]) for r in series])
    _, slope_log2, intercept = _fit_against_L_logK(K, y, L)

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    label = "mean" if metric == "mean_rounds" else "max"
    ax.plot(K, y, "o-", color="tab:blue", label=f"{label} rounds")
    if metric == "mean_rounds":
        lo = np.array([r["q25"] for r in series])
        hi = np.array([r["q75"] for r in series])
        ax.fill_between(K, lo, hi, color="tab:blue", alpha=0.2, label="q25-q75")
    fit = slope_log2 * L * np.log2(K) + intercept
    ax.plot(K, fit, "--", color="tab:red",
            label=f"fit {slope_log2:.2f} L log2 K {intercept:+.1f}")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("K")
    ax.set_ylabel("network rounds")
    ax.set_title(f"Scaling of {label} completion rounds (L={L}, c={c:g})")
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out)
    plt.close(fig)


def _render_comparison(rows: list[dict], spec: FigureSpec) -> None:
    rows = _select(rows, L=spec.L) if spec.L is not None else rows
    L = _single_L(rows, None)
    rows = _select(rows, L=L)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for algorithm in sorted({r["algorithm"] for r in rows}):
        sub = _select(rows, algorithm=algorithm, c=spec.c if algorithm == "prism" else None)
        # With several c values per K, plot the best-tuned curve.
        best: dict[int, float] = {}
        for r in sub:
            k = r["K"]
            if k not in best or r["mean_rounds"] < best[k]:
                best[k] = r["mean_rounds"]
        K = sorted(best)
        ax.plot(K, [best[k] for k in K], "o-", label=algorithm)
    ax.set_xscale("log", base=2)
    ax.set_xlabel("K")
    ax.set_ylabel("mean network rounds")
    ax.set_title(f"Mean completion time by algorithm (L={L})")
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out)
    plt.close(fig)


def render(spec: FigureSpec) -> str:
    """Render the requested figure and return the output path."""
    rows = load_aggregate(spec.input, spec.figure)
    if spec.figure == "heatmap_mean":
        _render_heatmap(rows, "mean_rounds", spec)
    elif spec.figure == "heatmap_max":
        _render_heatmap(rows, "max_rounds", spec)
    elif spec.figure == "scaling_mean":
        _render_scaling(rows, "mean_rounds", spec)
    elif spec.figure == "scaling_max":
        _render_scaling(rows, "max_rounds", spec)
    else:
        _render_comparison(rows, spec)
    return spec.out
