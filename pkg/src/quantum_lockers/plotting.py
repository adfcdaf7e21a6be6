"""Figures written next to the CSV/JSON reports."""

from __future__ import annotations

import math
from pathlib import Path

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

GOLDEN = (math.sqrt(5) - 1) / 2


def _figure(width=6.4):
    fig = Figure(figsize=(width, width * GOLDEN))
    FigureCanvasAgg(fig)
    return fig, fig.add_subplot(1, 1, 1)


def figure_path(report_path, suffix=".png") -> Path:
    """``runs/pointer.csv`` -> ``runs/pointer.png``."""
    return Path(report_path).with_suffix(suffix)


def plot_report(report, path) -> Path:
    """Win frequency (±3 standard errors) per report row, with references."""
    rows = report.rows
    fig, ax = _figure()
    if report.sweep:
        name = report.sweep[0][0]
        xs = [values[name] for values in report.points]
    else:
        name = "configuration"
        xs = list(range(len(rows)))
    numeric = all(isinstance(x, (int, float)) for x in xs)
    pos = xs if numeric else list(range(len(xs)))
    freq = [row["frequency"] for row in rows]
    err = [3 * row["stderr"] for row in rows]
    ax.errorbar(pos, freq, yerr=err, fmt="o", capsize=3, label="simulated (±3 s.e.)")
    refs = [(x, row["reference"]) for x, row in zip(pos, rows) if row["reference"] is not None]
    if refs:
        rx, ry = zip(*refs)
        ax.plot(rx, ry, "x--", color="k", lw=0.8, label="closed form")
    if not numeric:
        ax.set_xticks(pos)
        ax.set_xticklabels([str(x) for x in xs], rotation=30)
    ax.set_xlabel(name)
    ax.set_ylabel("team win frequency")
    strategies = sorted({row["strategy"] for row in rows})
    ax.set_title(", ".join(strategies))
    ax.set_ylim(-0.02, 1.02)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    return Path(path)


def plot_grover_series(series, path, exact_iterations=None) -> Path:
    """Success probability against iteration count for one search-space size."""
    fig, ax = _figure()
    ks = [row["k"] for row in series]
    ax.plot(ks, [row["standard"] for row in series], "o-", ms=3, label="standard phases")
    if exact_iterations is not None:
        ax.axvline(exact_iterations, color="k", lw=0.8, ls=":", label="exact plan iterations")
    ax.set_xlabel("iterations")
    ax.set_ylabel("success probability")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path)
    return Path(path)
