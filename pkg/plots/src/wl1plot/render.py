"""Render benchmark CSVs as line figures.

Figures use the CSV's own aggregate rows (``trial == "mean"`` or
``seed == "mean"``) when present, so plotted values match the harness
output to full precision; otherwise values are averaged per x position.
Output is deterministic for identical input (fixed SVG hash salt, no
embedded dates).
"""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

matplotlib.rcParams["svg.hashsalt"] = "wl1plot"

# Axis labels with units for the harness's column names.
_LABELS = {
    "time_ns": "time (ns)",
    "time_ms": "time (ms)",
    "d": "vector size d",
    "a": "radius a",
    "radius": "radius",
    "l0": "L0 (entries above threshold)",
    "l1": "L1 norm",
    "rec": "relative reconstruction error",
    "ops_visited": "element visits",
    "support": "support size",
    "iters": "inner iterations",
}


class PlotDataError(ValueError):
    """Base class for figure-input problems."""


class MissingColumn(PlotDataError):
    """A requested column is absent from the CSV header."""


class EmptyData(PlotDataError):
    """The CSV holds no plottable rows."""


@dataclass
class FigureSpec:
    """What to plot: input CSV, columns, scales, output path."""

    csv_path: str
    x: str = "d"
    y: str = "time_ns"
    group: str = "algo"
    logx: bool = False
    logy: bool = False
    out_path: str = "figure.svg"


def load_series(spec: FigureSpec) -> dict[str, list[tuple[float, float]]]:
    """Read the CSV and return sorted (x, y) points per group."""
    with open(spec.csv_path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptyData(f"{spec.csv_path}: no header row")
        for col in (spec.x, spec.y, spec.group):
            if col not in reader.fieldnames:
                raise MissingColumn(
                    f"{spec.csv_path}: no column {col!r} in {reader.fieldnames}"
                )
        rows = list(reader)
    if not rows:
        raise EmptyData(f"{spec.csv_path}: no data rows")

    # Prefer the harness's aggregate rows; they are exact means.
    for marker in ("trial", "seed"):
        if marker in rows[0]:
            means = [r for r in rows if r[marker] == "mean"]
            if means:
                rows = means
            break

    gathered: dict[str, dict[float, list[float]]] = defaultdict(lambda: defaultdict(list))
    for row in rows:
        gathered[row[spec.group]][float(row[spec.x])].append(float(row[spec.y]))
    series = {}
    for name, points in gathered.items():
        series[name] = [
            (x, sum(ys) / len(ys)) for x, ys in sorted(points.items())
        ]
    return series


def build_figure(spec: FigureSpec):
    """Build the matplotlib figure (one line per group)."""
    series = load_series(spec)
    fig, ax = plt.subplots(figsize=(7, 5))
    for name in sorted(series):
        xs, ys = zip(*series[name])
        ax.plot(xs, ys, marker="o", label=name)
    if spec.logx:
        ax.set_xscale("log")
    if spec.logy:
        ax.set_yscale("log")
    ax.set_xlabel(_LABELS.get(spec.x, spec.x))
    ax.set_ylabel(_LABELS.get(spec.y, spec.y))
    ax.legend(title=spec.group)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> str:
    """Render the figure to ``spec.out_path`` (format from the extension).

    SVG output carries no timestamp, so identical inputs produce
    identical bytes.
    """
    fig = build_figure(spec)
    out = Path(spec.out_path)
    try:
        fig.savefig(out, metadata={"Date": None} if out.suffix == ".svg" else None)
    finally:
        plt.close(fig)
    return str(out)
