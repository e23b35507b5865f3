"""Figure construction from divbang sweep and grid CSVs.

The renderers return the prepared data series next to the written image so
callers (and tests) can assert on what was actually plotted instead of on
pixels. Input columns must match the producing command's schema; comment
lines (manifest hashes) are skipped.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

SWEEP_COLUMNS = ["branch", "barrier", "mean", "stderr", "ci_low", "ci_high"]
GRID_COLUMNS = ["x1", "x2", "v1_mean", "v1_stderr", "v2_mean", "v2_stderr"]
INTERVAL_COLUMNS = ["branch", "lambda_div", "x_star", "R1", "R2", "residual", "iterations"]


class SchemaError(ValueError):
    """An input CSV does not match the expected column layout."""


@dataclass(frozen=True)
class PlotJob:
    """One figure request.

    kind is 'barrier_curves' (two sweep CSVs) or 'value_surfaces' (one grid
    CSV); intervals optionally points at a barrier-solve CSV whose x_star
    values become vertical markers.
    """

    inputs: tuple[str, ...]
    kind: str
    output: str
    ci_band: bool = True
    intervals: str | None = None

    def __post_init__(self):
        if self.kind not in ("barrier_curves", "value_surfaces"):
            raise ValueError(f"unknown figure kind {self.kind!r}")


@dataclass(frozen=True)
class SweepSeries:
    """Plotted content of one barrier sweep: value against barrier level."""

    branch: int
    barriers: np.ndarray
    means: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray

    def argmax_barrier(self) -> float:
        return float(self.barriers[int(np.argmax(self.means))])

    def has_interior_maximum(self) -> bool:
        k = int(np.argmax(self.means))
        return 0 < k < self.barriers.size - 1


@dataclass(frozen=True)
class GridSeries:
    """Plotted content of the value surfaces over initial capital."""

    x1: np.ndarray
    x2: np.ndarray
    v1: np.ndarray  # masked (NaN) where the grid had no row
    v2: np.ndarray
    v1_stderr: np.ndarray
    v2_stderr: np.ndarray


def _read_rows(path: str | Path, expected: list[str]) -> list[list[float]]:
    header: list[str] | None = None
    rows: list[list[float]] = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = line.split(",")
            if header != expected:
                raise SchemaError(f"{path}: expected columns {expected}, got {header}")
            continue
        parts = line.split(",")
        if len(parts) != len(expected):
            raise SchemaError(f"{path}: row has {len(parts)} fields, expected {len(expected)}")
        rows.append([float(v) for v in parts])
    if header is None or not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def read_sweep_csv(path: str | Path) -> SweepSeries:
    rows = _read_rows(path, SWEEP_COLUMNS)
    branches = {int(r[0]) for r in rows}
    if len(branches) != 1:
        raise SchemaError(f"{path}: expected one branch per sweep file, got {sorted(branches)}")
    rows.sort(key=lambda r: r[1])
    return SweepSeries(
        branch=branches.pop(),
        barriers=np.array([r[1] for r in rows]),
        means=np.array([r[2] for r in rows]),
        ci_low=np.array([r[4] for r in rows]),
        ci_high=np.array([r[5] for r in rows]),
    )


def read_grid_csv(path: str | Path) -> GridSeries:
    rows = _read_rows(path, GRID_COLUMNS)
    x1 = np.array(sorted({r[0] for r in rows}))
    x2 = np.array(sorted({r[1] for r in rows}))
    pos1 = {v: i for i, v in enumerate(x1)}
    pos2 = {v: j for j, v in enumerate(x2)}
    shape = (x1.size, x2.size)
    v1 = np.full(shape, np.nan)
    v2 = np.full(shape, np.nan)
    s1 = np.full(shape, np.nan)
    s2 = np.full(shape, np.nan)
    for r in rows:
        i, j = pos1[r[0]], pos2[r[1]]
        v1[i, j], s1[i, j] = r[2], r[3]
        v2[i, j], s2[i, j] = r[4], r[5]
    return GridSeries(x1=x1, x2=x2, v1=v1, v2=v2, v1_stderr=s1, v2_stderr=s2)


def read_intervals_csv(path: str | Path) -> dict[int, tuple[float, float]]:
    """Per-branch (min, max) of the x_star values in a barrier-solve CSV."""
    rows = _read_rows(path, INTERVAL_COLUMNS)
    out: dict[int, tuple[float, float]] = {}
    for r in rows:
        branch, x_star = int(r[0]), r[2]
        lo, hi = out.get(branch, (x_star, x_star))
        out[branch] = (min(lo, x_star), max(hi, x_star))
    return out


def render_barrier_curves(job: PlotJob) -> tuple[Path, list[SweepSeries]]:
    """Two panels of value-vs-barrier curves with optional CI bands and
    interval markers. Returns the image path and the plotted series."""
    if job.kind != "barrier_curves":
        raise ValueError(f"job kind {job.kind!r} is not barrier_curves")
    if len(job.inputs) != 2:
        raise SchemaError("barrier_curves needs exactly two sweep CSVs")
    series = [read_sweep_csv(p) for p in job.inputs]
    markers = read_intervals_csv(job.intervals) if job.intervals else {}

    fig, axes = plt.subplots(1, 2, figsize=(11, 4.2))
    for ax, s in zip(axes, series):
        ax.plot(s.barriers, s.means, color="tab:blue", lw=1.5, label="estimated value")
        if job.ci_band:
            ax.fill_between(s.barriers, s.ci_low, s.ci_high, color="tab:blue", alpha=0.25,
                            label="95% CI")
        if s.branch in markers:
            for x in markers[s.branch]:
                ax.axvline(x, color="tab:gray", ls="--", lw=1.0)
        ax.set_xlabel(f"$x_{s.branch}^b$")
        ax.set_ylabel("value")
        ax.set_title(f"branch {s.branch} barrier sweep")
        ax.legend(loc="lower center", fontsize=8)
    fig.tight_layout()
    out = Path(job.output)
    fig.savefig(out, dpi=130)
    plt.close(fig)
    return out, series


def render_value_surfaces(job: PlotJob) -> tuple[Path, GridSeries]:
    """Both value surfaces over initial capital from two view angles, with
    the insolvent quadrant masked. Returns the image path and the series."""
    if job.kind != "value_surfaces":
        raise ValueError(f"job kind {job.kind!r} is not value_surfaces")
    if len(job.inputs) != 1:
        raise SchemaError("value_surfaces needs exactly one grid CSV")
    series = read_grid_csv(job.inputs[0])
    g1, g2 = np.meshgrid(series.x1, series.x2, indexing="ij")
    insolvent = (g1 < 0) & (g2 < 0)
    v1 = np.where(insolvent, np.nan, series.v1)
    v2 = np.where(insolvent, np.nan, series.v2)

    fig = plt.figure(figsize=(11, 4.6))
    for k, (elev, azim) in enumerate(((25, -60), (18, 150)), start=1):
        ax = fig.add_subplot(1, 2, k, projection="3d")
        ax.plot_surface(g1, g2, v1, cmap="viridis", alpha=0.85)
        ax.plot_surface(g1, g2, v2, cmap="autumn", alpha=0.6)
        ax.view_init(elev=elev, azim=azim)
        ax.set_xlabel("$x_1$")
        ax.set_ylabel("$x_2$")
        ax.set_zlabel("value")
    fig.suptitle("estimated values: branch-1 barrier (viridis) vs branch-2 barrier (autumn)")
    fig.tight_layout()
    out = Path(job.output)
    fig.savefig(out, dpi=130)
    plt.close(fig)
    return out, series
