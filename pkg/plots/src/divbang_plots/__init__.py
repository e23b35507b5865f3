"""Render barrier-sweep curves and value surfaces from divbang CSV outputs."""

__version__ = "0.1.0"

from .figures import (
    GridSeries,
    PlotJob,
    SweepSeries,
    read_grid_csv,
    read_intervals_csv,
    read_sweep_csv,
    render_barrier_curves,
    render_value_surfaces,
)

__all__ = [
    "GridSeries",
    "PlotJob",
    "SweepSeries",
    "read_grid_csv",
    "read_intervals_csv",
    "read_sweep_csv",
    "render_barrier_curves",
    "render_value_surfaces",
    "__version__",
]
