"""Numerical evaluation of the dividend HJB residual on gridded candidates.

The checked equation, on the solvency set, is

    max{ 1_{x1>=0} (1 - V_x1),  1_{x2>=0} (1 - V_x2),  L(V) } = 0,

with L(V) = c1 V_x1 + c2 V_x2 - (q+lam) V + lam I(V) and I the claim-jump
integral operator along the ray (x1 - b1 a, x2 - b2 a). Candidate value
functions come from Monte-Carlo grids, so the module reports residuals
against noise-aware tolerances instead of asserting the equation.

Partials use central differences; the integral operator uses adaptive
quadrature against the exponential claim density with bilinear
interpolation inside the grid, the candidate extended by zero where both
coordinates are negative and by the linear-plus-exponential-decay bound
structure beyond the grid's negative-coordinate edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, TextIO

import numpy as np
from scipy.integrate import quad

from .model import ModelParams, SurplusPoint

_AXIS_TOL = 1e-9
_MAX_QUAD_POINTS = 64


@dataclass(frozen=True)
class GriddedFunction:
    """Rectangular-grid sampling of a candidate value function.

    Axes must be strictly increasing and uniform; ``values[i, j]`` is the
    sample at (x1[i], x2[j]).
    """

    x1: np.ndarray
    x2: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x1", np.asarray(self.x1, dtype=float))
        object.__setattr__(self, "x2", np.asarray(self.x2, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        for name, axis in (("x1", self.x1), ("x2", self.x2)):
            if axis.ndim != 1 or axis.size < 2:
                raise ValueError(f"{name} axis must be 1-d with at least 2 nodes")
            steps = np.diff(axis)
            if not (steps > 0).all():
                raise ValueError(f"{name} axis must be strictly increasing")
            if np.abs(steps - steps[0]).max() > _AXIS_TOL * max(1.0, abs(steps[0])):
                raise ValueError(f"{name} axis must be uniform")
        if self.values.shape != (self.x1.size, self.x2.size):
            raise ValueError(
                f"values shape {self.values.shape} does not match axes "
                f"({self.x1.size}, {self.x2.size})"
            )

    @property
    def step1(self) -> float:
        return float(self.x1[1] - self.x1[0])

    @property
    def step2(self) -> float:
        return float(self.x2[1] - self.x2[0])

    def in_hull(self, x: SurplusPoint) -> bool:
        return (
            self.x1[0] <= x.x1 <= self.x1[-1] and self.x2[0] <= x.x2 <= self.x2[-1]
        )


def make_evaluator(p: ModelParams, f: GriddedFunction) -> Callable[[float, float], float]:
    """Pointwise evaluator of the candidate on all of the solvency set.

    Inside the grid hull: bilinear interpolation. Both coordinates
    negative: zero. Beyond a lower grid edge: anchored at the edge value
    and decaying like exp((q+lam) (u - edge)/c) toward the
    other-branch-only floor, mirroring the closed-form bound structure.
    Grids are expected to cover the zero boundary; below both edges at once
    the two decays are applied jointly from the corner value.
    """
    x1, x2, v = f.x1, f.x2, f.values
    h1, h2 = f.step1, f.step2
    a1lo, a2lo = float(x1[0]), float(x2[0])
    n1, n2 = x1.size, x2.size
    ql = p.q + p.lam
    c1, c2 = p.c1, p.c2

    def bilinear(u1: float, u2: float) -> float:
        s = min(max((u1 - a1lo) / h1, 0.0), n1 - 1.0)
        t = min(max((u2 - a2lo) / h2, 0.0), n2 - 1.0)
        i = min(int(s), n1 - 2)
        j = min(int(t), n2 - 2)
        ds, dt = s - i, t - j
        return (
            v[i, j] * (1 - ds) * (1 - dt)
            + v[i + 1, j] * ds * (1 - dt)
            + v[i, j + 1] * (1 - ds) * dt
            + v[i + 1, j + 1] * ds * dt
        )

    def evaluate(u1: float, u2: float) -> float:
        if u1 < 0.0 and u2 < 0.0:
            return 0.0
        below1 = u1 < a1lo
        below2 = u2 < a2lo
        if not below1 and not below2:
            return bilinear(u1, u2)
        if below1 and not below2:
            edge = bilinear(a1lo, u2)
            floor = max(u2, 0.0) + c2 / ql
            return floor + (edge - floor) * math.exp(ql * (u1 - a1lo) / c1)
        if below2 and not below1:
            edge = bilinear(u1, a2lo)
            floor = max(u1, 0.0) + c1 / ql
            return floor + (edge - floor) * math.exp(ql * (u2 - a2lo) / c2)
        corner = float(v[0, 0])
        return corner * math.exp(ql * (u1 - a1lo) / c1) * math.exp(ql * (u2 - a2lo) / c2)

    return evaluate


def integral_operator(
    p: ModelParams,
    f: GriddedFunction,
    x: SurplusPoint,
    tol: float = 1e-10,
    return_error: bool = False,
):
    """Expected candidate value after one claim from ``x``.

    Integrates f(x1 - b1 a, x2 - b2 a) against the exponential claim
    density over a in [0, (x1/b1) v (x2/b2)]; beyond that bound both
    coordinates are negative and the integrand vanishes. ``x`` must lie
    within the grid hull.
    """
    if not f.in_hull(x):
        raise ValueError(f"point ({x.x1}, {x.x2}) outside the grid hull")
    amax = max(x.x1 / p.b1, x.x2 / p.b2)
    if amax <= 0.0:
        return (0.0, 0.0) if return_error else 0.0
    evaluate = make_evaluator(p, f)
    gamma = p.gamma

    def integrand(a: float) -> float:
        return evaluate(x.x1 - p.b1 * a, x.x2 - p.b2 * a) * gamma * math.exp(-gamma * a)

    points = _ray_breakpoints(p, f, x, amax)
    value, err = quad(
        integrand, 0.0, amax,
        points=points if points else None,
        limit=max(200, 2 * len(points) + 50),
        epsabs=tol, epsrel=tol,
    )
    return (value, err) if return_error else value


def _ray_breakpoints(p: ModelParams, f: GriddedFunction, x: SurplusPoint, amax: float) -> list[float]:
    """Claim sizes at which the ray crosses grid lines or a coordinate axis."""
    pts: set[float] = set()
    for g in f.x1:
        a = (x.x1 - g) / p.b1
        if 0.0 < a < amax:
            pts.add(a)
    for g in f.x2:
        a = (x.x2 - g) / p.b2
        if 0.0 < a < amax:
            pts.add(a)
    for a in (x.x1 / p.b1, x.x2 / p.b2):
        if 0.0 < a < amax:
            pts.add(a)
    out = sorted(pts)
    if len(out) > _MAX_QUAD_POINTS:
        stride = len(out) // _MAX_QUAD_POINTS + 1
        out = out[::stride]
    return out


def _node_indices(f: GriddedFunction, x: SurplusPoint) -> tuple[int, int]:
    i = round((x.x1 - f.x1[0]) / f.step1)
    j = round((x.x2 - f.x2[0]) / f.step2)
    if not (0 <= i < f.x1.size and 0 <= j < f.x2.size):
        raise ValueError(f"({x.x1}, {x.x2}) is not a grid node")
    if abs(f.x1[i] - x.x1) > _AXIS_TOL or abs(f.x2[j] - x.x2) > _AXIS_TOL:
        raise ValueError(f"({x.x1}, {x.x2}) is not a grid node")
    return i, j


def generator(p: ModelParams, f: GriddedFunction, x: SurplusPoint, tol: float = 1e-10) -> float:
    """Discounted generator L(f) at a strictly interior grid node.

    c1 f_x1 + c2 f_x2 - (q+lam) f + lam I(f), with the partials from
    central differences at the grid steps.
    """
    i, j = _node_indices(f, x)
    if not (1 <= i < f.x1.size - 1 and 1 <= j < f.x2.size - 1):
        raise ValueError(f"({x.x1}, {x.x2}) is a boundary node; central differences unavailable")
    fx1 = (f.values[i + 1, j] - f.values[i - 1, j]) / (2.0 * f.step1)
    fx2 = (f.values[i, j + 1] - f.values[i, j - 1]) / (2.0 * f.step2)
    integral = integral_operator(p, f, x, tol=tol)
    return p.c1 * fx1 + p.c2 * fx2 - (p.q + p.lam) * f.values[i, j] + p.lam * integral


@dataclass(frozen=True)
class HjbResidualReport:
    """Pointwise HJB terms on the interior nodes of a candidate grid.

    term_a/term_b are the derivative constraints (zero where the
    coordinate-wise indicator is off), term_c the generator, residual their
    pointwise max. The continuation region is where both derivative
    constraints have strict slack; there the equation demands L(V) = 0.
    """

    x1: np.ndarray
    x2: np.ndarray
    term_a: np.ndarray
    term_b: np.ndarray
    term_c: np.ndarray
    residual: np.ndarray
    continuation_mask: np.ndarray
    max_abs_residual_continuation: float
    max_positive_violation: float


def hjb_residual(p: ModelParams, f: GriddedFunction, tol: float = 1e-8) -> HjbResidualReport:
    """Evaluate the HJB residual at every strictly interior grid node."""
    if f.x1.size < 5 or f.x2.size < 5:
        raise ValueError("grid must be at least 5x5 for a meaningful residual check")
    v = f.values
    h1, h2 = f.step1, f.step2
    fx1 = (v[2:, 1:-1] - v[:-2, 1:-1]) / (2.0 * h1)
    fx2 = (v[1:-1, 2:] - v[1:-1, :-2]) / (2.0 * h2)
    x1i = f.x1[1:-1]
    x2i = f.x2[1:-1]
    term_a = np.where(x1i[:, None] >= 0.0, 1.0 - fx1, 0.0)
    term_b = np.where(x2i[None, :] >= 0.0, 1.0 - fx2, 0.0)

    integral = np.empty((x1i.size, x2i.size))
    for i, u1 in enumerate(x1i):
        for j, u2 in enumerate(x2i):
            integral[i, j] = integral_operator(p, f, SurplusPoint(float(u1), float(u2)), tol=tol)
    term_c = p.c1 * fx1 + p.c2 * fx2 - (p.q + p.lam) * v[1:-1, 1:-1] + p.lam * integral

    residual = np.maximum(np.maximum(term_a, term_b), term_c)
    mask = (term_a < 0.0) & (term_b < 0.0)
    max_abs_cont = float(np.abs(residual[mask]).max()) if mask.any() else math.nan
    return HjbResidualReport(
        x1=x1i,
        x2=x2i,
        term_a=term_a,
        term_b=term_b,
        term_c=term_c,
        residual=residual,
        continuation_mask=mask,
        max_abs_residual_continuation=max_abs_cont,
        max_positive_violation=float(residual.max()),
    )


def derivative_tolerance(stderr: float, h: float, c_h: float = 1.0) -> float:
    """Noise band for the derivative constraint terms on an MC grid.

    Central differences of i.i.d. noise of size ``stderr`` have standard
    deviation stderr/(sqrt(2) h); three of those plus a c_h * h
    discretization allowance.
    """
    return 3.0 * stderr / h + c_h * h


def generator_tolerance(p: ModelParams, stderr: float, h: float, c_h: float = 1.0) -> float:
    """Noise band for the generator term on an MC grid.

    Propagates ``stderr`` through c_i-weighted central differences, the
    killing term and the integral operator, plus a c_h * h discretization
    allowance.
    """
    noise = stderr * math.sqrt(
        (p.c1 * p.c1 + p.c2 * p.c2) / (2.0 * h * h) + (p.q + p.lam) ** 2 + p.lam * p.lam
    )
    return 3.0 * noise + c_h * h


# ---------------------------------------------------------------------------
# CSV interop with the Monte-Carlo grid output


def gridded_from_grid_csv(
    lines: Iterable[str], column: str
) -> tuple[GriddedFunction, float]:
    """Rebuild (GriddedFunction, max stderr) from a grid CSV.

    ``column`` selects 'v1' or 'v2'. The rows must form a complete
    rectangle; comment lines are ignored.
    """
    if column not in ("v1", "v2"):
        raise ValueError(f"column must be 'v1' or 'v2', got {column!r}")
    rows = []
    header: list[str] | None = None
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = line.split(",")
            continue
        rows.append(line.split(","))
    if header is None or not rows:
        raise ValueError("grid CSV has no data rows")
    idx = {name: k for k, name in enumerate(header)}
    for needed in ("x1", "x2", f"{column}_mean", f"{column}_stderr"):
        if needed not in idx:
            raise ValueError(f"grid CSV missing column {needed!r}")
    x1s = sorted({float(r[idx["x1"]]) for r in rows})
    x2s = sorted({float(r[idx["x2"]]) for r in rows})
    values = np.full((len(x1s), len(x2s)), math.nan)
    stderr_max = 0.0
    pos1 = {v: i for i, v in enumerate(x1s)}
    pos2 = {v: j for j, v in enumerate(x2s)}
    for r in rows:
        i = pos1[float(r[idx["x1"]])]
        j = pos2[float(r[idx["x2"]])]
        values[i, j] = float(r[idx[f"{column}_mean"]])
        stderr_max = max(stderr_max, float(r[idx[f"{column}_stderr"]]))
    if np.isnan(values).any():
        raise ValueError("grid CSV rows do not form a complete rectangle")
    return GriddedFunction(np.array(x1s), np.array(x2s), values), stderr_max


def write_residual_csv(out: TextIO, report: HjbResidualReport) -> None:
    """Per-point residual CSV plus a trailing summary comment line."""
    out.write("x1,x2,term_a,term_b,term_c,residual\n")
    for i, u1 in enumerate(report.x1):
        for j, u2 in enumerate(report.x2):
            out.write(
                f"{u1:.17g},{u2:.17g},{report.term_a[i, j]:.17g},{report.term_b[i, j]:.17g},"
                f"{report.term_c[i, j]:.17g},{report.residual[i, j]:.17g}\n"
            )
    out.write(
        f"# summary max_abs_residual_continuation={report.max_abs_residual_continuation:.17g} "
        f"max_positive_violation={report.max_positive_violation:.17g}\n"
    )
