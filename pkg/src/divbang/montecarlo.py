"""Monte-Carlo estimation of strategy values with confidence intervals.

Path i of a run always uses the random stream derived from
(master_seed, i), so estimates are reproducible bit for bit regardless of
how path ranges are scheduled over worker threads, and two runs sharing a
master seed see identical claim scenarios path by path (common random
numbers). Barrier-pair strategies with exponential claims run through the
compiled kernel; everything else falls back to the reference engine.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

from . import _kernels
from .engine import EngineError, SimConfig, barrier_levels, simulate_path
from .model import ClaimDistribution, ModelParams, SurplusPoint
from .strategy import Bang1, Bang2, StrategySpec, format_strategy
from .streams import MASK64, RandomSource

#: normal quantile for two-sided 95% confidence intervals
Z95 = 1.959963984540054

#: path count below which estimates are refused (stderr undefined)
MIN_PATHS = 2

_KERNEL_CHUNK = 16_384


@dataclass(frozen=True)
class Estimate:
    """Sample mean of total discounted dividends with a 95% normal CI."""

    mean: float
    stderr: float
    ci_low: float
    ci_high: float
    n_paths: int
    censored_fraction: float
    master_seed: int


@dataclass(frozen=True)
class SweepResult:
    """Per-barrier-level estimates for one branch, levels strictly increasing."""

    branch: int
    rows: tuple[tuple[float, Estimate], ...]

    def argmax_level(self) -> float:
        return max(self.rows, key=lambda row: row[1].mean)[0]


@dataclass(frozen=True)
class GridResult:
    """Per-initial-capital estimates of the two candidate strategies.

    rows: (x1, x2, estimate under Bang1(b1_opt), estimate under Bang2(b2_opt)).
    skipped: insolvent grid points that were not simulated.
    """

    rows: tuple[tuple[float, float, Estimate, Estimate], ...]
    skipped: tuple[tuple[float, float], ...]


def _run_paths(
    p: ModelParams,
    x0: SurplusPoint,
    spec: StrategySpec,
    n: int,
    master_seed: int,
    cfg: SimConfig,
    threads: int,
    dist: ClaimDistribution | None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-path (discounted_1, discounted_2, censored) arrays, index = path."""
    x0.require_solvent()
    levels = barrier_levels(spec)
    if levels is not None and dist is None:
        return _run_paths_kernel(p, x0, levels, n, master_seed, cfg, threads)
    d1 = np.empty(n)
    d2 = np.empty(n)
    cens = np.zeros(n, dtype=np.uint8)
    for i in range(n):
        out = simulate_path(p, x0, spec, cfg, RandomSource(master_seed, i), dist)
        d1[i] = out.discounted_dividends_1
        d2[i] = out.discounted_dividends_2
        cens[i] = out.censored
    return d1, d2, cens


def _run_paths_kernel(p, x0, levels, n, master_seed, cfg, threads):
    pay1, lvl1, pay2, lvl2 = levels
    d1 = np.empty(n)
    d2 = np.empty(n)
    t1 = np.empty(n)
    t2 = np.empty(n)
    ruin = np.empty(n)
    ncl = np.empty(n, dtype=np.int64)
    cens = np.empty(n, dtype=np.uint8)

    def run_range(lo: int, hi: int) -> None:
        _kernels.run_barrier_paths(
            p.c1, p.c2, p.b1, p.b2, p.lam, p.gamma, p.q,
            x0.x1, x0.x2,
            pay1, lvl1, pay2, lvl2,
            cfg.horizon_epsilon, cfg.max_events, master_seed & MASK64,
            lo, hi,
            d1, d2, t1, t2, ruin, ncl, cens,
        )

    if threads <= 1 or n < 2 * _KERNEL_CHUNK:
        run_range(0, n)
    else:
        bounds = list(range(0, n, _KERNEL_CHUNK)) + [n]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(run_range, lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:])]
            for fut in futures:
                fut.result()
    if (ncl < 0).any():
        bad = int(np.argmax(ncl < 0))
        raise EngineError(f"max_events={cfg.max_events} exceeded on path {bad}")
    return d1, d2, cens


def _estimate_from_values(values: np.ndarray, censored: np.ndarray, master_seed: int) -> Estimate:
    n = values.size
    if n < MIN_PATHS:
        raise ValueError(f"need at least {MIN_PATHS} paths, got {n}")
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(n))
    return Estimate(
        mean=mean,
        stderr=stderr,
        ci_low=mean - Z95 * stderr,
        ci_high=mean + Z95 * stderr,
        n_paths=n,
        censored_fraction=float(np.mean(censored)),
        master_seed=master_seed,
    )


def estimate_value(
    p: ModelParams,
    x0: SurplusPoint,
    spec: StrategySpec,
    n: int,
    master_seed: int,
    cfg: SimConfig = SimConfig(),
    threads: int = 1,
    dist: ClaimDistribution | None = None,
) -> Estimate:
    """Estimate the expected total discounted dividends of ``spec`` from ``x0``."""
    d1, d2, cens = _run_paths(p, x0, spec, n, master_seed, cfg, threads, dist)
    return _estimate_from_values(d1 + d2, cens, master_seed)


def compare_strategies(
    p: ModelParams,
    x0: SurplusPoint,
    a: StrategySpec,
    b: StrategySpec,
    n: int,
    master_seed: int,
    cfg: SimConfig = SimConfig(),
    threads: int = 1,
    dist: ClaimDistribution | None = None,
) -> Estimate:
    """Paired estimate of value(a) - value(b) on common claim scenarios.

    Path i of both runs shares one random stream, so the difference is a
    common-random-numbers estimate whose stderr reflects the paired design.
    """
    a1, a2, ca = _run_paths(p, x0, a, n, master_seed, cfg, threads, dist)
    b1, b2, cb = _run_paths(p, x0, b, n, master_seed, cfg, threads, dist)
    return _estimate_from_values((a1 + a2) - (b1 + b2), ca | cb, master_seed)


def sweep_barrier(
    p: ModelParams,
    x0: SurplusPoint,
    branch: int,
    levels: Sequence[float],
    n: int,
    master_seed: int,
    cfg: SimConfig = SimConfig(),
    threads: int = 1,
) -> SweepResult:
    """Estimate the barrier strategy value at each level of one branch.

    All levels share the master seed, hence identical claim scenarios
    (common random numbers), which makes the level comparison far tighter
    than the individual CIs.
    """
    if branch not in (1, 2):
        raise ValueError(f"branch must be 1 or 2, got {branch!r}")
    if len(levels) == 0:
        raise ValueError("levels must be non-empty")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be strictly increasing")
    rows = []
    for level in levels:
        spec = Bang1(level) if branch == 1 else Bang2(level)
        rows.append((float(level), estimate_value(p, x0, spec, n, master_seed, cfg, threads)))
    return SweepResult(branch=branch, rows=tuple(rows))


def grid_values(
    p: ModelParams,
    x1_range: tuple[float, float],
    x2_range: tuple[float, float],
    step: float,
    b1_opt: float,
    b2_opt: float,
    n: int,
    master_seed: int,
    cfg: SimConfig = SimConfig(),
    threads: int = 1,
) -> GridResult:
    """Estimate Bang1(b1_opt) and Bang2(b2_opt) on a rectangular grid.

    Insolvent grid points (both coordinates negative) are skipped and
    reported separately.
    """
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step!r}")
    x1s = inclusive_range(x1_range, step)
    x2s = inclusive_range(x2_range, step)
    if x1s.size == 0 or x2s.size == 0:
        raise ValueError("grid ranges are empty")
    rows = []
    skipped = []
    for x1 in x1s:
        for x2 in x2s:
            point = SurplusPoint(float(x1), float(x2))
            if not point.solvent:
                skipped.append((point.x1, point.x2))
                continue
            e1 = estimate_value(p, point, Bang1(b1_opt), n, master_seed, cfg, threads)
            e2 = estimate_value(p, point, Bang2(b2_opt), n, master_seed, cfg, threads)
            rows.append((point.x1, point.x2, e1, e2))
    return GridResult(rows=tuple(rows), skipped=tuple(skipped))


def inclusive_range(bounds: tuple[float, float], step: float) -> np.ndarray:
    lo, hi = bounds
    if hi < lo:
        raise ValueError(f"range must satisfy min <= max, got {bounds!r}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


# ---------------------------------------------------------------------------
# CSV serialization


def _fmt(x: float) -> str:
    return f"{x:.17g}"


ESTIMATE_CSV_HEADER = "strategy,x1,x2,n_paths,mean,stderr,ci_low,ci_high,censored_frac,seed"
SWEEP_CSV_HEADER = "branch,barrier,mean,stderr,ci_low,ci_high"
GRID_CSV_HEADER = "x1,x2,v1_mean,v1_stderr,v2_mean,v2_stderr"


def write_estimate_csv(out: TextIO, spec: StrategySpec, x0: SurplusPoint, est: Estimate) -> None:
    out.write(ESTIMATE_CSV_HEADER + "\n")
    out.write(
        f"{format_strategy(spec)},{_fmt(x0.x1)},{_fmt(x0.x2)},{est.n_paths},"
        f"{_fmt(est.mean)},{_fmt(est.stderr)},{_fmt(est.ci_low)},{_fmt(est.ci_high)},"
        f"{_fmt(est.censored_fraction)},{est.master_seed}\n"
    )


def write_sweep_csv(out: TextIO, result: SweepResult) -> None:
    out.write(SWEEP_CSV_HEADER + "\n")
    for level, est in result.rows:
        out.write(
            f"{result.branch},{_fmt(level)},{_fmt(est.mean)},{_fmt(est.stderr)},"
            f"{_fmt(est.ci_low)},{_fmt(est.ci_high)}\n"
        )


def write_grid_csv(out: TextIO, result: GridResult) -> None:
    out.write(GRID_CSV_HEADER + "\n")
    for x1, x2, e1, e2 in result.rows:
        out.write(
            f"{_fmt(x1)},{_fmt(x2)},{_fmt(e1.mean)},{_fmt(e1.stderr)},"
            f"{_fmt(e2.mean)},{_fmt(e2.stderr)}\n"
        )
