"""Command-line front end binding the library into reproducible experiments.

Every command reads model parameters from a key=value config file, writes
one CSV whose first line carries the manifest hash, and drops a
``<out>.manifest.json`` next to it. Re-running with the same config, flags
and seed reproduces the data rows byte for byte; the hash covers exactly
the inputs that determine them (so worker-thread count, for one, is
excluded).

Exit codes: 0 success, 1 runtime failure, 2 usage or validation error.
The master seed defaults to the DIVBANG_SEED environment variable.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .analytics import solve_barrier, value_bounds
from .engine import SimConfig, simulate_path, write_trace_csv
from .hjb import gridded_from_grid_csv, hjb_residual, write_residual_csv
from .model import ConfigError, InsolventStateError, ParamError, SurplusPoint, load_params
from .montecarlo import (
    estimate_value,
    grid_values,
    inclusive_range,
    sweep_barrier,
    write_estimate_csv,
    write_grid_csv,
    write_sweep_csv,
)
from .strategy import StrategyError, parse_strategy
from .streams import RandomSource

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

SEED_ENV_VAR = "DIVBANG_SEED"

#: flags that do not influence the output data rows, excluded from the hash
#: (the resolved master seed is hashed separately, so the raw --seed flag
#: and the DIVBANG_SEED fallback hash identically)
_HASH_EXCLUDED = {"out", "threads", "func", "command", "seed"}


def _resolve_seed(args: argparse.Namespace) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {env!r}") from None
    return 0


def _sim_config(args: argparse.Namespace, trace: bool = False) -> SimConfig:
    return SimConfig(
        horizon_epsilon=getattr(args, "epsilon", 1e-6),
        max_events=getattr(args, "max_events", 1_000_000),
        trace_enabled=trace,
    )


class _Run:
    """Collects manifest data and writes the CSV + manifest pair."""

    def __init__(self, args: argparse.Namespace, seed: int):
        self.args = args
        self.seed = seed
        self.started = time.perf_counter()
        config_text = Path(args.config).read_text() if getattr(args, "config", None) else ""
        flags = {
            k: v for k, v in sorted(vars(args).items()) if k not in ("func",) and v is not None
        }
        hashed = {
            "command": args.command,
            "flags": {k: repr(v) for k, v in flags.items() if k not in _HASH_EXCLUDED},
            "master_seed": seed,
            "artifact_version": __version__,
            "config_sha256": hashlib.sha256(config_text.encode()).hexdigest(),
        }
        self.hash = hashlib.sha256(
            json.dumps(hashed, sort_keys=True).encode()
        ).hexdigest()[:16]
        self.manifest = dict(hashed)
        self.manifest["manifest_hash"] = self.hash
        self.manifest["config_path"] = str(getattr(args, "config", "") or "")
        self.manifest["flags"] = {k: repr(v) for k, v in flags.items()}

    def emit(self, out_path: str | Path, write_body) -> None:
        out_path = Path(out_path)
        with out_path.open("w") as fh:
            fh.write(f"# manifest={self.hash}\n")
            write_body(fh)
        self.manifest["output_paths"] = [str(out_path)]
        self.manifest["wall_clock_s"] = time.perf_counter() - self.started
        Path(str(out_path) + ".manifest.json").write_text(json.dumps(self.manifest, indent=2) + "\n")
        print(f"wrote {out_path}", file=sys.stderr)


def _out_path(args: argparse.Namespace) -> Path:
    if args.out is not None:
        return Path(args.out)
    return Path(f"divbang_{args.command.replace('-', '_')}.csv")


def _cmd_estimate(args) -> int:
    p = load_params(args.config)
    seed = _resolve_seed(args)
    x0 = SurplusPoint(args.x1, args.x2).require_solvent()
    spec = parse_strategy(args.strategy)
    run = _Run(args, seed)
    est = estimate_value(p, x0, spec, args.paths, seed, _sim_config(args), args.threads)
    run.emit(_out_path(args), lambda fh: write_estimate_csv(fh, spec, x0, est))
    return EXIT_OK


def _cmd_sweep(args) -> int:
    p = load_params(args.config)
    seed = _resolve_seed(args)
    x0 = SurplusPoint(args.x1, args.x2).require_solvent()
    levels = [float(v) for v in inclusive_range((args.min, args.max), args.step)]
    run = _Run(args, seed)
    result = sweep_barrier(p, x0, args.branch, levels, args.paths, seed, _sim_config(args), args.threads)
    run.emit(_out_path(args), lambda fh: write_sweep_csv(fh, result))
    return EXIT_OK


def _cmd_grid(args) -> int:
    p = load_params(args.config)
    seed = _resolve_seed(args)
    run = _Run(args, seed)
    result = grid_values(
        p,
        (args.x1_min, args.x1_max),
        (args.x2_min, args.x2_max),
        args.step,
        args.b1_opt,
        args.b2_opt,
        args.paths,
        seed,
        _sim_config(args),
        args.threads,
    )
    run.emit(_out_path(args), lambda fh: write_grid_csv(fh, result))
    return EXIT_OK


def _cmd_solve_barrier(args) -> int:
    p = load_params(args.config)
    run = _Run(args, _resolve_seed(args))
    solve = solve_barrier(p, args.branch, args.lambda_div)

    def body(fh):
        fh.write("branch,lambda_div,x_star,R1,R2,residual,iterations\n")
        fh.write(
            f"{args.branch},{solve.lambda_div:.17g},{solve.x_star:.17g},"
            f"{solve.roots.R1:.17g},{solve.roots.R2:.17g},{solve.residual:.17g},{solve.iterations}\n"
        )

    run.emit(_out_path(args), body)
    print(f"x_star={solve.x_star:.6f}")
    return EXIT_OK


def _cmd_bounds(args) -> int:
    p = load_params(args.config)
    run = _Run(args, _resolve_seed(args))
    bounds = value_bounds(p, SurplusPoint(args.x1, args.x2))

    def body(fh):
        fh.write("x1,x2,lower,upper\n")
        fh.write(f"{args.x1:.17g},{args.x2:.17g},{bounds.lower:.17g},{bounds.upper:.17g}\n")

    run.emit(_out_path(args), body)
    print(f"{bounds.lower:.17g},{bounds.upper:.17g}")
    return EXIT_OK


def _cmd_hjb_check(args) -> int:
    p = load_params(args.config)
    run = _Run(args, _resolve_seed(args))
    with open(args.grid) as fh:
        f, _ = gridded_from_grid_csv(fh, args.column)
    report = hjb_residual(p, f)
    run.emit(_out_path(args), lambda fh: write_residual_csv(fh, report))
    print(
        f"max_abs_residual_continuation={report.max_abs_residual_continuation:.6g} "
        f"max_positive_violation={report.max_positive_violation:.6g}"
    )
    return EXIT_OK


def _cmd_simulate(args) -> int:
    p = load_params(args.config)
    seed = _resolve_seed(args)
    x0 = SurplusPoint(args.x1, args.x2).require_solvent()
    spec = parse_strategy(args.strategy)
    run = _Run(args, seed)
    outcome = simulate_path(p, x0, spec, _sim_config(args, trace=True), RandomSource(seed, args.path_index))
    run.emit(_out_path(args), lambda fh: write_trace_csv(fh, outcome.trace))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divbang",
        description="Event-driven simulation and analytics for two-branch dividend strategies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, paths=True):
        sp.add_argument("--config", required=True, help="key=value parameter file")
        sp.add_argument("--seed", type=int, default=None, help=f"master seed (default ${SEED_ENV_VAR} or 0)")
        sp.add_argument("--out", default=None, help="output CSV path")
        if paths:
            sp.add_argument("--paths", type=int, default=100_000)
            sp.add_argument("--threads", type=int, default=1)
            sp.add_argument("--epsilon", type=float, default=1e-6, help="censoring tail budget")
            sp.add_argument("--max-events", dest="max_events", type=int, default=1_000_000)

    sp = sub.add_parser("estimate", help="Monte-Carlo value estimate at one point")
    common(sp)
    sp.add_argument("--strategy", required=True)
    sp.add_argument("--x1", type=float, required=True)
    sp.add_argument("--x2", type=float, required=True)
    sp.set_defaults(func=_cmd_estimate)

    sp = sub.add_parser("sweep", help="barrier sweep on one branch")
    common(sp)
    sp.add_argument("--branch", type=int, choices=(1, 2), required=True)
    sp.add_argument("--min", type=float, required=True)
    sp.add_argument("--max", type=float, required=True)
    sp.add_argument("--step", type=float, required=True)
    sp.add_argument("--x1", type=float, required=True)
    sp.add_argument("--x2", type=float, required=True)
    sp.set_defaults(func=_cmd_sweep)

    sp = sub.add_parser("grid", help="value estimates over an initial-capital grid")
    common(sp)
    sp.add_argument("--x1-min", dest="x1_min", type=float, required=True)
    sp.add_argument("--x1-max", dest="x1_max", type=float, required=True)
    sp.add_argument("--x2-min", dest="x2_min", type=float, required=True)
    sp.add_argument("--x2-max", dest="x2_max", type=float, required=True)
    sp.add_argument("--step", type=float, required=True)
    sp.add_argument("--b1-opt", dest="b1_opt", type=float, required=True)
    sp.add_argument("--b2-opt", dest="b2_opt", type=float, required=True)
    sp.set_defaults(func=_cmd_grid)

    sp = sub.add_parser("solve-barrier", help="barrier fixed point for a frozen reward rate")
    common(sp, paths=False)
    sp.add_argument("--branch", type=int, choices=(1, 2), required=True)
    sp.add_argument("--lambda-div", dest="lambda_div", type=float, required=True)
    sp.set_defaults(func=_cmd_solve_barrier)

    sp = sub.add_parser("bounds", help="closed-form value bounds at one point")
    common(sp, paths=False)
    sp.add_argument("--x1", type=float, required=True)
    sp.add_argument("--x2", type=float, required=True)
    sp.set_defaults(func=_cmd_bounds)

    sp = sub.add_parser("hjb-check", help="HJB residual report for a grid CSV")
    common(sp, paths=False)
    sp.add_argument("--grid", required=True, help="grid CSV produced by the grid command")
    sp.add_argument("--column", choices=("v1", "v2"), default="v1")
    sp.set_defaults(func=_cmd_hjb_check)

    sp = sub.add_parser("simulate", help="trace one simulated path")
    common(sp, paths=False)
    sp.add_argument("--strategy", required=True)
    sp.add_argument("--x1", type=float, required=True)
    sp.add_argument("--x2", type=float, required=True)
    sp.add_argument("--epsilon", type=float, default=1e-6)
    sp.add_argument("--max-events", dest="max_events", type=int, default=1_000_000)
    sp.add_argument("--path-index", dest="path_index", type=int, default=0)
    sp.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParamError, InsolventStateError, StrategyError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # engine/solver failures and the unexpected
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
