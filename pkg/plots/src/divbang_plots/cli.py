"""render_figures: barrier curves and value surfaces from divbang CSVs."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import PlotJob, SchemaError, render_barrier_curves, render_value_surfaces


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render_figures",
        description="Render barrier-sweep curves and value surfaces from divbang CSV outputs.",
    )
    parser.add_argument("sweep1", help="branch-1 sweep CSV")
    parser.add_argument("sweep2", help="branch-2 sweep CSV")
    parser.add_argument("grid", help="grid CSV")
    parser.add_argument("--out-dir", default=".", help="directory for the images")
    parser.add_argument("--intervals", default=None,
                        help="barrier-solve CSV whose x_star values mark the search interval")
    parser.add_argument("--no-ci", action="store_true", help="draw mean curves only")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        curves_job = PlotJob(
            inputs=(args.sweep1, args.sweep2),
            kind="barrier_curves",
            output=str(out_dir / "barrier_curves.png"),
            ci_band=not args.no_ci,
            intervals=args.intervals,
        )
        path1, _ = render_barrier_curves(curves_job)
        surfaces_job = PlotJob(
            inputs=(args.grid,),
            kind="value_surfaces",
            output=str(out_dir / "value_surfaces.png"),
        )
        path2, _ = render_value_surfaces(surfaces_job)
    except (SchemaError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(path1)
    print(path2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
