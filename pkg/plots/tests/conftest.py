import subprocess
import sys
import pytest

CONFIG = "c1=2\nc2=4\nb1=0.25\nb2=0.75\nlambda=1\ngamma=0.25\nq=0.05\n"
SYMMETRIC = "c1=2\nc2=2\nb1=0.5\nb2=0.5\nlambda=1\ngamma=0.25\nq=0.05\n"


def run_divbang(args, cwd):
    proc = subprocess.run(
        [sys.executable, "-m", "divbang.cli", *[str(a) for a in args]],
        cwd=cwd, capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def csv_dir(tmp_path_factory):
    """Sweep, grid and barrier-solve CSVs produced through the divbang CLI."""
    root = tmp_path_factory.mktemp("csvs")
    cfg = root / "model.cfg"
    cfg.write_text(CONFIG)
    run_divbang(
        ["sweep", "--config", cfg, "--branch", 1, "--min", 6, "--max", 12, "--step", 0.5,
         "--x1", 25, "--x2", 25, "--paths", 20000, "--seed", 9, "--out", root / "sweep1.csv"],
        root,
    )
    run_divbang(
        ["sweep", "--config", cfg, "--branch", 2, "--min", 10, "--max", 25, "--step", 1,
         "--x1", 25, "--x2", 25, "--paths", 20000, "--seed", 9, "--out", root / "sweep2.csv"],
        root,
    )
    run_divbang(
        ["grid", "--config", cfg, "--x1-min", 0, "--x1-max", 25, "--x2-min", 0, "--x2-max", 25,
         "--step", 2.5, "--b1-opt", 8, "--b2-opt", 18.35, "--paths", 3000, "--seed", 9,
         "--out", root / "grid.csv"],
        root,
    )
    intervals = root / "intervals.csv"
    rows = ["branch,lambda_div,x_star,R1,R2,residual,iterations"]
    for branch, lam_div in ((1, 0.0), (1, 4.0), (2, 0.0), (2, 2.0)):
        out = root / f"sb_{branch}_{lam_div}.csv"
        run_divbang(
            ["solve-barrier", "--config", cfg, "--branch", branch, "--lambda-div", lam_div,
             "--out", out],
            root,
        )
        rows.append(out.read_text().splitlines()[2])
    intervals.write_text("\n".join(rows) + "\n")
    return root


@pytest.fixture(scope="session")
def symmetric_grid(tmp_path_factory):
    """Small grid CSV for the symmetric model."""
    root = tmp_path_factory.mktemp("sym")
    cfg = root / "sym.cfg"
    cfg.write_text(SYMMETRIC)
    out = root / "grid_sym.csv"
    run_divbang(
        ["grid", "--config", cfg, "--x1-min", 0, "--x1-max", 20, "--x2-min", 0, "--x2-max", 20,
         "--step", 5, "--b1-opt", 8, "--b2-opt", 8, "--paths", 4000, "--seed", 3, "--out", out],
        root,
    )
    return out
