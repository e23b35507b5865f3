import io
import math

import numpy as np
import pytest

from divbang import (
    GriddedFunction,
    SurplusPoint,
    generator,
    hjb_residual,
    integral_operator,
    value_bounds,
)
from divbang.hjb import (
    derivative_tolerance,
    generator_tolerance,
    gridded_from_grid_csv,
    make_evaluator,
    write_residual_csv,
)


def grid_of(fn, x1, x2):
    return GriddedFunction(x1, x2, np.array([[fn(a, b) for b in x2] for a in x1]))


def ones_grid(lo=-14.0, hi=25.0, step=0.5):
    # wide enough that claim rays from the tested points stay inside the
    # hull; beyond the hull the bound-shaped extrapolation takes over
    x = np.arange(lo, hi + step / 2, step)
    return GriddedFunction(x, x, np.ones((x.size, x.size)))


class TestGriddedFunction:
    def test_rejects_nonuniform_axis(self):
        with pytest.raises(ValueError):
            GriddedFunction(np.array([0.0, 1.0, 3.0]), np.array([0.0, 1.0, 2.0]), np.zeros((3, 3)))

    def test_rejects_decreasing_axis(self):
        with pytest.raises(ValueError):
            GriddedFunction(np.array([2.0, 1.0, 0.0]), np.array([0.0, 1.0, 2.0]), np.zeros((3, 3)))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            GriddedFunction(np.array([0.0, 1.0]), np.array([0.0, 1.0]), np.zeros((3, 2)))


class TestIntegralOperator:
    def test_indicator_mass_along_ray(self, params):
        # constant 1 on the solvency set integrates to the claim cdf at the
        # ray's exit from solvency
        val = integral_operator(params, ones_grid(), SurplusPoint(4.0, 0.0))
        assert val == pytest.approx(1.0 - math.exp(-4.0), abs=1e-6)

    def test_empty_range_is_zero(self, params):
        assert integral_operator(params, ones_grid(), SurplusPoint(0.0, 0.0)) == 0.0

    def test_outside_hull_rejected(self, params):
        with pytest.raises(ValueError):
            integral_operator(params, ones_grid(), SurplusPoint(100.0, 0.0))

    def test_against_monte_carlo_claim_average(self, params):
        # quadrature vs direct sampling of E[f(x - b U)] with the same
        # pointwise evaluator
        x1 = np.arange(-6.0, 14.0 + 0.125, 0.25)
        f = grid_of(lambda a, b: value_bounds(params, SurplusPoint(a, b)).lower
                    if not (a < 0 and b < 0) else 0.0, x1, x1)
        x = SurplusPoint(6.0, 2.0)
        val = integral_operator(params, f, x)
        evaluate = make_evaluator(params, f)
        rng = np.random.default_rng(3)
        draws = rng.exponential(1.0 / params.gamma, size=200_000)
        amax = max(x.x1 / params.b1, x.x2 / params.b2)
        samples = np.array(
            [evaluate(x.x1 - params.b1 * u, x.x2 - params.b2 * u) if u <= amax else 0.0
             for u in draws]
        )
        stderr = samples.std(ddof=1) / math.sqrt(samples.size)
        assert val == pytest.approx(float(samples.mean()), abs=3.0 * stderr)

    def test_halving_tolerance_stays_within_error_estimate(self, params):
        x1 = np.arange(-4.0, 12.0 + 0.25, 0.5)
        f = grid_of(lambda a, b: max(a, 0.0) + max(b, 0.0) + math.sin(0.3 * a) * 0.1, x1, x1)
        x = SurplusPoint(5.0, 3.0)
        coarse, err = integral_operator(params, f, x, tol=1e-6, return_error=True)
        fine = integral_operator(params, f, x, tol=5e-7)
        assert abs(coarse - fine) <= max(err, 1e-12)


class TestGenerator:
    def test_constant_candidate(self, params):
        # c-terms vanish, killing and claim-average remain
        val = generator(params, ones_grid(), SurplusPoint(4.0, 0.0))
        want = -1.05 + 1.0 * (1.0 - math.exp(-4.0))
        assert val == pytest.approx(want, abs=1e-6)

    def test_zero_candidate(self, params):
        x = np.arange(-14.0, 25.5, 0.5)
        zero = GriddedFunction(x, x, np.zeros((x.size, x.size)))
        assert generator(params, zero, SurplusPoint(4.0, 0.0)) == 0.0

    def test_linearity(self, params):
        rng = np.random.default_rng(9)
        x = np.arange(-4.0, 8.5, 0.5)
        vals = rng.normal(size=(x.size, x.size))
        g1 = GriddedFunction(x, x, vals)
        g3 = GriddedFunction(x, x, 3.0 * vals)
        at = SurplusPoint(2.0, 2.0)
        assert generator(params, g3, at) == pytest.approx(3.0 * generator(params, g1, at), abs=1e-7)

    def test_boundary_node_rejected(self, params):
        with pytest.raises(ValueError):
            generator(params, ones_grid(), SurplusPoint(-14.0, 0.0))

    def test_non_node_rejected(self, params):
        with pytest.raises(ValueError):
            generator(params, ones_grid(), SurplusPoint(4.1234, 0.0))


class TestHjbResidual:
    def test_plane_has_exact_zero_derivative_terms(self, params):
        # upper-bound plane x1 + x2 + (c1+c2)/q: unit slopes exactly
        x = np.arange(0.0, 25.5, 0.5)
        f = grid_of(lambda a, b: a + b + 120.0, x, x)
        report = hjb_residual(params, f)
        assert np.all(report.term_a == 0.0)
        assert np.all(report.term_b == 0.0)
        # paying everything forever is never strictly profitable
        assert report.max_positive_violation <= 1e-9

    def test_indicator_off_below_zero(self, params):
        x = np.arange(-4.0, 8.5, 0.5)
        f = grid_of(lambda a, b: 5 * max(a, 0.0) + 5 * max(b, 0.0) + 1.0, x, x)
        report = hjb_residual(params, f)
        neg_rows = report.x1 < 0.0
        assert np.all(report.term_a[neg_rows, :] == 0.0)

    def test_residual_is_pointwise_max(self, params):
        x = np.arange(0.0, 12.5, 0.5)
        rng = np.random.default_rng(21)
        f = GriddedFunction(x, x, rng.uniform(0.0, 50.0, size=(x.size, x.size)))
        report = hjb_residual(params, f)
        stacked = np.maximum(np.maximum(report.term_a, report.term_b), report.term_c)
        assert np.array_equal(report.residual, stacked)

    def test_small_grid_rejected(self, params):
        x = np.arange(0.0, 2.0, 0.5)
        with pytest.raises(ValueError):
            hjb_residual(params, GriddedFunction(x, x, np.zeros((x.size, x.size))))

    def test_finite_difference_order(self, params):
        # central differences on a smooth candidate: error order ~ h^2,
        # measured as a log-log slope over refinements
        errs = []
        steps = [0.8, 0.4, 0.2, 0.1]
        for h in steps:
            x = np.arange(0.0, 16.0 + h / 2, h)
            f = grid_of(lambda a, b: math.sin(0.4 * a) * math.cos(0.3 * b) * 10.0, x, x)
            v = f.values
            fx1 = (v[2:, 1:-1] - v[:-2, 1:-1]) / (2 * h)
            xi = x[1:-1]
            exact = np.array([[4.0 * math.cos(0.4 * a) * math.cos(0.3 * b) for b in xi] for a in xi])
            errs.append(float(np.abs(fx1 - exact).max()))
        slope = np.polyfit(np.log(steps), np.log(errs), 1)[0]
        assert slope >= 1.8

    def test_tolerance_helpers(self, params):
        assert derivative_tolerance(0.1, 0.5) == pytest.approx(3 * 0.1 / 0.5 + 0.5)
        assert generator_tolerance(params, 0.0, 0.5, c_h=2.0) == pytest.approx(1.0)
        assert generator_tolerance(params, 0.1, 0.5) > derivative_tolerance(0.0, 0.5)


class TestCsvInterop:
    GRID_CSV = (
        "# manifest=abc\n"
        "x1,x2,v1_mean,v1_stderr,v2_mean,v2_stderr\n"
        + "".join(
            f"{a},{b},{a + b + 1.0},0.05,{a + b},0.04\n"
            for a in (0.0, 1.0, 2.0)
            for b in (0.0, 1.0, 2.0)
        )
    )

    def test_roundtrip(self):
        f, stderr = gridded_from_grid_csv(io.StringIO(self.GRID_CSV), "v1")
        assert f.values.shape == (3, 3)
        assert f.values[1, 2] == 4.0
        assert stderr == 0.05
        f2, stderr2 = gridded_from_grid_csv(io.StringIO(self.GRID_CSV), "v2")
        assert f2.values[1, 2] == 3.0
        assert stderr2 == 0.04

    def test_incomplete_rectangle_rejected(self):
        bad = "\n".join(self.GRID_CSV.splitlines()[:-2]) + "\n"
        with pytest.raises(ValueError):
            gridded_from_grid_csv(io.StringIO(bad), "v1")

    def test_bad_column_rejected(self):
        with pytest.raises(ValueError):
            gridded_from_grid_csv(io.StringIO(self.GRID_CSV), "v3")

    def test_residual_csv_written(self, params):
        x = np.arange(0.0, 3.5, 0.5)
        f = grid_of(lambda a, b: a + b + 120.0, x, x)
        report = hjb_residual(params, f)
        buf = io.StringIO()
        write_residual_csv(buf, report)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "x1,x2,term_a,term_b,term_c,residual"
        assert lines[-1].startswith("# summary")
        assert len(lines) == 2 + report.x1.size * report.x2.size
