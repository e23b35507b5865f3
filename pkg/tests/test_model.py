import math

import numpy as np
import pytest

from divbang import (
    ClaimShareSumError,
    ConfigError,
    ExponentialClaims,
    ModelParams,
    NonPositiveParamError,
    ProfitabilityOrderError,
    RandomSource,
    SurplusPoint,
    parse_config,
    sample_claim,
    uncontrolled_surplus,
)
from oracles import draw_claims, random_params, replay_uncontrolled


class TestValidation:
    def test_example_params_accepted(self, params):
        assert params.c1 == 2.0 and params.b2 == 0.75

    def test_equal_profitability_accepted(self):
        p = ModelParams(c1=1, c2=1, b1=0.5, b2=0.5, lam=1, gamma=0.25, q=0.05)
        assert p.c1 / p.b1 == p.c2 / p.b2

    def test_profitability_order_rejected(self):
        with pytest.raises(ProfitabilityOrderError):
            ModelParams(c1=1, c2=4, b1=0.5, b2=0.5, lam=1, gamma=0.25, q=0.05)

    def test_share_sum_rejected(self):
        with pytest.raises(ClaimShareSumError):
            ModelParams(c1=2, c2=4, b1=0.25, b2=0.80, lam=1, gamma=0.25, q=0.05)

    @pytest.mark.parametrize("field", ["c1", "c2", "lam", "gamma", "q"])
    def test_non_positive_rejected(self, field):
        kwargs = dict(c1=2, c2=4, b1=0.25, b2=0.75, lam=1, gamma=0.25, q=0.05)
        kwargs[field] = 0.0
        with pytest.raises(NonPositiveParamError):
            ModelParams(**kwargs)

    def test_share_recomputed_exactly(self):
        p = ModelParams(c1=2, c2=4, b1=0.3, b2=0.7 + 1e-13, lam=1, gamma=0.25, q=0.05)
        assert p.b2 == 1.0 - p.b1


class TestSolvency:
    def test_one_negative_branch_is_solvent(self):
        assert SurplusPoint(-1.0, 0.5).solvent

    def test_both_negative_is_insolvent(self):
        assert not SurplusPoint(-1.0, -0.001).solvent

    def test_origin_is_solvent(self):
        assert SurplusPoint(0.0, 0.0).solvent


class TestExponentialClaims:
    def test_inverse_cdf_at_half(self):
        dist = ExponentialClaims(0.25)
        assert dist.ppf(0.5) == pytest.approx(-math.log(0.5) / 0.25, rel=1e-12)
        assert dist.ppf(0.5) == pytest.approx(2.77259, abs=1e-5)

    def test_inverse_cdf_boundary(self):
        dist = ExponentialClaims(0.25)
        assert dist.ppf(0.0) == 0.0
        assert dist.ppf(1.0 - 1e-9) > dist.ppf(0.9)

    def test_cdf_shape(self):
        dist = ExponentialClaims(0.25)
        assert dist.cdf(-1.0) == 0.0
        assert dist.cdf(0.0) == 0.0
        grid = np.linspace(0.0, 50.0, 200)
        vals = [dist.cdf(a) for a in grid]
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        assert dist.cdf(1e9) == pytest.approx(1.0)

    def test_empirical_mean(self):
        dist = ExponentialClaims(0.25)
        rs = RandomSource(2024, 0)
        n = 1_000_000
        total = 0.0
        for _ in range(n):
            total += sample_claim(dist, rs)
        assert total / n == pytest.approx(4.0, abs=0.02)


class TestUncontrolledSurplus:
    def test_pure_drift(self, params):
        out = uncontrolled_surplus(params, SurplusPoint(1, 2), [], 3.0)
        assert (out.x1, out.x2) == (7.0, 14.0)

    def test_single_claim(self, params):
        out = uncontrolled_surplus(params, SurplusPoint(0, 0), [(1.0, 4.0)], 1.0)
        assert out.x1 == pytest.approx(1.0)
        assert out.x2 == pytest.approx(1.0)

    def test_time_zero_identity(self, params):
        out = uncontrolled_surplus(params, SurplusPoint(3, -2), [(1.0, 4.0)], 0.0)
        assert (out.x1, out.x2) == (3.0, -2.0)

    def test_unsorted_claims_rejected(self, params):
        with pytest.raises(ValueError):
            uncontrolled_surplus(params, SurplusPoint(0, 0), [(2.0, 1.0), (1.0, 1.0)], 3.0)

    def test_matches_step_replay(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            p = random_params(rng)
            x0 = SurplusPoint(float(rng.uniform(-5, 20)), float(rng.uniform(0, 20)))
            claims = draw_claims(p, 11, int(rng.integers(0, 1000)), 12)
            t = float(rng.uniform(0, claims[-1][0] * 1.2))
            got = uncontrolled_surplus(p, x0, claims, t)
            want = replay_uncontrolled(p, x0, claims, t)
            assert got.x1 == pytest.approx(want[0], rel=1e-12, abs=1e-12)
            assert got.x2 == pytest.approx(want[1], rel=1e-12, abs=1e-12)

    def test_claims_move_along_share_ray(self):
        rng = np.random.default_rng(8)
        for _ in range(25):
            p = random_params(rng)
            size = float(rng.uniform(0.1, 30.0))
            d1, d2 = p.b1 * size, p.b2 * size
            assert d2 / d1 == pytest.approx(p.b2 / p.b1, rel=1e-14)


class TestConfig:
    GOOD = "c1=2\nc2=4\nb1=0.25\nb2=0.75\nlambda=1\ngamma=0.25\nq=0.05\n"

    def test_parse_good(self):
        p = parse_config(self.GOOD)
        assert p.lam == 1.0 and p.gamma == 0.25

    def test_comments_and_blank_lines(self):
        p = parse_config("# header\n\n" + self.GOOD.replace("q=0.05", "q=0.05  # discount"))
        assert p.q == 0.05

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config(self.GOOD + "rho=3\n")

    def test_missing_key_rejected(self):
        with pytest.raises(ConfigError, match="missing"):
            parse_config("c1=2\nc2=4\n")

    def test_duplicate_key_rejected(self):
        with pytest.raises(ConfigError, match="duplicate"):
            parse_config(self.GOOD + "q=0.1\n")

    def test_bad_number_rejected(self):
        with pytest.raises(ConfigError, match="invalid number"):
            parse_config(self.GOOD.replace("q=0.05", "q=x"))
