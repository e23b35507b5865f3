"""Event-driven simulation, Monte-Carlo estimation and closed-form analytics
for dividend strategies in a two-branch risk model with simultaneous ruin."""

__version__ = "0.1.0"

from .analytics import (
    BarrierSolve,
    BarrierSolveError,
    BoundsResult,
    RootPair,
    barrier_interval,
    characteristic_roots,
    explicit_bang_value_negative,
    solve_barrier,
    value_bounds,
)
from .engine import (
    EngineError,
    PathOutcome,
    SimConfig,
    branch_recovery_time,
    discount_rate_segment,
    ruin_check,
    simulate_path,
    simulate_path_from_claims,
    solvency_upper_bound,
)
from .hjb import (
    GriddedFunction,
    HjbResidualReport,
    generator,
    hjb_residual,
    integral_operator,
)
from .model import (
    ClaimDistribution,
    ClaimShareSumError,
    ConfigError,
    ExponentialClaims,
    InsolventStateError,
    ModelParams,
    NonPositiveParamError,
    ParamError,
    ProfitabilityOrderError,
    SurplusPoint,
    load_params,
    parse_config,
    sample_claim,
    uncontrolled_surplus,
    validate_params,
)
from .montecarlo import (
    Estimate,
    GridResult,
    SweepResult,
    compare_strategies,
    estimate_value,
    grid_values,
    sweep_barrier,
)
from .strategy import (
    Bang1,
    Bang2,
    BarrierAction,
    DividendLedger,
    DominanceTransform,
    Greedy,
    NoDividends,
    StrategyError,
    StrategySpec,
    bang_payout_closed_form,
    barrier_action,
    dominance_transform_payout,
    format_strategy,
    parse_strategy,
    region_classify,
)
from .streams import RandomSource

__all__ = [
    "BarrierSolve",
    "BarrierSolveError",
    "BoundsResult",
    "RootPair",
    "barrier_interval",
    "characteristic_roots",
    "explicit_bang_value_negative",
    "solve_barrier",
    "value_bounds",
    "EngineError",
    "PathOutcome",
    "SimConfig",
    "branch_recovery_time",
    "discount_rate_segment",
    "ruin_check",
    "simulate_path",
    "simulate_path_from_claims",
    "solvency_upper_bound",
    "GriddedFunction",
    "HjbResidualReport",
    "generator",
    "hjb_residual",
    "integral_operator",
    "ClaimDistribution",
    "ClaimShareSumError",
    "ConfigError",
    "ExponentialClaims",
    "InsolventStateError",
    "ModelParams",
    "NonPositiveParamError",
    "ParamError",
    "ProfitabilityOrderError",
    "SurplusPoint",
    "load_params",
    "parse_config",
    "sample_claim",
    "uncontrolled_surplus",
    "validate_params",
    "Estimate",
    "GridResult",
    "SweepResult",
    "compare_strategies",
    "estimate_value",
    "grid_values",
    "sweep_barrier",
    "Bang1",
    "Bang2",
    "BarrierAction",
    "DividendLedger",
    "DominanceTransform",
    "Greedy",
    "NoDividends",
    "StrategyError",
    "StrategySpec",
    "bang_payout_closed_form",
    "barrier_action",
    "dominance_transform_payout",
    "format_strategy",
    "parse_strategy",
    "region_classify",
    "RandomSource",
    "__version__",
]
