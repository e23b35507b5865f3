"""Closed-form results: value bounds, explicit bang values, barrier solver.

All formulas here are exponential-claims results. The barrier fixed point
comes from the one-dimensional problem in which the other branch's
stochastic payout stream is frozen at a constant rate; sweeping that
constant over [0, c_other] brackets the barrier of the full problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import ModelParams, SurplusPoint

#: bisection bracket upper end, in units of the mean claim size 1/gamma
BRACKET_MEAN_CLAIMS = 200.0

#: residual tolerance of the fixed-point solve
SOLVER_TOL = 1e-9


class BarrierSolveError(RuntimeError):
    """The fixed-point equation had no sign change in the search bracket."""


@dataclass(frozen=True)
class BoundsResult:
    """Closed-form lower and upper bound on the optimal value at a point."""

    lower: float
    upper: float


@dataclass(frozen=True)
class RootPair:
    """Roots of the barrier characteristic polynomial, R2 < 0 < R1."""

    R1: float
    R2: float


@dataclass(frozen=True)
class BarrierSolve:
    """Solution of the barrier fixed-point equation for one reward rate."""

    x_star: float
    lambda_div: float
    roots: RootPair
    iterations: int
    residual: float


def value_bounds(p: ModelParams, x: SurplusPoint) -> BoundsResult:
    """Bounds on the optimal value function at a solvent point.

    On the nonnegative quadrant the value lies between the pay-everything
    value x1 + x2 + (c1+c2)/(q+lam) and the all-premium-forever bound
    x1 + x2 + (c1+c2)/q. With one branch negative, that branch's
    contribution decays exponentially in its recovery time.
    """
    x.require_solvent()
    ql = p.q + p.lam
    if x.x1 >= 0.0 and x.x2 >= 0.0:
        return BoundsResult(
            lower=x.x1 + x.x2 + (p.c1 + p.c2) / ql,
            upper=x.x1 + x.x2 + (p.c1 + p.c2) / p.q,
        )
    if x.x1 >= 0.0:  # x2 < 0
        return BoundsResult(
            lower=x.x1 + p.c1 / ql + (p.c2 / ql) * math.exp(ql * x.x2 / p.c2),
            upper=x.x1 + p.c1 / p.q + (p.c2 / p.q) * math.exp(p.q * x.x2 / p.c2),
        )
    # x1 < 0 <= x2: same formula with branch roles exchanged
    return BoundsResult(
        lower=x.x2 + p.c2 / ql + (p.c1 / ql) * math.exp(ql * x.x1 / p.c1),
        upper=x.x2 + p.c2 / p.q + (p.c1 / p.q) * math.exp(p.q * x.x1 / p.c1),
    )


def explicit_bang_value_negative(p: ModelParams, x1: float, x2: float, v00: float) -> float:
    """Value of a branch-one strategy paired with maximal branch-two payout,
    started at x1 < 0, x2 >= 0, expressed through its value v00 at (0, 0):

        x2 + c2/(q+lam) + (v00 - c2/(q+lam)) * exp((q+lam) x1 / c1).

    As x1 -> -inf this decays to x2 + c2/(q+lam).
    """
    if x1 >= 0.0:
        raise ValueError(f"x1 must be negative, got {x1!r}")
    if x2 < 0.0:
        raise ValueError(f"x2 must be non-negative, got {x2!r}")
    if v00 < 0.0:
        raise ValueError(f"v00 must be non-negative, got {v00!r}")
    ql = p.q + p.lam
    floor = p.c2 / ql
    return x2 + floor + (v00 - floor) * math.exp(ql * x1 / p.c1)


def _branch_params(p: ModelParams, branch: int) -> tuple[float, float]:
    """(premium rate, exponential rate of the branch's claim share)."""
    if branch == 1:
        return p.c1, p.gamma / p.b1
    if branch == 2:
        return p.c2, p.gamma / p.b2
    raise ValueError(f"branch must be 1 or 2, got {branch!r}")


def characteristic_polynomial(p: ModelParams, branch: int) -> tuple[float, float, float]:
    """Coefficients (a, b, c) of P(R) = a R^2 + b R + c for the branch.

    P(R) = c R^2 + (m c - (q+lam)) R - m q with m the exponential rate of
    the claims hitting this branch.
    """
    c, m = _branch_params(p, branch)
    return c, m * c - (p.q + p.lam), -m * p.q


def characteristic_roots(p: ModelParams, branch: int) -> RootPair:
    """Roots of the characteristic polynomial, R2 < 0 < R1.

    The constant term is negative, so the discriminant is positive and the
    roots straddle zero for every valid parameter set.
    """
    a, b, c = characteristic_polynomial(p, branch)
    disc = math.sqrt(b * b - 4.0 * a * c)
    return RootPair(R1=(-b + disc) / (2.0 * a), R2=(-b - disc) / (2.0 * a))


def _fixed_point_gap(p: ModelParams, branch: int, lambda_div: float, roots: RootPair):
    """g(x) = x - RHS(x) of the fixed-point equation; -inf where undefined.

    The RHS's log argument requires m q + e^{R2 x} (m + R2) lambda R2 > 0;
    for lambda > 0 that fails below some threshold, where g is taken as
    -inf so bisection sees a consistent sign.
    """
    c, m = _branch_params(p, branch)
    q = p.q
    r1, r2 = roots.R1, roots.R2

    def g(x: float) -> float:
        num = r2 * r2 * (m + r2) * (m * q + math.exp(r1 * x) * (m + r1) * lambda_div * r1)
        den = r1 * r1 * (m + r1) * (m * q + math.exp(r2 * x) * (m + r2) * lambda_div * r2)
        if den <= 0.0 or num <= 0.0:
            return -math.inf
        return x - math.log(num / den) / (r1 - r2)

    return g


def solve_barrier(p: ModelParams, branch: int, lambda_div: float) -> BarrierSolve:
    """Solve the barrier fixed-point equation for a constant reward rate.

    lambda_div is the frozen payout rate of the other branch. The zero-rate
    case has a closed form; otherwise g(x) = x - RHS(x) is bisected on
    [0, 200/gamma] to a residual below SOLVER_TOL.

    Raises:
        BarrierSolveError: g has no sign change over the bracket.
    """
    if lambda_div < 0.0:
        raise ValueError(f"lambda_div must be non-negative, got {lambda_div!r}")
    roots = characteristic_roots(p, branch)
    c, m = _branch_params(p, branch)
    g = _fixed_point_gap(p, branch, lambda_div, roots)

    if lambda_div == 0.0:
        ratio = (roots.R2 * roots.R2 * (m + roots.R2)) / (roots.R1 * roots.R1 * (m + roots.R1))
        x = math.log(ratio) / (roots.R1 - roots.R2)
        if x < 0.0:
            # reported, never clamped: a negative formal root means the
            # one-dimensional problem wants an immediate full payout
            raise BarrierSolveError(
                f"fixed point {x:g} is negative; no nonnegative barrier solves the equation"
            )
        return BarrierSolve(x_star=x, lambda_div=0.0, roots=roots, iterations=0, residual=abs(g(x)))

    lo = 0.0
    hi = BRACKET_MEAN_CLAIMS / p.gamma
    glo, ghi = g(lo), g(hi)
    if glo == 0.0:
        return BarrierSolve(lo, lambda_div, roots, 0, 0.0)
    if glo > 0.0 or ghi < 0.0:
        raise BarrierSolveError(
            f"no sign change on [{lo:g}, {hi:g}]: g({lo:g})={glo:g}, g({hi:g})={ghi:g}"
        )
    iterations = 0
    x = lo
    while iterations < 200:
        x = 0.5 * (lo + hi)
        gx = g(x)
        iterations += 1
        if abs(gx) < SOLVER_TOL and math.isfinite(gx):
            break
        if gx < 0.0:
            lo = x
        else:
            hi = x
    residual = abs(g(x))
    if not residual < SOLVER_TOL:
        raise BarrierSolveError(f"bisection stalled at x={x!r} with residual {residual!r}")
    return BarrierSolve(x_star=x, lambda_div=lambda_div, roots=roots, iterations=iterations, residual=residual)


def barrier_interval(p: ModelParams, branch: int) -> tuple[BarrierSolve, BarrierSolve]:
    """Barrier solves at the two extreme reward rates (0 and the other
    branch's full premium rate); a heuristic search range for the barrier
    of the full problem, not a guarantee.
    """
    other_premium = p.c2 if branch == 1 else p.c1
    return solve_barrier(p, branch, 0.0), solve_barrier(p, branch, other_premium)
