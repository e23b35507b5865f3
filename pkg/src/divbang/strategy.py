"""Dividend strategy specifications and their closed-form building blocks.

A strategy assigns each branch a payout rule. The maximal univariate rule
("bang") immediately pays any positive surplus and thereafter streams all
premium whenever the uncontrolled branch sits at a nonnegative running
maximum; its cumulative payout has the closed form max(running_sup, 0).
Operationally the bang rule is a barrier at level zero, so every shipped
strategy except the dominance transform reduces to a pair of per-branch
barrier levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .model import ModelParams, SurplusPoint


class StrategyError(ValueError):
    """A strategy specification is invalid or unsupported here."""


@dataclass(frozen=True)
class Bang1:
    """Barrier strategy at ``level`` on branch one; branch two pays maximally."""

    level: float

    def __post_init__(self):
        if not self.level >= 0.0:
            raise StrategyError(f"barrier level must be non-negative, got {self.level!r}")


@dataclass(frozen=True)
class Bang2:
    """Barrier strategy at ``level`` on branch two; branch one pays maximally."""

    level: float

    def __post_init__(self):
        if not self.level >= 0.0:
            raise StrategyError(f"barrier level must be non-negative, got {self.level!r}")


@dataclass(frozen=True)
class Greedy:
    """Both branches pay maximally; ruin occurs at the first claim."""


@dataclass(frozen=True)
class NoDividends:
    """Neither branch ever pays."""


@dataclass(frozen=True)
class DominanceTransform:
    """Wrap ``inner`` with the payout-improving transform.

    Branch two is switched to the maximal payout rule and branch one pays

        L1(t) = min{L1_inner(t),
                    x1 - (b1/b2) x2 + (c1 - (b1/b2) c2) t + (b1/b2) L2_inner(t)},

    which never ruins earlier than the inner strategy and never pays less
    in total. Valid when b1 <= b2 and the start point satisfies
    (b2/b1) x1 >= x2; for x2 < 0 the construction is deferred until branch
    two recovers, which the pathwise realization handles automatically.
    """

    inner: "StrategySpec"


StrategySpec = Union[Bang1, Bang2, Greedy, NoDividends, DominanceTransform]


def format_strategy(spec: StrategySpec) -> str:
    """Serialize a spec to the flag grammar used by the command line."""
    if isinstance(spec, Bang1):
        return f"bang1:{spec.level:g}"
    if isinstance(spec, Bang2):
        return f"bang2:{spec.level:g}"
    if isinstance(spec, Greedy):
        return "greedy"
    if isinstance(spec, NoDividends):
        return "none"
    if isinstance(spec, DominanceTransform):
        return f"transform({format_strategy(spec.inner)})"
    raise StrategyError(f"unknown strategy spec {spec!r}")


def parse_strategy(text: str) -> StrategySpec:
    """Parse the flag grammar: bang1:<b>, bang2:<b>, greedy, none, transform(<inner>)."""
    s = text.strip()
    if s == "greedy":
        return Greedy()
    if s == "none":
        return NoDividends()
    if s.startswith("bang1:") or s.startswith("bang2:"):
        kind, _, level_text = s.partition(":")
        try:
            level = float(level_text)
        except ValueError:
            raise StrategyError(f"invalid barrier level {level_text!r} in {text!r}") from None
        return Bang1(level) if kind == "bang1" else Bang2(level)
    if s.startswith("transform(") and s.endswith(")"):
        return DominanceTransform(parse_strategy(s[len("transform(") : -1]))
    raise StrategyError(f"cannot parse strategy {text!r}")


def bang_payout_closed_form(x0: float, running_sup: float) -> float:
    """Cumulative maximal payout of one branch.

    ``running_sup`` is the running supremum of the uncontrolled branch, so
    the cumulative dividends paid by the bang rule up to now equal
    max(running_sup, 0): the initial lump (x0 v 0) plus all premium
    collected while the branch sat at a nonnegative running maximum.
    """
    if running_sup < x0:
        raise ValueError(f"running supremum {running_sup!r} below initial value {x0!r}")
    return max(running_sup, 0.0)


@dataclass(frozen=True)
class BarrierAction:
    """One barrier decision: kind in {'lump', 'rate', 'none'}; amount set for lumps."""

    kind: str
    amount: float = 0.0


def barrier_action(level: float, controlled_surplus: float) -> BarrierAction:
    """Barrier rule: lump above the level, stream premium at it, idle below."""
    if level < 0.0:
        raise StrategyError(f"barrier level must be non-negative, got {level!r}")
    if controlled_surplus > level:
        return BarrierAction("lump", controlled_surplus - level)
    if controlled_surplus == level:
        return BarrierAction("rate")
    return BarrierAction("none")


def region_classify(p: ModelParams, x: SurplusPoint) -> str:
    """Classify a solvent point against the claim ray x2 = (b2/b1) x1.

    Returns 'D1' strictly below the ray, 'D2' strictly above, 'boundary'
    on it. Claims move states parallel to the ray, so only drift or
    dividend payments can change the region.
    """
    x.require_solvent()
    lhs = (p.b2 / p.b1) * x.x1
    if lhs > x.x2:
        return "D1"
    if lhs < x.x2:
        return "D2"
    return "boundary"


def dominance_transform_payout(
    p: ModelParams,
    x0: SurplusPoint,
    inner_l1: float,
    inner_l2: float,
    t: float,
    x2_running_sup: float,
) -> tuple[float, float]:
    """Transformed cumulative payouts at time ``t`` given the inner ledger.

    Restricted case of the construction: requires b1 <= b2 and a start
    point in D1 with both coordinates non-negative. ``x2_running_sup`` is
    the running supremum of the uncontrolled branch-two surplus, needed for
    the bang payout on branch two.
    """
    if p.b1 > p.b2:
        raise StrategyError("dominance transform requires b1 <= b2")
    if x0.x1 < 0.0 or x0.x2 < 0.0:
        raise ValueError("restricted transform payout requires componentwise non-negative start")
    if (p.b2 / p.b1) * x0.x1 < x0.x2:
        raise ValueError("start point must satisfy (b2/b1) x1 >= x2")
    if t < 0.0:
        raise ValueError(f"t must be non-negative, got {t!r}")
    kappa = p.b1 / p.b2
    cap = x0.x1 - kappa * x0.x2 + (p.c1 - kappa * p.c2) * t + kappa * inner_l2
    l1 = min(inner_l1, cap)
    l2 = bang_payout_closed_form(x0.x2, x2_running_sup)
    return l1, l2


@dataclass
class DividendLedger:
    """Running per-branch dividend account of one simulated path.

    Cumulative amounts are nondecreasing; payments are only recorded while
    the paying branch's controlled surplus is non-negative and never push
    it below zero (the simulation engine enforces both).
    """

    total_1: float = 0.0
    total_2: float = 0.0
    discounted_1: float = 0.0
    discounted_2: float = 0.0
    lumps: list[tuple[float, int, float]] = field(default_factory=list)
    record_lumps: bool = False

    def pay_lump(self, t: float, branch: int, amount: float, discount_factor: float) -> None:
        if amount < 0.0:
            raise ValueError(f"lump amount must be non-negative, got {amount!r}")
        if branch == 1:
            self.total_1 += amount
            self.discounted_1 += amount * discount_factor
        else:
            self.total_2 += amount
            self.discounted_2 += amount * discount_factor
        if self.record_lumps:
            self.lumps.append((t, branch, amount))

    def pay_stream(self, branch: int, rate: float, duration: float, discounted: float) -> None:
        if branch == 1:
            self.total_1 += rate * duration
            self.discounted_1 += discounted
        else:
            self.total_2 += rate * duration
            self.discounted_2 += discounted
