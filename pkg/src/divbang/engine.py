"""Exact event-driven simulation of one controlled path.

Between claims every branch evolves linearly, so barrier hits, recovery
instants and discounted dividend flows all have closed forms; the engine
splits inter-claim segments at those instants and never time-steps. A path
ends at the first claim after which both controlled branches are strictly
negative (simultaneous ruin), or when the discounted value of everything
that could still be paid drops below the configured tail budget, in which
case the path is censored.

Payment timing convention: dividends are left-continuous; at a claim
instant the jump is applied first and lump payments react to the post-jump
state. Lump payments at time t are discounted with exp(-q t).

The pure-Python engine here is the reference implementation; it mirrors
the arithmetic of the compiled batch kernel in :mod:`divbang._kernels`
operation for operation so the two produce identical numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, TextIO

from .model import (
    ClaimDistribution,
    ModelParams,
    SurplusPoint,
    claim_stream,
)
from .strategy import (
    Bang1,
    Bang2,
    DividendLedger,
    DominanceTransform,
    Greedy,
    NoDividends,
    StrategyError,
    StrategySpec,
)
from .streams import RandomSource

TRACE_COLUMNS = ("t", "event", "branch", "x1", "x2", "l1", "l2")

#: trace row: (t, event, branch, x1, x2, l1, l2) with controlled surpluses
#: and cumulative dividends as of the event; branch 0 marks path-level events.
TraceRow = tuple[float, str, int, float, float, float, float]


class EngineError(RuntimeError):
    """The simulation could not be completed (event guard exceeded, ...)."""


@dataclass(frozen=True)
class SimConfig:
    """Simulation controls.

    horizon_epsilon: tail budget; a path is censored once the discounted
        upper bound on all remaining payouts falls below this value.
    max_events: guard on the number of claims processed per path.
    trace_enabled: record a per-event trace on the outcome.
    """

    horizon_epsilon: float = 1e-6
    max_events: int = 1_000_000
    trace_enabled: bool = False

    def __post_init__(self):
        if not 0.0 < self.horizon_epsilon < 1.0:
            raise ValueError(f"horizon_epsilon must lie in (0, 1), got {self.horizon_epsilon!r}")
        if self.max_events < 1:
            raise ValueError(f"max_events must be >= 1, got {self.max_events!r}")


@dataclass(frozen=True)
class PathOutcome:
    """Result of one simulated path.

    ruin_time is +inf when the path was censored at the truncation horizon
    (or, for replayed finite claim sequences, when the claims ran out).
    Whenever finite, it coincides with a claim arrival time.
    """

    ruin_time: float
    discounted_dividends_1: float
    discounted_dividends_2: float
    total_dividends_1: float
    total_dividends_2: float
    n_claims: int
    censored: bool
    trace: list[TraceRow] | None = None

    @property
    def discounted_total(self) -> float:
        return self.discounted_dividends_1 + self.discounted_dividends_2


def discount_rate_segment(rate: float, a: float, b: float, q: float) -> float:
    """Discounted value of paying at ``rate`` over [a, b]: rate (e^{-qa} - e^{-qb})/q."""
    if q <= 0.0:
        raise ValueError(f"q must be strictly positive, got {q!r}")
    if a < 0.0 or a > b:
        raise ValueError(f"need 0 <= a <= b, got a={a!r}, b={b!r}")
    eb = 0.0 if math.isinf(b) else math.exp(-q * b)
    return rate * (math.exp(-q * a) - eb) / q


def ruin_check(x1: float, x2: float) -> bool:
    """True iff the state is ruined: both branches strictly negative."""
    return x1 < 0.0 and x2 < 0.0


def branch_recovery_time(x: float, c: float) -> float:
    """Time -x/c for a negative branch at premium rate c to reach zero."""
    if x >= 0.0:
        raise ValueError(f"branch surplus must be negative, got {x!r}")
    if c <= 0.0:
        raise ValueError(f"premium rate must be strictly positive, got {c!r}")
    return -x / c


def solvency_upper_bound(p: ModelParams, y1: float, y2: float) -> float:
    """Upper bound on the value of any admissible strategy from (y1, y2).

    Piecewise closed form: y1 + y2 + (c1+c2)/q on the nonnegative quadrant,
    an exponential-decay variant when one branch is negative, and 0 once
    both are. Used to budget the truncation horizon.
    """
    if y1 >= 0.0:
        if y2 >= 0.0:
            return y1 + y2 + (p.c1 + p.c2) / p.q
        return y1 + p.c1 / p.q + (p.c2 / p.q) * math.exp(p.q * y2 / p.c2)
    if y2 >= 0.0:
        return y2 + p.c2 / p.q + (p.c1 / p.q) * math.exp(p.q * y1 / p.c1)
    return 0.0


def barrier_levels(spec: StrategySpec) -> tuple[bool, float, bool, float] | None:
    """Reduce a spec to per-branch (paying?, barrier level) pairs.

    The maximal payout rule is a barrier at level zero. Returns None for
    specs that are not a plain pair of per-branch barrier rules.
    """
    if isinstance(spec, Bang1):
        return True, spec.level, True, 0.0
    if isinstance(spec, Bang2):
        return True, 0.0, True, spec.level
    if isinstance(spec, Greedy):
        return True, 0.0, True, 0.0
    if isinstance(spec, NoDividends):
        return False, math.inf, False, math.inf
    if isinstance(spec, DominanceTransform):
        return None
    raise StrategyError(f"unknown strategy spec {spec!r}")


# ---------------------------------------------------------------------------
# internal timeline primitives (consumed by the dominance transform)

_SEG = 0  # (t0, t1, y1, y2, slope1, slope2): linear piece, no jumps inside
_CLAIM = 1  # (t, size): both branches jump by -b_i * size
_LUMP = 2  # (t, branch, amount): controlled branch drops by amount
_END = 3  # (t, kind): kind in {"ruin", "censor", "exhausted"}


class _ClaimSource:
    """Uniform interface over an endless rng-driven stream or a replayed list."""

    def __init__(self, it: Iterator[tuple[float, float]], finite: bool):
        self._it = it
        self.finite = finite

    def next(self) -> tuple[float, float] | None:
        try:
            return next(self._it)
        except StopIteration:
            return None


def _replayed_claims(claims: Sequence[tuple[float, float]]) -> _ClaimSource:
    last = 0.0
    for arrival, _ in claims:
        if arrival <= last:
            raise ValueError("claim arrival times must be strictly increasing and positive")
        last = arrival

    def gen():
        prev = 0.0
        for arrival, size in claims:
            yield arrival - prev, size
            prev = arrival

    return _ClaimSource(gen(), finite=True)


def _run_barrier_path(
    p: ModelParams,
    x0: SurplusPoint,
    pay1: bool,
    lvl1: float,
    pay2: bool,
    lvl2: float,
    cfg: SimConfig,
    source: _ClaimSource,
    epsilon: float,
    trace: list[TraceRow] | None,
) -> PathOutcome:
    c1, c2, b1, b2, q = p.c1, p.c2, p.b1, p.b2, p.q
    y1, y2 = x0.x1, x0.x2
    t = 0.0
    ef = 1.0  # discount factor exp(-q t) at the current time
    led = DividendLedger()
    n = 0

    if trace is not None:
        trace.append((0.0, "start", 0, y1, y2, 0.0, 0.0))
    if pay1 and y1 > lvl1:
        led.pay_lump(0.0, 1, y1 - lvl1, 1.0)
        y1 = lvl1
        if trace is not None:
            trace.append((0.0, "lump", 1, y1, y2, led.total_1, led.total_2))
    if pay2 and y2 > lvl2:
        led.pay_lump(0.0, 2, y2 - lvl2, 1.0)
        y2 = lvl2
        if trace is not None:
            trace.append((0.0, "lump", 2, y1, y2, led.total_1, led.total_2))

    end_kind = "censor"
    while True:
        # Tail budget: everything still payable from here is worth at most
        # ef * bound; once below epsilon the path is censored. Replayed
        # claim lists are evaluated exactly instead.
        if not source.finite and ef * solvency_upper_bound(p, y1, y2) < epsilon:
            end_kind = "censor"
            break
        if n >= cfg.max_events:
            raise EngineError(f"max_events={cfg.max_events} exceeded at t={t:g}")
        drawn = source.next()
        if drawn is None:
            # Claims ran out: close the path on its claim-free tail (each
            # paying branch climbs to its barrier, then streams forever).
            if pay1:
                tb = (lvl1 - y1) / c1 if y1 < lvl1 else 0.0
                led.pay_stream(1, c1, math.inf, c1 * (ef * math.exp(-q * tb)) / q)
            if pay2:
                tb = (lvl2 - y2) / c2 if y2 < lvl2 else 0.0
                led.pay_stream(2, c2, math.inf, c2 * (ef * math.exp(-q * tb)) / q)
            end_kind = "exhausted"
            break
        dt, size = drawn
        ef_next = ef * math.exp(-q * dt)
        y1s, y2s = y1, y2
        tot1_pre, tot2_pre = led.total_1, led.total_2
        events: list[tuple[float, str, int]] = []

        if pay1:
            if y1 < lvl1:
                tb = (lvl1 - y1) / c1
                if trace is not None and y1 < 0.0 and -y1 / c1 < dt:
                    events.append((t + -y1 / c1, "recover", 1))
                if tb < dt:
                    efb = ef * math.exp(-q * tb)
                    led.pay_stream(1, c1, dt - tb, c1 * (efb - ef_next) / q)
                    events.append((t + tb, "rate_on", 1))
                    y1 = lvl1
                else:
                    y1 = y1 + c1 * dt
            else:
                led.pay_stream(1, c1, dt, c1 * (ef - ef_next) / q)
        else:
            y1 = y1 + c1 * dt
        if pay2:
            if y2 < lvl2:
                tb = (lvl2 - y2) / c2
                if trace is not None and y2 < 0.0 and -y2 / c2 < dt:
                    events.append((t + -y2 / c2, "recover", 2))
                if tb < dt:
                    efb = ef * math.exp(-q * tb)
                    led.pay_stream(2, c2, dt - tb, c2 * (efb - ef_next) / q)
                    events.append((t + tb, "rate_on", 2))
                    y2 = lvl2
                else:
                    y2 = y2 + c2 * dt
            else:
                led.pay_stream(2, c2, dt, c2 * (ef - ef_next) / q)
        else:
            y2 = y2 + c2 * dt

        if trace is not None and events:
            for et, kind, br in sorted(events):
                tau = et - t
                ev1 = _state_within_segment(y1s, pay1, lvl1, c1, tau)
                ev2 = _state_within_segment(y2s, pay2, lvl2, c2, tau)
                el1 = tot1_pre + _stream_paid_within_segment(y1s, pay1, lvl1, c1, tau)
                el2 = tot2_pre + _stream_paid_within_segment(y2s, pay2, lvl2, c2, tau)
                trace.append((et, kind, br, ev1, ev2, el1, el2))

        t = t + dt
        ef = ef_next
        n += 1
        streamed1 = trace is not None and pay1 and y1 == lvl1
        streamed2 = trace is not None and pay2 and y2 == lvl2
        y1 = y1 - b1 * size
        y2 = y2 - b2 * size
        if trace is not None:
            trace.append((t, "claim", 0, y1, y2, led.total_1, led.total_2))
            if streamed1 and y1 < lvl1:
                trace.append((t, "rate_off", 1, y1, y2, led.total_1, led.total_2))
            if streamed2 and y2 < lvl2:
                trace.append((t, "rate_off", 2, y1, y2, led.total_1, led.total_2))
        if ruin_check(y1, y2):
            end_kind = "ruin"
            break

    censored = end_kind == "censor"
    ruin_time = t if end_kind == "ruin" else math.inf
    if trace is not None:
        trace.append((t, "ruin" if end_kind == "ruin" else "censor", 0, y1, y2, led.total_1, led.total_2))
    return PathOutcome(
        ruin_time=ruin_time,
        discounted_dividends_1=led.discounted_1,
        discounted_dividends_2=led.discounted_2,
        total_dividends_1=led.total_1,
        total_dividends_2=led.total_2,
        n_claims=n,
        censored=censored,
        trace=trace,
    )


def _state_within_segment(y_start: float, pay: bool, lvl: float, c: float, tau: float) -> float:
    """Controlled surplus tau time units into a claim-free segment."""
    if pay:
        return min(y_start + c * tau, lvl) if y_start < lvl else lvl
    return y_start + c * tau


def _stream_paid_within_segment(y_start: float, pay: bool, lvl: float, c: float, tau: float) -> float:
    """Premium streamed during the first tau units of a claim-free segment."""
    if not pay:
        return 0.0
    if y_start >= lvl:
        return c * tau
    tb = (lvl - y_start) / c
    return c * (tau - tb) if tau > tb else 0.0


def simulate_path(
    p: ModelParams,
    x0: SurplusPoint,
    spec: StrategySpec,
    cfg: SimConfig,
    rng: RandomSource,
    dist: ClaimDistribution | None = None,
) -> PathOutcome:
    """Simulate one controlled path driven by ``rng``.

    Deterministic: identical arguments (including the rng's seed state)
    produce a bit-identical outcome.
    """
    x0.require_solvent()
    source = _ClaimSource(iter(claim_stream(p, rng, dist)), finite=False)
    return _dispatch(p, x0, spec, cfg, source)


def simulate_path_from_claims(
    p: ModelParams,
    x0: SurplusPoint,
    spec: StrategySpec,
    cfg: SimConfig,
    claims: Sequence[tuple[float, float]],
) -> PathOutcome:
    """Replay a fixed claim sequence of (arrival time, size) pairs, exactly.

    After the final claim the path is closed on its claim-free tail in
    closed form (no censoring), so outcomes are exact values for the given
    scenario; total dividends are infinite on such tails whenever a branch
    keeps streaming.
    """
    x0.require_solvent()
    return _dispatch(p, x0, spec, cfg, _replayed_claims(claims))


def _dispatch(p, x0, spec, cfg, source: _ClaimSource) -> PathOutcome:
    trace: list[TraceRow] | None = [] if cfg.trace_enabled else None
    levels = barrier_levels(spec)
    if levels is not None:
        pay1, lvl1, pay2, lvl2 = levels
        return _run_barrier_path(p, x0, pay1, lvl1, pay2, lvl2, cfg, source, cfg.horizon_epsilon, trace)
    assert isinstance(spec, DominanceTransform)
    return _run_transform_path(p, x0, spec, cfg, source, cfg.horizon_epsilon, trace, None)


# ---------------------------------------------------------------------------
# dominance transform realization


def _timeline_of(
    p: ModelParams,
    x0: SurplusPoint,
    spec: StrategySpec,
    cfg: SimConfig,
    source: _ClaimSource,
    epsilon: float,
) -> tuple[PathOutcome, list[tuple]]:
    """Simulate ``spec`` and record its joint piecewise-linear timeline."""
    levels = barrier_levels(spec)
    if levels is None:
        assert isinstance(spec, DominanceTransform)
        timeline: list[tuple] = []
        out = _run_transform_path(p, x0, spec, cfg, source, epsilon, None, timeline)
        return out, timeline
    pay1, lvl1, pay2, lvl2 = levels
    return _timeline_of_barrier_path(p, x0, pay1, lvl1, pay2, lvl2, cfg, source, epsilon)


def _timeline_of_barrier_path(
    p, x0, pay1, lvl1, pay2, lvl2, cfg, source: _ClaimSource, epsilon
) -> tuple[PathOutcome, list[tuple]]:
    """Barrier-pair run that also emits exact joint segment geometry.

    The value arithmetic stays in _run_barrier_path (fed a recorded copy of
    the claims, so outcomes are bit-identical with a plain run); this
    wrapper only reconstructs the controlled-path segments.
    """
    c1, c2, b1, b2 = p.c1, p.c2, p.b1, p.b2
    recorded: list[tuple[float, float]] = []

    def recording_gen():
        while True:
            drawn = source.next()
            if drawn is None:
                return
            recorded.append(drawn)
            yield drawn

    out = _run_barrier_path(
        p, x0, pay1, lvl1, pay2, lvl2, cfg,
        _ClaimSource(recording_gen(), source.finite), epsilon, None,
    )

    timeline: list[tuple] = []
    y1, y2 = x0.x1, x0.x2
    t = 0.0
    if pay1 and y1 > lvl1:
        timeline.append((_LUMP, 0.0, 1, y1 - lvl1))
        y1 = lvl1
    if pay2 and y2 > lvl2:
        timeline.append((_LUMP, 0.0, 2, y2 - lvl2))
        y2 = lvl2

    def slope(y, pay, lvl, c):
        return c if (not pay or y < lvl) else 0.0

    for dt, size in recorded:
        # claim time accumulated with the same operation as the engine so
        # ruin times agree bit for bit
        t_next = t + dt
        bounds = {t, t_next}
        hit1 = hit2 = None
        if pay1 and y1 < lvl1:
            tb = (lvl1 - y1) / c1
            if tb < dt:
                hit1 = t + tb
                bounds.add(hit1)
        if pay2 and y2 < lvl2:
            tb = (lvl2 - y2) / c2
            if tb < dt:
                hit2 = t + tb
                bounds.add(hit2)
        cuts = sorted(bounds)
        for a, b in zip(cuts[:-1], cuts[1:]):
            s1 = slope(y1, pay1, lvl1, c1)
            s2 = slope(y2, pay2, lvl2, c2)
            timeline.append((_SEG, a, b, y1, y2, s1, s2))
            # snap exactly onto the barrier at its hit boundary, as the
            # engine does; otherwise roundoff lets the replay drift past it
            y1 = lvl1 if b == hit1 else y1 + s1 * (b - a)
            y2 = lvl2 if b == hit2 else y2 + s2 * (b - a)
        t = t_next
        y1 -= b1 * size
        y2 -= b2 * size
        timeline.append((_CLAIM, t, size))
    if math.isfinite(out.ruin_time):
        timeline.append((_END, out.ruin_time, "ruin"))
    elif source.finite:
        # claim-free tail: cut at the remaining barrier hits so the tail
        # slopes flatten exactly where each branch starts streaming
        tail_hits = []
        if pay1 and y1 < lvl1:
            tail_hits.append((t + (lvl1 - y1) / c1, 1))
        if pay2 and y2 < lvl2:
            tail_hits.append((t + (lvl2 - y2) / c2, 2))
        for tc, branch in sorted(tail_hits):
            timeline.append((_SEG, t, tc, y1, y2,
                             slope(y1, pay1, lvl1, c1), slope(y2, pay2, lvl2, c2)))
            y1 = lvl1 if branch == 1 else y1 + slope(y1, pay1, lvl1, c1) * (tc - t)
            y2 = lvl2 if branch == 2 else y2 + slope(y2, pay2, lvl2, c2) * (tc - t)
            t = tc
        timeline.append((_SEG, t, math.inf, y1, y2,
                         slope(y1, pay1, lvl1, c1), slope(y2, pay2, lvl2, c2)))
        timeline.append((_END, math.inf, "exhausted"))
    else:
        timeline.append((_END, t, "censor"))
    return out, timeline


def _run_transform_path(
    p: ModelParams,
    x0: SurplusPoint,
    spec: DominanceTransform,
    cfg: SimConfig,
    source: _ClaimSource,
    epsilon: float,
    trace: list[TraceRow] | None,
    timeline_out: list[tuple] | None,
) -> PathOutcome:
    """Realize the dominance transform of an inner strategy on one path.

    Branch one's controlled surplus is max(Y1, (b1/b2) Y2) of the inner
    controlled pair and branch two follows the maximal payout rule on the
    raw surplus, which reproduces the capped-ledger definition pathwise.
    With a negative branch-two start the construction defers itself
    automatically: the max coincides with Y1 until branch two recovers.
    """
    if p.b1 > p.b2:
        raise StrategyError("dominance transform requires b1 <= b2")
    x0.require_solvent()
    if (p.b2 / p.b1) * x0.x1 < x0.x2:
        raise ValueError("dominance transform requires a start point with (b2/b1) x1 >= x2")

    # The inner run is truncated on a tighter budget so the transform's own
    # discarded tail stays within the configured epsilon.
    _, inner_tl = _timeline_of(p, x0, spec.inner, cfg, source, 0.5 * epsilon)

    kappa = p.b1 / p.b2
    c1, c2, b1, b2, q = p.c1, p.c2, p.b1, p.b2, p.q
    y1, y2 = x0.x1, x0.x2  # inner controlled pair, replayed
    z2 = x0.x2  # transform branch-two controlled surplus
    led = DividendLedger()
    t_end = 0.0
    n = 0
    end_kind = "censor"

    def z1() -> float:
        return max(y1, kappa * y2)

    if trace is not None:
        trace.append((0.0, "start", 0, z1(), z2, 0.0, 0.0))
    if z2 > 0.0:
        led.pay_lump(0.0, 2, z2, 1.0)
        if timeline_out is not None:
            timeline_out.append((_LUMP, 0.0, 2, z2))
        z2 = 0.0
        if trace is not None:
            trace.append((0.0, "lump", 2, z1(), z2, led.total_1, led.total_2))

    for prim in inner_tl:
        kind = prim[0]
        if kind == _SEG:
            _, t0, t1, y1, y2, s1, s2 = prim
            # cut the piece at branch-two recovery and at the max crossing
            cuts = [t0, t1]
            tr_prim = None
            if z2 < 0.0:
                tr_prim = t0 + (-z2) / c2
                if tr_prim < t1:
                    cuts.append(tr_prim)
            phi0 = y1 - kappa * y2
            dphi = s1 - kappa * s2
            if dphi != 0.0:
                tc = t0 - phi0 / dphi
                if t0 < tc < t1:
                    cuts.append(tc)
            cuts = sorted(set(cuts))
            for a, b in zip(cuts[:-1], cuts[1:]):
                phia = (y1 + s1 * (a - t0)) - kappa * (y2 + s2 * (a - t0))
                on_y1 = phia > 0.0 or (phia == 0.0 and dphi >= 0.0)
                sz1 = s1 if on_y1 else kappa * s2
                rate1 = c1 - sz1
                if rate1 > 0.0:
                    led.pay_stream(1, rate1, b - a, discount_rate_segment(rate1, a, b, q))
                # branch two streams from its recovery instant onward; the
                # recovery may fall strictly inside the piece when roundoff
                # shifted it past a cut, so pay directly from the instant
                # rather than relying on the cut having landed exactly
                z2_start = z2
                if z2 < 0.0:
                    if tr_prim is not None and tr_prim <= b:
                        rs = max(tr_prim, a)
                        led.pay_stream(2, c2, b - rs, discount_rate_segment(c2, rs, b, q))
                        z2 = 0.0
                        if trace is not None:
                            ya1 = y1 + s1 * (rs - t0)
                            ya2 = y2 + s2 * (rs - t0)
                            trace.append((rs, "recover", 2, max(ya1, kappa * ya2), 0.0, led.total_1, led.total_2))
                            trace.append((rs, "rate_on", 2, max(ya1, kappa * ya2), 0.0, led.total_1, led.total_2))
                    else:
                        z2 = z2 + c2 * (b - a)
                else:
                    led.pay_stream(2, c2, b - a, discount_rate_segment(c2, a, b, q))
                if timeline_out is not None:
                    za1 = max(y1 + s1 * (a - t0), kappa * (y2 + s2 * (a - t0)))
                    timeline_out.append(
                        (_SEG, a, b, za1, z2_start, sz1, c2 if z2_start < 0.0 else 0.0)
                    )
                if math.isinf(b):
                    break
            if math.isinf(t1):
                # claim-free tail of a replayed finite sequence
                t_end = math.inf
                end_kind = "exhausted"
                break
            y1 = y1 + s1 * (t1 - t0)
            y2 = y2 + s2 * (t1 - t0)
            t_end = t1
        elif kind == _CLAIM:
            _, tc, size = prim
            y1 = y1 - b1 * size
            y2 = y2 - b2 * size
            z2 = z2 - b2 * size
            n += 1
            t_end = tc
            if timeline_out is not None:
                timeline_out.append((_CLAIM, tc, size))
            if trace is not None:
                trace.append((tc, "claim", 0, z1(), z2, led.total_1, led.total_2))
            if ruin_check(z1(), z2):
                end_kind = "ruin"
                break
        elif kind == _LUMP:
            _, tl, branch, amount = prim
            before = z1()
            if branch == 1:
                y1 = y1 - amount
            else:
                y2 = y2 - amount
            drop = before - z1()
            if drop > 0.0:
                led.pay_lump(tl, 1, drop, math.exp(-q * tl))
                if timeline_out is not None:
                    timeline_out.append((_LUMP, tl, 1, drop))
                if trace is not None:
                    trace.append((tl, "lump", 1, z1(), z2, led.total_1, led.total_2))
            t_end = tl
        else:  # _END
            _, te, ekind = prim
            if ekind == "ruin" and end_kind != "ruin":
                # Unreachable by construction: the inner pair is ruined
                # exactly when max(Y1, kappa Y2) < 0.
                raise EngineError("transform outlived the inner strategy's ruin")
            if ekind in ("censor", "exhausted"):
                end_kind = ekind
            break

    censored = end_kind == "censor"
    ruin_time = t_end if end_kind == "ruin" else math.inf
    if trace is not None:
        label = "ruin" if end_kind == "ruin" else "censor"
        tfin = t_end if math.isfinite(t_end) else math.nan
        trace.append((tfin, label, 0, z1(), z2, led.total_1, led.total_2))
    if timeline_out is not None:
        timeline_out.append((_END, t_end, end_kind))
    return PathOutcome(
        ruin_time=ruin_time,
        discounted_dividends_1=led.discounted_1,
        discounted_dividends_2=led.discounted_2,
        total_dividends_1=led.total_1,
        total_dividends_2=led.total_2,
        n_claims=n,
        censored=censored,
        trace=trace,
    )


def write_trace_csv(out: TextIO, trace: Iterable[TraceRow]) -> None:
    """Write trace rows as CSV with the documented column set."""
    out.write(",".join(TRACE_COLUMNS) + "\n")
    for t, event, branch, x1, x2, l1, l2 in trace:
        out.write(f"{t:.17g},{event},{branch},{x1:.17g},{x2:.17g},{l1:.17g},{l2:.17g}\n")
