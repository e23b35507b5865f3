"""Independent brute-force oracles the engine is validated against.

Everything here deliberately avoids the closed forms used by the library:
paths are replayed step by step or on dense time grids, so agreement with
the event-driven engine is meaningful evidence.
"""

from __future__ import annotations

import math

import numpy as np

from divbang import ModelParams, RandomSource, SurplusPoint


def random_params(rng: np.random.Generator, b1_le_b2: bool = False) -> ModelParams:
    """Draw a valid parameter set (positive fields, share sum, order)."""
    while True:
        b1 = float(rng.uniform(0.1, 0.5 if b1_le_b2 else 0.9))
        b2 = 1.0 - b1
        c2 = float(rng.uniform(0.5, 5.0))
        # enforce c1/b1 >= c2/b2 with headroom
        c1 = float((c2 / b2) * b1 * rng.uniform(1.0, 2.5))
        lam = float(rng.uniform(0.5, 2.0))
        gamma = float(rng.uniform(0.1, 1.0))
        q = float(rng.uniform(0.02, 0.15))
        p = ModelParams(c1=c1, c2=c2, b1=b1, b2=b2, lam=lam, gamma=gamma, q=q)
        # keep the safety loading positive so paths are not ruin-dominated
        if p.c1 + p.c2 > 1.2 * p.lam / p.gamma:
            return p


def draw_claims(p: ModelParams, seed: int, index: int, n: int) -> list[tuple[float, float]]:
    """First n (arrival, size) pairs of the stream used by the engine."""
    rs = RandomSource(seed, index)
    out = []
    t = 0.0
    for _ in range(n):
        t += rs.exponential(p.lam)
        out.append((t, rs.exponential(p.gamma)))
    return out


def replay_uncontrolled(
    p: ModelParams, x0: SurplusPoint, claims: list[tuple[float, float]], t: float
) -> tuple[float, float]:
    """Step-by-step replay of the uncontrolled pair up to time t."""
    x1, x2 = x0.x1, x0.x2
    prev = 0.0
    for arrival, size in claims:
        if arrival > t:
            break
        x1 += p.c1 * (arrival - prev)
        x2 += p.c2 * (arrival - prev)
        x1 -= p.b1 * size
        x2 -= p.b2 * size
        prev = arrival
    x1 += p.c1 * (t - prev)
    x2 += p.c2 * (t - prev)
    return x1, x2


def uncontrolled_at_claims(
    p: ModelParams, x0: SurplusPoint, claims: list[tuple[float, float]]
) -> list[tuple[float, float, float, float, float]]:
    """Per claim instant: (t, x1, x2, sup_x1, sup_x2) just after the jump.

    Between claims the pair rises linearly, so each running supremum can
    only advance to the pre-jump value.
    """
    x1, x2 = x0.x1, x0.x2
    s1, s2 = x1, x2
    prev = 0.0
    rows = []
    for arrival, size in claims:
        x1 += p.c1 * (arrival - prev)
        x2 += p.c2 * (arrival - prev)
        s1 = max(s1, x1)
        s2 = max(s2, x2)
        x1 -= p.b1 * size
        x2 -= p.b2 * size
        rows.append((arrival, x1, x2, s1, s2))
        prev = arrival
    return rows


def discretized_bang_payout(
    x0: float, c: float, branch_claims: list[tuple[float, float]], t_end: float, dt: float
) -> float:
    """Time-grid evaluation of the maximal payout integral on one branch.

    (x0 v 0) plus premium accumulated whenever the uncontrolled branch sits
    at a nonnegative running maximum, on a grid of step dt. Claims are the
    branch's own shares (already scaled).
    """
    n = int(round(t_end / dt))
    t = dt * np.arange(n + 1)
    x = x0 + c * t
    for arrival, size in branch_claims:
        if arrival <= t_end:
            x = x - np.where(t >= arrival, size, 0.0)
    sup = np.maximum.accumulate(x)
    at_top = (sup - x) < 1e-12
    integrand = (sup >= 0.0) & at_top
    return max(x0, 0.0) + c * dt * float(np.sum(integrand[:-1]))


def discretized_controlled_value(
    p: ModelParams,
    x0: SurplusPoint,
    pay1: bool,
    lvl1: float,
    pay2: bool,
    lvl2: float,
    claims: list[tuple[float, float]],
    dt: float,
) -> float:
    """Crude time-grid simulation of a barrier pair: total discounted payout.

    Lumps are paid at grid points, streaming is approximated by lump
    top-ups, ruin is checked after jumps. O(dt) biased; used only to check
    that refining dt converges toward the exact engine value. The claim
    list must force ruin (last claim huge) so the horizon is finite.
    """
    y1, y2 = x0.x1, x0.x2
    value = 0.0
    if pay1 and y1 > lvl1:
        value += y1 - lvl1
        y1 = lvl1
    if pay2 and y2 > lvl2:
        value += y2 - lvl2
        y2 = lvl2
    pending = list(claims)
    t = 0.0
    while True:
        t += dt
        y1 += p.c1 * dt
        y2 += p.c2 * dt
        while pending and pending[0][0] <= t:
            _, size = pending.pop(0)
            y1 -= p.b1 * size
            y2 -= p.b2 * size
            if y1 < 0.0 and y2 < 0.0:
                return value
        df = math.exp(-p.q * t)
        if pay1 and y1 > lvl1:
            value += (y1 - lvl1) * df
            y1 = lvl1
        if pay2 and y2 > lvl2:
            value += (y2 - lvl2) * df
            y2 = lvl2
        if not pending and t > claims[-1][0]:
            raise AssertionError("claim list did not force ruin")
