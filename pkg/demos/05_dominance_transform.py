"""The payout-improving transform: never ruins earlier, never pays less.

Wrapping any strategy switches branch two to the maximal payout rule and
caps branch one's ledger so the controlled state stays below the claim
ray. On every path the transform's ruin time equals the inner one's and
its cumulative payout dominates.
"""

from divbang import (
    Bang1,
    DominanceTransform,
    ModelParams,
    RandomSource,
    SimConfig,
    SurplusPoint,
    estimate_value,
    simulate_path,
)

params = ModelParams(c1=2.0, c2=4.0, b1=0.25, b2=0.75, lam=1.0, gamma=0.25, q=0.05)
inner = Bang1(12.0)  # a deliberately high barrier
wrapped = DominanceTransform(inner)
x0 = SurplusPoint(10, 3)
cfg = SimConfig(horizon_epsilon=1e-3)

print("pathwise comparison on ten shared claim scenarios:")
for i in range(10):
    a = simulate_path(params, x0, inner, cfg, RandomSource(5, i))
    b = simulate_path(params, x0, wrapped, cfg, RandomSource(5, i))
    print(f"  path {i}: inner {a.discounted_total:8.4f}  transform {b.discounted_total:8.4f}"
          f"  (gain {b.discounted_total - a.discounted_total:+.4f})")

est_inner = estimate_value(params, x0, inner, 5_000, 5, cfg)
est_wrap = estimate_value(params, x0, wrapped, 5_000, 5, cfg)
print(f"\nmeans over 5000 paths: inner {est_inner.mean:.4f}, transform {est_wrap.mean:.4f}")
