"""Model basics: parameters, claims, and a traced simulation of one path.

The surplus of both branches is driven by one compound Poisson claim
process; branch i collects premium c_i and covers the share b_i of every
claim. The company stays solvent while at least one branch is nonnegative.
"""

from divbang import (
    Bang1,
    ExponentialClaims,
    ModelParams,
    RandomSource,
    SimConfig,
    SurplusPoint,
    region_classify,
    simulate_path,
    uncontrolled_surplus,
)

params = ModelParams(c1=2.0, c2=4.0, b1=0.25, b2=0.75, lam=1.0, gamma=0.25, q=0.05)
print("model:", params)

# claims are exponential with mean 1/gamma = 4
dist = ExponentialClaims(params.gamma)
rs = RandomSource(master_seed=7, stream_index=0)
print("five claim draws:", [round(dist.sample(rs), 3) for _ in range(5)])

# the uncontrolled pair drifts at (c1, c2) and jumps along (b1, b2)
x0 = SurplusPoint(1.0, 2.0)
claims = [(0.8, 3.0), (1.5, 6.0)]
for t in (0.0, 0.8, 1.5, 2.5):
    pt = uncontrolled_surplus(params, x0, claims, t)
    print(f"t={t:4}: uncontrolled = ({pt.x1:7.3f}, {pt.x2:7.3f})")

# claims never move a state across the ray x2 = (b2/b1) x1
print("region of (2, 5):", region_classify(params, SurplusPoint(2, 5)))
print("region of (1, 4):", region_classify(params, SurplusPoint(1, 4)))

# one controlled path under a branch-one barrier at 8, traced event by event
cfg = SimConfig(horizon_epsilon=1e-3, trace_enabled=True)
out = simulate_path(params, SurplusPoint(25, 25), Bang1(8.0), cfg, RandomSource(7, 1))
print(f"\npath outcome: ruin_time={out.ruin_time:.4g}, "
      f"discounted=({out.discounted_dividends_1:.3f}, {out.discounted_dividends_2:.3f}), "
      f"claims={out.n_claims}, censored={out.censored}")
print("first trace rows (t, event, branch, x1, x2, l1, l2):")
for row in out.trace[:10]:
    print("  ", tuple(round(v, 3) if isinstance(v, float) else v for v in row))
