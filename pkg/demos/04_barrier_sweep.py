"""Barrier sweep: estimated value as a function of the barrier level.

The maximizer lands inside the closed-form search interval given by the
frozen-rate fixed points. Run with more paths for smoother curves (the
figure-quality data uses 100k paths per level).
"""

import numpy as np

from divbang import ModelParams, SimConfig, SurplusPoint, barrier_interval, sweep_barrier

params = ModelParams(c1=2.0, c2=4.0, b1=0.25, b2=0.75, lam=1.0, gamma=0.25, q=0.05)
cfg = SimConfig()
x0 = SurplusPoint(25, 25)

for branch, lo, hi in ((1, 6.0, 12.0), (2, 10.0, 25.0)):
    levels = [float(v) for v in np.arange(lo, hi + 0.25, 0.5)]
    result = sweep_barrier(params, x0, branch, levels, 20_000, 99, cfg)
    ilo, ihi = barrier_interval(params, branch)
    best = result.argmax_level()
    print(f"branch {branch}: maximizer {best:.2f}, "
          f"search interval [{ilo.x_star:.4f}, {ihi.x_star:.4f}]")
    for level, est in result.rows[:: max(1, len(result.rows) // 8)]:
        bar = "#" * int((est.mean - result.rows[0][1].mean) * 4 + 1)
        print(f"  {level:6.2f}: {est.mean:8.4f}  {bar}")
