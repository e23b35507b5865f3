"""Closed-form results: value bounds, characteristic roots, barrier solver.

The barrier fixed point treats the other branch's payout stream as a
frozen constant rate; sweeping that rate over [0, c_other] brackets the
barrier of the full two-branch problem.
"""

from divbang import (
    ModelParams,
    SurplusPoint,
    barrier_interval,
    characteristic_roots,
    explicit_bang_value_negative,
    solve_barrier,
    value_bounds,
)

params = ModelParams(c1=2.0, c2=4.0, b1=0.25, b2=0.75, lam=1.0, gamma=0.25, q=0.05)

for point in [(0.0, 0.0), (10.0, -4.0), (-4.0, 10.0), (25.0, 25.0)]:
    b = value_bounds(params, SurplusPoint(*point))
    print(f"bounds at {point}: [{b.lower:9.4f}, {b.upper:9.4f}]")

for branch in (1, 2):
    r = characteristic_roots(params, branch)
    print(f"branch {branch} roots: R1={r.R1:.7f}, R2={r.R2:.7f}")

print("\nbarrier fixed points (frozen other-branch rate):")
for branch, rates in ((1, (0.0, 2.0, 4.0)), (2, (0.0, 1.0, 2.0))):
    for rate in rates:
        s = solve_barrier(params, branch, rate)
        print(f"  branch {branch}, rate {rate}: x* = {s.x_star:8.5f} "
              f"({s.iterations} iterations, residual {s.residual:.1e})")

lo1, hi1 = barrier_interval(params, 1)
lo2, hi2 = barrier_interval(params, 2)
print(f"\nsearch intervals: branch 1 [{lo1.x_star:.5f}, {hi1.x_star:.5f}], "
      f"branch 2 [{lo2.x_star:.5f}, {hi2.x_star:.5f}]")

# a negative branch-one start decays exponentially toward the
# branch-two-only value
v00 = 40.0  # value at the origin (would come from simulation)
for x1 in (-0.5, -2.0, -8.0, -30.0):
    v = explicit_bang_value_negative(params, x1, 5.0, v00)
    print(f"value at ({x1:5}, 5) given v(0,0)={v00}: {v:8.4f}")
print("deep-negative limit: x2 + c2/(q+lam) =", 5.0 + 4.0 / 1.05)
