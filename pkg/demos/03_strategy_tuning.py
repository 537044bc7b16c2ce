"""Learning a solver configuration with a Metropolis-Hastings walk.

The strategy space is a discrete grid of solver parameters with a default
and a cap on how many may deviate from it. The tuner walks that grid,
always accepting cheaper configurations and occasionally accepting more
expensive ones, and returns the best strategy it ever evaluated.

    python demos/03_strategy_tuning.py
"""

from cnctune import (
    CubeCostOracle,
    MiniCdclBackend,
    TOP,
    TuneConfig,
    kissat_style_space,
    mini_solver_space,
    tune,
    xor_miter,
)

# ---------------------------------------------------------------------------
# 1. Strategy spaces. The embedded solver exposes 5 parameters (48 states);
#    a kissat-style external solver space has 349 under a 4-deviation cap.
# ---------------------------------------------------------------------------
space = mini_solver_space()
print(f"mini space: {len(space.enumerate())} strategies")
print(f"kissat-style space: {len(kissat_style_space().enumerate())} strategies")

sigma0 = space.default_strategy
print("1-neighbors of the default:",
      len(space.neighbors(sigma0, 1)), "strategies")

# ---------------------------------------------------------------------------
# 2. A cost oracle: total conflicts over a handful of cubes, with unsolved
#    cubes penalized at twice their budget (PAR2-style).
# ---------------------------------------------------------------------------
formula = xor_miter(14, seed=3)
backend = MiniCdclBackend(space)
cubes = list(backend.cube(formula, TOP, 8).cubes)
oracle = CubeCostOracle(formula, cubes, backend, budget=300, par_multiplier=2)
print(f"\ndefault strategy costs {oracle(sigma0)} conflicts over {len(cubes)} cubes")

# ---------------------------------------------------------------------------
# 3. Tune. The walk first probes the default and its 1-neighbors, then
#    proposes jumps of up to 2 parameter flips; evaluations are memoized and
#    capped by num_samples.
# ---------------------------------------------------------------------------
report = tune(space, sigma0, oracle, TuneConfig(num_samples=20, seed=3))
print(f"\nafter {report.evaluations} evaluations:")
print(f"  best strategy: {space.describe(report.best) or '(default)'}")
print(f"  best cost {report.best_cost} vs default cost {report.default_cost}")

print("\nwalk trajectory (cost, accepted):")
for strategy, cost, accepted in report.trajectory[:10]:
    marker = "*" if accepted else " "
    print(f"  {marker} {cost:>5}  {space.describe(strategy) or '(default)'}")
