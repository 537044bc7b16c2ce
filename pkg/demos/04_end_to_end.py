"""The full self-tuning pipeline versus the untuned baseline.

sdac() cubes the formula, learns a strategy online from a first batch of
banded cubes, validates it on a second batch, and solves the remainder with
either the learned strategy alone or a safe learned-then-default portfolio.
plain_cnc() is the same machinery with no learning. Comparing the conflicts
each spends on the cubes both solved shows what the tuning bought.

    python demos/04_end_to_end.py
"""

from cnctune import (
    MiniCdclBackend,
    RunConfig,
    RunLog,
    common_cube_costs,
    mini_solver_space,
    plain_cnc,
    render_csv_panels,
    sdac,
    xor_miter,
)

space = mini_solver_space()
formula = xor_miter(14, seed=1)
cfg = RunConfig(
    initial_cubes=32,
    tuning_cubes=8,
    validation_cubes=4,
    tuning_band=(5, 200),       # learn from cubes costing 5..200 conflicts
    validation_band=(10, 600),  # validate on harder ones
    online_cubes=8,
    tune_samples=20,
    seed=1,
    workers=2,                  # results are identical for any worker count
)

log = RunLog()  # in-memory; pass a path to also write JSONL
tuned = sdac(formula, space, MiniCdclBackend(space), cfg, log=log)
baseline = plain_cnc(formula, space, MiniCdclBackend(space), cfg)

print("answer:", tuned.answer, "(baseline agrees:", baseline.answer + ")")
print("learned strategy:", tuned.learned_strategy)
print("validation accepted:", tuned.validation_accepted)
print("final policy:", tuned.policy)

pairs = common_cube_costs(tuned, baseline)
tuned_total = sum(a for _, a, _ in pairs)
base_total = sum(b for _, _, b in pairs)
print(f"\n{len(pairs)} cubes were solved by both runs:")
print(f"  tuned    {tuned_total:>6} conflicts")
print(f"  baseline {base_total:>6} conflicts")

print("\nper-phase conflict spend (tuned run):", tuned.phase_costs)
print("wall-clock seconds per phase:",
      {k: round(v, 3) for k, v in tuned.timings.items()})

# The run log renders into three CSV tables ready for scatter plots.
paths = render_csv_panels(log.entries, "/tmp/cnctune_demo_csv")
print("\nCSV panels written:")
for p in paths:
    print(" ", p)
