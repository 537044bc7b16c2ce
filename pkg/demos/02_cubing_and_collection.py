"""Cubing a formula and collecting difficulty-banded cubes.

Shows the divide step of cube-and-conquer (a lookahead partitioner), and the
collection loop that gathers cubes whose refutation cost lands inside a
target difficulty band, re-partitioning cubes that are still too hard
with geometrically growing budgets.

    python demos/02_cubing_and_collection.py
"""

from cnctune import (
    CollectConfig,
    LookaheadCuber,
    MiniCdclBackend,
    TOP,
    collect,
    make_queue,
    mini_solver_space,
    php,
    write_icnf,
)

space = mini_solver_space()
backend = MiniCdclBackend(space, LookaheadCuber())
formula = php(7, 6)

# ---------------------------------------------------------------------------
# 1. Partition: ask for ~16 cubes; the cuber picks branching variables by a
#    lookahead score and drops branches it can refute on the spot.
# ---------------------------------------------------------------------------
result = backend.cube(formula, TOP, 16)
print(f"partitioned php(7,6) into {len(result.cubes)} cubes")
print("first cubes:", [c.literals for c in result.cubes[:4]])

# The partition ships as iCNF ("a ... 0" lines after the clauses).
icnf = write_icnf(formula, list(result.cubes))
print("iCNF tail:\n" + "\n".join(icnf.splitlines()[-3:]))

# ---------------------------------------------------------------------------
# 2. Collection: gather 5 cubes that cost between 3 and 500 conflicts to
#    refute. Cubes an attempt cannot decide within the budget get split
#    again; their children inherit a doubled budget.
# ---------------------------------------------------------------------------
cfg = CollectConfig(
    sample_target=5,
    min_cost=3,
    max_cost=500,
    strategy_pool=space.enumerate(),   # draw strategies over the whole space
    online_cubes=8,
    seed=0,
)
queue = make_queue(list(result.cubes), cfg)
events = []
outcome = collect(formula, queue, cfg, backend, log=events.append)

print(f"\ncollection finished: {outcome.status}")
for cube, strategy, cost in outcome.collected:
    print(f"  cube {cube.literals!s:<18} cost {cost:>4}  "
          f"strategy {space.describe(strategy)}")
print(f"{len(queue)} cubes remain unsolved in the queue")

# Every check the loop made was logged; 'fate' tells what happened to it.
fates = {}
for e in events:
    fates[e["fate"]] = fates.get(e["fate"], 0) + 1
print("check fates:", fates)
