"""Driving an external SAT solver instead of the embedded one.

Any command-line solver that prints SAT-competition style output can sit
behind the same Backend interface: the adapter writes the (cube-extended)
formula to a temp file, expands a command template, and parses status, cost,
and model from stdout. Here a tiny mock solver script stands in for a real
one so the demo runs anywhere.

    python demos/05_external_solver.py
"""

import os
import stat
import sys
import tempfile
import textwrap

from cnctune import (
    Cube,
    ExternalBackend,
    ExternalSolverConfig,
    TOP,
    mini_solver_space,
    php,
)

# ---------------------------------------------------------------------------
# 1. A mock solver: reads a DIMACS file, "solves" it, prints the usual lines.
#    A real setup would point command_template at kissat, cadical, etc.
# ---------------------------------------------------------------------------
mock = textwrap.dedent(f"""\
    #!{sys.executable}
    import sys
    path, budget = sys.argv[1], int(sys.argv[2])
    flags = sys.argv[3:]
    clauses = sum(1 for l in open(path) if l.strip() and l[0] not in 'pc')
    print("c mock solver, flags:", " ".join(flags) or "(none)")
    print("c conflicts:", clauses // 2)
    print("s UNSATISFIABLE")
    sys.exit(20)
""")
mock_path = os.path.join(tempfile.mkdtemp(prefix="cnctune_demo_"), "mocksolver")
with open(mock_path, "w") as fh:
    fh.write(mock)
os.chmod(mock_path, os.stat(mock_path).st_mode | stat.S_IEXEC)

# ---------------------------------------------------------------------------
# 2. Wire it up. {formula_file}, {budget}, and {params} expand per call;
#    {params} becomes one --name=value flag per non-default parameter.
# ---------------------------------------------------------------------------
space = mini_solver_space()
config = ExternalSolverConfig(
    command_template=f"{mock_path} {{formula_file}} {{budget}} {{params}}",
    timeout=10.0,
)
backend = ExternalBackend(config, space)

strategy = space.enumerate()[5]
print("strategy under test:", space.describe(strategy) or "(default)")
print("command:", " ".join(backend.build_command("problem.cnf", strategy, 1000)))

out = backend.check(php(5, 4), TOP, strategy, budget=1000)
print(f"\nwhole formula: {out.status} at cost {out.cost}")

out = backend.check(php(5, 4), Cube((1, -7)), strategy, budget=1000)
print(f"under cube (1, -7): {out.status} at cost {out.cost}")

print("\nbackend call stats:", backend.stats)
