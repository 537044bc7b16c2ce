"""Formulas, file formats, and the built-in CDCL solver.

Walks through the basic objects: building CNF formulas, reading and writing
DIMACS / iCNF, and solving with the embedded conflict-driven solver under
different parameter settings. Run it directly:

    python demos/01_formulas_and_solving.py
"""

from cnctune import (
    Formula,
    MiniSolverParams,
    brute_force_sat,
    parse_dimacs,
    php,
    solve,
    write_dimacs,
    xor_miter,
)

# ---------------------------------------------------------------------------
# 1. A formula is just a variable count plus clauses of signed integers.
# ---------------------------------------------------------------------------
f = Formula.from_clauses(3, [(1, 2), (-1, 3), (-2, -3)])
print("formula:", f.num_vars, "vars,", f.num_clauses, "clauses")

# DIMACS text round-trips exactly.
text = write_dimacs(f)
print(text, end="")
assert parse_dimacs(text) == f

# ---------------------------------------------------------------------------
# 2. Solving. The solver counts conflicts; that count is the cost metric the
#    whole library optimizes for.
# ---------------------------------------------------------------------------
out = solve(f)
print("status:", out.status, "conflicts:", out.cost, "model:", out.model)

# Pigeonhole formulas are classic hard unsatisfiable instances.
hard = php(7, 6)
out = solve(hard)
print(f"php(7,6): {out.status} after {out.cost} conflicts")

# A conflict budget turns the solver into an any-time procedure.
out = solve(hard, conflict_budget=50)
print(f"php(7,6) with a 50-conflict budget: {out.status}")

# ---------------------------------------------------------------------------
# 3. Parameters change the search, not the answer. On this XOR miter the
#    default (VSIDS-style) order loses to a static file order.
# ---------------------------------------------------------------------------
miter = xor_miter(14, seed=6)
for label, params in [
    ("default        ", MiniSolverParams()),
    ("static ordering", MiniSolverParams(bump=False, tumble=False)),
]:
    out = solve(miter, params)
    print(f"xor_miter(14) {label}: {out.status} in {out.cost} conflicts")

# ---------------------------------------------------------------------------
# 4. For small formulas a numpy truth-table scan serves as ground truth.
# ---------------------------------------------------------------------------
assert brute_force_sat(php(4, 3)) is None           # unsat
assert brute_force_sat(php(3, 3)) is not None       # sat
print("brute-force oracle agrees with the solver on the small cases")
