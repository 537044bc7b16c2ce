import itertools
import random

import pytest

from cnctune.bench import php, random3cnf, xor_miter
from cnctune.formula import Formula, brute_force_sat, model_satisfies
from cnctune.minicdcl import (
    SAT,
    UNKNOWN,
    UNSAT,
    DecodeError,
    MiniSolverParams,
    luby,
    solve,
)

ALL_PARAMS = [
    MiniSolverParams(),
    MiniSolverParams(bump=False, tumble=False),
    MiniSolverParams(bump=False, tumble=False, stable=2),
    MiniSolverParams(phase_saved=False, stable=0),
    MiniSolverParams(forcephase=True, stable=2),
]


def test_empty_formula():
    out = solve(Formula(0, ()))
    assert out.status == SAT and out.cost == 0 and out.model == ()


def test_unit_contradiction_costs_nothing():
    out = solve(Formula.from_clauses(1, [(1,), (-1,)]), conflict_budget=1000)
    assert out.status == UNSAT and out.cost == 0


def test_empty_clause():
    assert solve(Formula.from_clauses(1, [()])).status == UNSAT


def test_simple_sat():
    f = Formula.from_clauses(2, [(1, 2)])
    out = solve(f)
    assert out.status == SAT and model_satisfies(f, out.model)


def test_budget_unknown_php():
    f = php(5, 4)
    out = solve(f, conflict_budget=3)
    assert out.status == UNKNOWN and out.cost == 3
    full = solve(f)
    assert full.status == UNSAT and full.cost > 3


def test_oracle_agreement_many_strategies():
    rng = random.Random(11)
    for trial in range(120):
        n = rng.randint(4, 14)
        f = random3cnf(n, int(4.2 * n), seed=trial)
        expected = brute_force_sat(f) is not None
        for params in ALL_PARAMS:
            out = solve(f, params)
            assert (out.status == SAT) == expected, (trial, params)
            if out.status == SAT:
                assert model_satisfies(f, out.model)


def test_determinism():
    f = xor_miter(10, 3)
    for params in ALL_PARAMS:
        a = solve(f, params, conflict_budget=500)
        b = solve(f, params, conflict_budget=500)
        assert a == b


def test_monotone_budget():
    f = php(6, 5)
    for params in ALL_PARAMS:
        full = solve(f, params)
        assert full.status == UNSAT
        c = full.cost
        for budget in (c + 1, 2 * c + 5):
            again = solve(f, params, budget)
            assert again.status == UNSAT and again.cost == c
        capped = solve(f, params, max(1, c // 2))
        if capped.status == UNKNOWN:
            assert capped.cost == max(1, c // 2)


def test_static_order_beats_default_on_xor_miters():
    static = MiniSolverParams(bump=False, tumble=False)
    wins = 0
    for seed in range(10):
        f = xor_miter(14, seed)
        if solve(f, static).cost < solve(f).cost:
            wins += 1
    assert wins >= 8


def test_params_decoding():
    p = MiniSolverParams.from_assignment(
        {"bump": "off", "tumble": "on", "phase": "default", "forcephase": "on", "stable": "2"}
    )
    assert p == MiniSolverParams(bump=False, tumble=True, phase_saved=False,
                                 forcephase=True, stable=2)
    with pytest.raises(DecodeError):
        MiniSolverParams.from_assignment({"chrono": "0"})
    with pytest.raises(DecodeError):
        MiniSolverParams.from_assignment({"stable": "3"})


def test_luby_sequence():
    assert [luby(i) for i in range(1, 16)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


def test_budget_validation():
    with pytest.raises(ValueError):
        solve(Formula(0, ()), conflict_budget=0)
