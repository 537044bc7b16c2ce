import copy
import random

import pytest

from cnctune.backend import MiniCdclBackend
from cnctune.bench import php, random3cnf
from cnctune.collect import (
    BudgetOverflow,
    CollectConfig,
    CollectError,
    collect,
    effective_budget,
    make_queue,
)
from cnctune.cubers import UnitClauseCuber
from cnctune.formula import Cube, Formula, TOP, brute_force_sat, conjoin, model_satisfies
from cnctune.minicdcl import SAT, UNKNOWN, UNSAT
from cnctune.strategy import mini_solver_space

SPACE = mini_solver_space()
POOL = SPACE.enumerate()


def cfg(**kwargs):
    defaults = dict(sample_target=3, min_cost=1, max_cost=100,
                    strategy_pool=POOL, online_cubes=4, seed=0)
    defaults.update(kwargs)
    return CollectConfig(**defaults)


def initial_cubes(formula, k=8):
    backend = MiniCdclBackend(SPACE)
    result = backend.cube(formula, TOP, k)
    assert result.decided is None
    return list(result.cubes)


def test_effective_budget_examples():
    assert effective_budget(cfg(max_cost=10000, budget_growth=1.0), 3) == 10000
    assert effective_budget(cfg(max_cost=100, budget_growth=2.0), 0) == 100
    assert effective_budget(cfg(max_cost=100, budget_growth=1.5), 2) == 225


def test_effective_budget_overflow():
    with pytest.raises(BudgetOverflow):
        effective_budget(cfg(max_cost=10**9, budget_growth=2.0), 200)


def test_config_validation():
    with pytest.raises(CollectError):
        cfg(min_cost=5, max_cost=5)
    with pytest.raises(CollectError):
        cfg(online_cubes=1)
    with pytest.raises(CollectError):
        cfg(strategy_pool=[])


def test_all_cubes_trivially_unsat_returns_unsat():
    # both branches on x2 refute at level zero, below the band minimum
    f = Formula.from_clauses(2, [(1,), (-1,)])
    queue = make_queue([Cube((2,)), Cube((-2,))], cfg())
    backend = MiniCdclBackend(SPACE)
    result = collect(f, queue, cfg(), backend)
    assert result.status == UNSAT
    assert result.collected == []
    assert queue == []


def test_sat_short_circuits_with_verified_model():
    f = Formula.from_clauses(3, [(1, 2), (3,)])
    queue = make_queue([Cube((1,)), Cube((-1,))], cfg())
    backend = MiniCdclBackend(SPACE)
    result = collect(f, queue, cfg(), backend)
    assert result.status == SAT
    assert model_satisfies(f, result.model)
    assert result.collected == []


def test_php_collects_exactly_n_banded_cubes():
    f = php(7, 6)
    c = cfg(sample_target=5, min_cost=3, max_cost=500, seed=2)
    queue = make_queue(initial_cubes(f, 16), c)
    backend = MiniCdclBackend(SPACE)
    result = collect(f, queue, c, backend)
    assert result.status == UNKNOWN
    assert len(result.collected) == 5
    for cube, strategy, cost in result.collected:
        # per-cube budget is the band max grown by the cube's resplit count
        assert 3 <= cost
        assert cost <= 500 * 2 ** 10  # generous resplit allowance


def test_collected_costs_within_recorded_budgets():
    f = php(7, 6)
    c = cfg(sample_target=4, min_cost=3, max_cost=40, budget_growth=1.5, seed=5)
    queue = make_queue(initial_cubes(f, 8), c)
    backend = MiniCdclBackend(SPACE)
    result = collect(f, queue, c, backend)
    if result.status == UNKNOWN:
        for cube, strategy, cost in result.collected:
            assert c.min_cost <= cost
            # the cost cannot exceed the largest budget any resplit produced
            assert cost <= effective_budget(c, 20)


def test_determinism_same_seed():
    f = php(6, 5)
    c = cfg(sample_target=3, min_cost=1, max_cost=50, seed=9)
    results = []
    queues = []
    for _ in range(2):
        queue = make_queue(initial_cubes(f, 8), c)
        backend = MiniCdclBackend(SPACE)
        results.append(collect(f, queue, c, backend))
        queues.append([(r.cube.literals, r.resplit_count) for r in queue])
    assert results[0].status == results[1].status
    assert results[0].collected == results[1].collected
    assert queues[0] == queues[1]


def test_worker_count_does_not_change_result():
    f = php(6, 5)
    c = cfg(sample_target=3, min_cost=1, max_cost=50, seed=4)
    outs = []
    for workers in (1, 4):
        queue = make_queue(initial_cubes(f, 8), c)
        backend = MiniCdclBackend(SPACE)
        result = collect(f, queue, c, backend, workers=workers)
        outs.append((result.status, result.collected,
                     [(r.cube.literals, r.resplit_count) for r in queue]))
    assert outs[0] == outs[1]


def test_queue_conservation_equisatisfiable():
    # remaining ∪ collected cubes still cover the satisfiable space
    rng = random.Random(1)
    for trial in range(25):
        f = random3cnf(10, 40, seed=700 + trial)
        c = cfg(sample_target=2, min_cost=1, max_cost=20, seed=trial)
        queue = make_queue(initial_cubes(f, 4), c)
        backend = MiniCdclBackend(SPACE)
        result = collect(f, queue, c, backend)
        expected = brute_force_sat(f) is not None
        if result.status == SAT:
            assert expected
        elif result.status == UNSAT:
            assert not expected
        else:
            survivors = [r.cube for r in queue] + [cb for cb, _, _ in result.collected]
            covered = any(
                brute_force_sat(conjoin(f, cube)) is not None for cube in survivors
            )
            assert covered == expected


def test_resplit_counts_increase_and_budgets_grow():
    f = php(7, 6)
    c = cfg(sample_target=3, min_cost=5, max_cost=10, budget_growth=2.0, seed=0)
    queue = make_queue(initial_cubes(f, 4), c)
    backend = MiniCdclBackend(SPACE)
    result = collect(f, queue, c, backend)
    resplit_seen = {r.resplit_count for r in queue}
    for r in queue:
        assert r.budget == effective_budget(c, r.resplit_count)


def test_unit_cuber_termination_with_step_ceiling():
    cuber = UnitClauseCuber()
    for trial in range(10):
        f = random3cnf(8, 30, seed=900 + trial)
        c = cfg(sample_target=3, min_cost=1, max_cost=5, online_cubes=2, seed=trial)
        queue = make_queue([TOP], c)
        backend = MiniCdclBackend(SPACE, cuber)
        collect(f, queue, c, backend, step_limit=4 * 2**f.num_vars)
