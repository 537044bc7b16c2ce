import math
import random
from collections import Counter

import pytest

from cnctune.backend import MiniCdclBackend
from cnctune.bench import php
from cnctune.formula import Cube, TOP
from cnctune.strategy import ParamDef, Strategy, StrategySpace, mini_solver_space, split_heuristic_space
from cnctune.tune import (
    CubeCostOracle,
    TuneConfig,
    TuneError,
    acceptance_probability,
    chain_states,
    probe_initialize,
    tune,
)


def test_acceptance_probability_improvement():
    for beta in (1e-6, 0.5, 100.0):
        assert acceptance_probability(100, 80, beta) == 1.0
        assert acceptance_probability(50, 50, beta) == 1.0


def test_acceptance_probability_worsening():
    assert math.isclose(acceptance_probability(80, 100, 0.01), math.exp(-0.2),
                        rel_tol=1e-12)


def test_acceptance_probability_monotone():
    # decreasing in the cost increase, and in beta for a fixed increase
    probs = [acceptance_probability(10, 10 + d, 0.1) for d in (1, 5, 20)]
    assert probs[0] > probs[1] > probs[2]
    by_beta = [acceptance_probability(10, 30, b) for b in (0.01, 0.1, 1.0)]
    assert by_beta[0] > by_beta[1] > by_beta[2]


def test_acceptance_probability_requires_positive_beta():
    with pytest.raises(TuneError):
        acceptance_probability(1, 2, 0.0)


def synthetic_space():
    return split_heuristic_space()


def unimodal_cost(space):
    """Cost = 10 * Hamming distance from a fixed optimum + 3."""
    target = Strategy(("2", "babsr"))

    def cost(s):
        return 3 + 10 * sum(a != b for a, b in zip(s.values, target.values))

    return target, cost


def test_probe_initialize_no_neighbors():
    space = StrategySpace((ParamDef("a", "0", ("1",)),), max_deviations=0)
    calls = []

    def cost(s):
        calls.append(s)
        return 5

    best, best_cost, used = probe_initialize(space, space.default_strategy, cost, 10)
    assert best == space.default_strategy and best_cost == 5 and used == 1
    assert len(calls) == 1


def test_probe_initialize_finds_best_neighbor():
    space = synthetic_space()
    target, cost = unimodal_cost(space)
    best, best_cost, used = probe_initialize(space, space.default_strategy, cost, 100)
    assert best_cost == 13  # one flip towards the optimum
    assert used == 1 + 5


def test_probe_tie_goes_to_default():
    space = synthetic_space()
    best, best_cost, _ = probe_initialize(
        space, space.default_strategy, lambda s: 7, 100
    )
    assert best == space.default_strategy


def test_tune_single_strategy_space():
    space = StrategySpace((ParamDef("a", "0", ("1",)),), max_deviations=0)
    report = tune(space, space.default_strategy, lambda s: 9,
                  TuneConfig(num_samples=5, beta=1.0, seed=0))
    assert report.best == space.default_strategy
    assert report.trajectory[0] == (space.default_strategy, 9, True)
    assert report.evaluations == 1


def test_tune_finds_unimodal_argmin():
    space = synthetic_space()
    target, cost = unimodal_cost(space)
    hits = 0
    for seed in range(100):
        report = tune(space, space.default_strategy, cost,
                      TuneConfig(num_samples=12, beta=1.0 / 23.0, seed=seed))
        hits += report.best == target
    assert hits >= 95


def test_tune_best_never_worse_than_default():
    space = synthetic_space()
    _, cost = unimodal_cost(space)
    for seed in range(20):
        report = tune(space, space.default_strategy, cost,
                      TuneConfig(num_samples=6, beta=0.1, seed=seed))
        assert report.best_cost <= report.default_cost


def test_tune_respects_evaluation_budget():
    space = synthetic_space()
    distinct = set()

    def cost(s):
        distinct.add(s.values)
        return 5 + len(s.values[0])

    report = tune(space, space.default_strategy, cost,
                  TuneConfig(num_samples=4, beta=1.0, seed=3))
    assert report.evaluations <= 4
    assert len(distinct) <= 4


def test_tune_memoizes_repeat_visits():
    space = synthetic_space()
    calls = Counter()

    def cost(s):
        calls[s.values] += 1
        return 10

    tune(space, space.default_strategy, cost, TuneConfig(num_samples=8, beta=1.0, seed=1))
    assert all(c == 1 for c in calls.values())


def test_large_beta_becomes_greedy():
    space = synthetic_space()
    _, cost = unimodal_cost(space)
    report = tune(space, space.default_strategy, cost,
                  TuneConfig(num_samples=12, beta=1e9, seed=7))
    for i in range(1, len(report.trajectory)):
        prev_costs = [c for _, c, acc in report.trajectory[:i] if acc]
        strategy, c, accepted = report.trajectory[i]
        if accepted and prev_costs:
            assert c <= prev_costs[-1]  # no worsening move ever accepted


def test_trajectory_steps_within_proposal_radius():
    space = synthetic_space()
    _, cost = unimodal_cost(space)
    report = tune(space, space.default_strategy, cost,
                  TuneConfig(num_samples=12, beta=0.05, seed=11, probe=False))
    current = space.default_strategy
    for strategy, c, accepted in report.trajectory[1:]:
        dist = sum(a != b for a, b in zip(strategy.values, current.values))
        assert 1 <= dist <= 2
        if accepted:
            current = strategy


def test_chain_stationary_distribution():
    # long-run visit frequencies track exp(-beta * cost) on a 12-state space
    space = synthetic_space()
    _, cost = unimodal_cost(space)
    beta = 0.05
    states = chain_states(space, space.default_strategy, cost, beta,
                          steps=100_000, proposal_k=2, seed=13)
    counts = Counter(states)
    all_s = space.enumerate()
    z = sum(math.exp(-beta * cost(s)) for s in all_s)
    tv = 0.5 * sum(
        abs(counts.get(s, 0) / len(states) - math.exp(-beta * cost(s)) / z)
        for s in all_s
    )
    assert tv <= 0.1


def test_cube_cost_oracle_par_capping():
    space = mini_solver_space()
    backend = MiniCdclBackend(space)
    f = php(6, 5)
    cubes = [Cube((1,)), Cube((-1,))]
    oracle = CubeCostOracle(f, cubes, backend, budget=1, par_multiplier=2)
    s = space.default_strategy
    total = oracle(s)
    # each cube is either decided within 1 conflict or charged 2 * 1
    assert 0 <= total <= 4
    assert oracle.evaluations == 1
    assert oracle(s) == total
    assert oracle.evaluations == 1  # memoized


def test_cube_cost_oracle_sums_decided_costs():
    space = mini_solver_space()
    backend = MiniCdclBackend(space)
    f = php(5, 4)
    cubes = [TOP]
    oracle = CubeCostOracle(f, cubes, backend, budget=10**6)
    s = space.default_strategy
    assert oracle(s) == backend.check(f, TOP, s, None).cost
