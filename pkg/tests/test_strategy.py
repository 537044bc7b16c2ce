import random
from collections import Counter

import pytest

from cnctune.strategy import (
    ParamDef,
    SpaceError,
    SpaceTooLarge,
    Strategy,
    StrategySpace,
    count_strategies_recursive,
    kissat_style_space,
    mini_solver_space,
    split_heuristic_space,
)


def small_space(cap=None):
    return StrategySpace(
        (
            ParamDef("a", "0", ("1",)),
            ParamDef("b", "x", ("y", "z")),
            ParamDef("c", "0", ("1",)),
        ),
        max_deviations=cap,
    )


def test_enumerate_counts():
    assert len(kissat_style_space().enumerate()) == 349
    assert len(split_heuristic_space().enumerate()) == 12
    capped = StrategySpace(kissat_style_space().params, 2)
    assert len(capped.enumerate()) == 55  # 1 + (8+2) + (28+16)


def test_enumerate_zero_cap():
    space = small_space(cap=0)
    assert space.enumerate() == [space.default_strategy]


def test_enumerate_default_first_and_distinct():
    space = small_space(cap=2)
    strategies = space.enumerate()
    assert strategies[0] == space.default_strategy
    assert len(set(strategies)) == len(strategies)
    assert len(strategies) == space.size() == count_strategies_recursive(space)


def test_enumerate_matches_recursive_counter():
    for cap in (None, 0, 1, 2, 3):
        space = small_space(cap)
        assert space.size() == count_strategies_recursive(space)
        assert len(space.enumerate()) == space.size()


def test_enumeration_ceiling():
    with pytest.raises(SpaceTooLarge):
        kissat_style_space().enumerate(ceiling=10)


def test_deviation_count():
    space = split_heuristic_space()
    d = space.default_strategy
    assert space.deviation_count(d) == 0
    flipped = Strategy(("1", d.values[1]))
    assert space.deviation_count(flipped) == 1
    assert space.deviation_count(Strategy(("1", "babsr"))) == 2


def test_neighbors_of_default():
    space = split_heuristic_space()
    n1 = space.neighbors(space.default_strategy, 1)
    assert len(n1) == 5  # 3 freq alternatives + 2 branch alternatives
    assert all(space.deviation_count(s) == 1 for s in n1)
    assert space.default_strategy not in n1


def test_neighbors_symmetry_exhaustive():
    for space in (split_heuristic_space(), small_space(cap=1), small_space(cap=2)):
        all_s = space.enumerate()
        assert len(all_s) <= 400
        for s in all_s:
            for t in space.neighbors(s, 2):
                assert s in space.neighbors(t, 2)


def test_neighbor_graph_connected_k2():
    # ergodicity premise: the k=2 proposal graph reaches every valid strategy
    for space in (split_heuristic_space(), small_space(cap=2),
                  StrategySpace(kissat_style_space().params, 2)):
        all_s = space.enumerate()
        seen = {all_s[0]}
        frontier = [all_s[0]]
        while frontier:
            s = frontier.pop()
            for t in space.neighbors(s, 2):
                if t not in seen:
                    seen.add(t)
                    frontier.append(t)
        assert seen == set(all_s)


def test_neighbors_respect_cap():
    space = small_space(cap=1)
    one_dev = space.neighbors(space.default_strategy, 2)
    assert all(space.deviation_count(s) <= 1 for s in one_dev)


def test_sample_uniform_zero_cap():
    space = small_space(cap=0)
    rng = random.Random(7)
    assert all(space.sample_uniform(rng) == space.default_strategy for _ in range(20))


def test_sample_uniform_distribution():
    space = split_heuristic_space()
    rng = random.Random(42)
    counts = Counter(space.sample_uniform(rng) for _ in range(12000))
    assert len(counts) == 12
    for c in counts.values():
        assert abs(c - 1000) <= 150  # 3 sigma of Binomial(12000, 1/12)


def test_sample_uniform_deterministic():
    space = split_heuristic_space()
    rng1, rng2 = random.Random(9), random.Random(9)
    assert [space.sample_uniform(rng1) for _ in range(50)] == [
        space.sample_uniform(rng2) for _ in range(50)
    ]


def test_param_def_validation():
    with pytest.raises(SpaceError):
        ParamDef("p", "0", ())
    with pytest.raises(SpaceError):
        ParamDef("p", "0", ("0",))
    with pytest.raises(SpaceError):
        ParamDef("p", "0", ("1", "1"))


def test_duplicate_param_names():
    with pytest.raises(SpaceError):
        StrategySpace((ParamDef("p", "0", ("1",)), ParamDef("p", "0", ("1",))))


def test_describe_and_from_config():
    space = StrategySpace.from_config({
        "params": [
            {"name": "a", "default": "0", "alternatives": ["1"]},
            {"name": "b", "default": "x", "alternatives": ["y"]},
        ],
        "max_deviations": 1,
    })
    assert space.max_deviations == 1
    assert space.describe(space.default_strategy) == "default"
    assert space.describe(Strategy(("1", "x"))) == "a=1"


def test_mini_solver_space_size():
    assert len(mini_solver_space().enumerate()) == 48  # 2*2*2*2*3
