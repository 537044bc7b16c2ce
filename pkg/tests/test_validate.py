import pytest

from cnctune.backend import Backend, MiniCdclBackend
from cnctune.bench import php, random3cnf, xor_miter
from cnctune.cubers import LookaheadCuber
from cnctune.formula import Cube, TOP
from cnctune.minicdcl import SAT, UNKNOWN, UNSAT, SolveOutcome
from cnctune.strategy import Strategy, mini_solver_space
from cnctune.validate import FinalPolicy, ValidateError, solve_with_policy, validate

SPACE = mini_solver_space()
DEFAULT = SPACE.default_strategy
STATIC = Strategy(tuple(
    {"bump": "off", "tumble": "off"}.get(p.name, p.default) for p in SPACE.params
))


class ScriptedBackend(Backend):
    """Cost table keyed by (cube literals, strategy); for policy-level tests."""

    def __init__(self, table):
        super().__init__()
        self.table = table
        self.calls = []

    def _solve(self, formula, cube, strategy, budget):
        self.calls.append((cube.literals, strategy.values, budget))
        cost = self.table[(cube.literals, strategy.values)]
        if budget is not None and cost > budget:
            return SolveOutcome(UNKNOWN, budget)
        return SolveOutcome(UNSAT, cost)


def scripted(costs_learned, costs_default):
    table = {}
    cubes = []
    for i, (cl, cd) in enumerate(zip(costs_learned, costs_default)):
        cube = Cube((i + 1,))
        cubes.append(cube)
        table[(cube.literals, STATIC.values)] = cl
        table[(cube.literals, DEFAULT.values)] = cd
    return ScriptedBackend(table), cubes


def test_learned_strictly_better_gives_single_policy():
    backend, cubes = scripted([5, 6, 7], [9, 9, 9])
    policy, report = validate(php(3, 2), cubes, STATIC, DEFAULT, backend, budget=100)
    assert not policy.is_portfolio and policy.first == STATIC
    assert report.accepted
    assert report.cost_learned == 18 and report.cost_default == 27


def test_tie_rejects_to_portfolio():
    backend, cubes = scripted([5, 5], [4, 6])
    policy, report = validate(php(3, 2), cubes, STATIC, DEFAULT, backend, budget=50)
    assert policy.is_portfolio
    assert policy.first == STATIC and policy.fallback == DEFAULT
    assert policy.first_budget == 50
    assert not report.accepted


def test_worse_learned_rejected():
    backend, cubes = scripted([20, 20], [5, 5])
    policy, report = validate(php(3, 2), cubes, STATIC, DEFAULT, backend, budget=100)
    assert policy.is_portfolio and not report.accepted


def test_par_capping_is_symmetric():
    backend, cubes = scripted([150, 10], [10, 150])
    policy, report = validate(php(3, 2), cubes, STATIC, DEFAULT, backend,
                              budget=100, par_multiplier=2)
    assert report.cost_learned == report.cost_default == 210


def test_learned_costs_reused_not_resolved():
    backend, cubes = scripted([5], [9])
    validate(php(3, 2), cubes, STATIC, DEFAULT, backend, budget=100,
             learned_costs={cubes[0].literals: 5})
    assert all(values != STATIC.values for _, values, _ in backend.calls)


def test_validate_requires_distinct_strategies():
    backend, cubes = scripted([5], [9])
    with pytest.raises(ValidateError):
        validate(php(3, 2), cubes, DEFAULT, DEFAULT, backend, budget=10)
    with pytest.raises(ValidateError):
        validate(php(3, 2), [], STATIC, DEFAULT, backend, budget=10)


def test_acceptance_soundness_never_single_when_not_better():
    for cl, cd in [([5], [5]), ([6], [5]), ([100], [1])]:
        backend, cubes = scripted(cl, cd)
        policy, report = validate(php(3, 2), cubes, STATIC, DEFAULT, backend, budget=500)
        assert policy.is_portfolio == (sum(cl) >= sum(cd))


def test_solve_with_policy_single():
    backend = MiniCdclBackend(SPACE)
    f = php(5, 4)
    out = solve_with_policy(f, TOP, FinalPolicy(first=DEFAULT), backend)
    assert out.status == UNSAT
    assert out.cost == backend.check(f, TOP, DEFAULT, None).cost


def test_policy_portfolio_short_circuits():
    backend, cubes = scripted([5], [3])
    policy = FinalPolicy(first=STATIC, fallback=DEFAULT, first_budget=50)
    out = solve_with_policy(php(3, 2), cubes[0], policy, backend)
    assert out.status == UNSAT and out.cost == 5
    assert len(backend.calls) == 1  # fallback never ran


def test_policy_portfolio_fallback_cost_is_additive():
    backend, cubes = scripted([100], [7])
    policy = FinalPolicy(first=STATIC, fallback=DEFAULT, first_budget=10)
    out = solve_with_policy(php(3, 2), cubes[0], policy, backend)
    assert out.status == UNSAT
    assert out.cost == 10 + 7  # budget spent on leg one, then the fallback's cost


def test_policy_completeness_never_unknown():
    backend = MiniCdclBackend(SPACE)
    policy = FinalPolicy(first=STATIC, fallback=DEFAULT, first_budget=1)
    for seed in range(5):
        f = random3cnf(10, 42, seed=seed)
        out = solve_with_policy(f, TOP, policy, backend)
        assert out.status in (SAT, UNSAT)


def test_bad_strategy_damage_bounded_by_first_budget():
    # even an adversarial learned strategy costs at most first_budget extra
    backend = MiniCdclBackend(SPACE)
    f = xor_miter(10, 1)
    budget = 20
    policy = FinalPolicy(first=STATIC, fallback=DEFAULT, first_budget=budget)
    cuber = LookaheadCuber()
    cubes = cuber(f, TOP, 4).cubes
    for cube in cubes:
        out = solve_with_policy(f, cube, policy, backend)
        default_alone = backend.check(f, cube, DEFAULT, None).cost
        assert out.cost <= default_alone + budget


def test_policy_validation():
    with pytest.raises(ValidateError):
        FinalPolicy(first=DEFAULT, fallback=DEFAULT, first_budget=5)
    with pytest.raises(ValidateError):
        FinalPolicy(first=STATIC, fallback=DEFAULT, first_budget=0)
