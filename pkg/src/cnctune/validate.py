"""Validation of a learned strategy and the final solving policy.

The learned strategy is compared against the default on a fresh set of
cubes, with PAR-capped totals on both sides. Strictly better total cost
means the learned strategy is adopted alone; otherwise solving falls back
to a sequential portfolio: try the learned strategy under a budget, then
the default with no budget, so a bad learned strategy can cost at most the
budget per cube.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .backend import Backend
from .formula import Cube, Formula
from .minicdcl import SAT, UNSAT, UNKNOWN, SolveOutcome
from .strategy import Strategy


class ValidateError(Exception):
    pass


@dataclass(frozen=True)
class FinalPolicy:
    """Either a single strategy or a budgeted two-leg portfolio."""

    first: Strategy
    fallback: Optional[Strategy] = None  # None: single-strategy policy
    first_budget: Optional[int] = None

    def __post_init__(self):
        if self.fallback is not None:
            if self.fallback == self.first:
                raise ValidateError("portfolio legs must differ")
            if not self.first_budget or self.first_budget <= 0:
                raise ValidateError("portfolio needs a positive first budget")

    @property
    def is_portfolio(self) -> bool:
        return self.fallback is not None


@dataclass
class ValidationReport:
    cost_learned: int
    cost_default: int
    accepted: bool
    per_cube: list[dict] = field(default_factory=list)


def validate(
    formula: Formula,
    validation_cubes: Sequence[Cube],
    learned: Strategy,
    default: Strategy,
    backend: Backend,
    budget: int,
    par_multiplier: int = 2,
    learned_costs: Optional[dict[tuple, int]] = None,
    workers: int = 1,
    log: Optional[Callable[[dict], None]] = None,
) -> tuple[FinalPolicy, ValidationReport]:
    """Compare learned vs default total cost on the validation cubes.

    learned_costs maps cube literals to costs already measured while the
    cubes were being collected under the learned strategy; those cubes are
    not re-solved. Ties reject: the learned strategy must be strictly
    cheaper to be adopted without a fallback.
    """
    if not validation_cubes:
        raise ValidateError("validation cube set must be non-empty")
    if learned == default:
        raise ValidateError("nothing to validate: learned strategy is the default")
    learned_costs = learned_costs or {}

    def capped_cost(cube: Cube, strategy: Strategy) -> int:
        outcome = backend.check(formula, cube, strategy, budget)
        if outcome.status in (SAT, UNSAT):
            return outcome.cost
        return par_multiplier * budget

    def learned_cost(cube: Cube) -> int:
        if cube.literals in learned_costs:
            return learned_costs[cube.literals]
        return capped_cost(cube, learned)

    cubes = list(validation_cubes)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            l_costs = list(executor.map(learned_cost, cubes))
            d_costs = list(executor.map(lambda c: capped_cost(c, default), cubes))
    else:
        l_costs = [learned_cost(c) for c in cubes]
        d_costs = [capped_cost(c, default) for c in cubes]

    per_cube = [
        {"cube": list(c.literals), "cost_learned": lc, "cost_default": dc}
        for c, lc, dc in zip(cubes, l_costs, d_costs)
    ]
    total_learned, total_default = sum(l_costs), sum(d_costs)
    accepted = total_learned < total_default
    report = ValidationReport(total_learned, total_default, accepted, per_cube)
    if log is not None:
        for row in per_cube:
            log({"event": "validate_cube", **row})
        log({
            "event": "validate_decision",
            "cost_learned": total_learned,
            "cost_default": total_default,
            "accepted": accepted,
        })
    if accepted:
        return FinalPolicy(first=learned), report
    return FinalPolicy(first=learned, fallback=default, first_budget=budget), report


def solve_with_policy(
    formula: Formula,
    cube: Cube,
    policy: FinalPolicy,
    backend: Backend,
) -> SolveOutcome:
    """Solve one cube under the final policy.

    Single policy: one unlimited check. Portfolio: budgeted first leg, then
    an unlimited fallback when the first leg cannot decide; the reported
    cost is the sum of both attempts.
    """
    if not policy.is_portfolio:
        return backend.check(formula, cube, policy.first, None)
    first = backend.check(formula, cube, policy.first, policy.first_budget)
    if first.status != UNKNOWN:
        return first
    second = backend.check(formula, cube, policy.fallback, None)
    return SolveOutcome(second.status, first.cost + second.cost, second.model)
