"""Online strategy optimization over collected cubes.

Minimizes the summed solve cost of a strategy on the tuning cubes via
Metropolis-Hastings over the strategy space: proposals move to a uniformly
random neighbor within proposal_k parameter flips, improving moves are
always accepted, worsening moves with probability min(1, exp(beta * -delta)).
Cubes a strategy cannot decide within the per-cube budget are charged a
PAR-style penalty (par_multiplier * budget). Cost evaluations are memoized;
only distinct evaluations count against the sample budget.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .backend import Backend
from .formula import Cube, Formula
from .minicdcl import SAT, UNSAT
from .strategy import Strategy, StrategySpace


class TuneError(Exception):
    pass


@dataclass
class TuneConfig:
    num_samples: int = 20  # total cost-oracle evaluations allowed (t)
    beta: Optional[float] = None  # None: 1 / cost(default strategy)
    proposal_k: int = 2
    per_cube_budget: int = 10000
    par_multiplier: int = 2
    probe: bool = True
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.num_samples < 1:
            raise TuneError("num_samples must be >= 1")
        if self.beta is not None and self.beta <= 0:
            raise TuneError("beta must be positive")
        if self.proposal_k < 1 or self.par_multiplier < 1:
            raise TuneError("proposal_k and par_multiplier must be >= 1")


@dataclass
class TuneReport:
    best: Strategy
    best_cost: int
    default_cost: int
    beta: float
    trajectory: list[tuple[Strategy, int, bool]] = field(default_factory=list)
    evaluations: int = 0


def acceptance_probability(cost_current: float, cost_proposed: float, beta: float) -> float:
    """min(1, exp(beta * (cost_current - cost_proposed)))."""
    if beta <= 0:
        raise TuneError("beta must be positive")
    delta = cost_current - cost_proposed
    if delta >= 0:
        return 1.0
    return math.exp(beta * delta)


class CubeCostOracle:
    """Memoized PAR-capped total cost of a strategy on a fixed cube set."""

    def __init__(self, formula: Formula, cubes: Sequence[Cube], backend: Backend,
                 budget: int, par_multiplier: int = 2, workers: int = 1):
        if not cubes:
            raise TuneError("tuning cube set must be non-empty")
        self.formula = formula
        self.cubes = list(cubes)
        self.backend = backend
        self.budget = budget
        self.par_multiplier = par_multiplier
        self.workers = max(1, workers)
        self.evaluations = 0
        self._cache: dict[tuple, int] = {}

    def _cube_cost(self, strategy: Strategy, cube: Cube) -> int:
        outcome = self.backend.check(self.formula, cube, strategy, self.budget)
        if outcome.status in (SAT, UNSAT):
            return outcome.cost
        return self.par_multiplier * self.budget

    def __call__(self, strategy: Strategy) -> int:
        key = strategy.values
        if key in self._cache:
            return self._cache[key]
        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                costs = list(executor.map(
                    lambda c: self._cube_cost(strategy, c), self.cubes
                ))
            total = sum(costs)
        else:
            total = sum(self._cube_cost(strategy, c) for c in self.cubes)
        self._cache[key] = total
        self.evaluations += 1
        return total

    def seen(self, strategy: Strategy) -> bool:
        return strategy.values in self._cache


def probe_initialize(
    space: StrategySpace,
    default: Strategy,
    cost_fn,
    budget_left: int,
) -> tuple[Strategy, int, int]:
    """Evaluate the default and its 1-neighbors; return (best, cost, evals used).

    Ties go to the default, then to the earliest neighbor in enumeration
    order. When the sample budget cannot cover the full probe, only the first
    budget_left - 1 neighbors are tried.
    """
    best, best_cost = default, cost_fn(default)
    used = 1
    for neighbor in space.neighbors(default, 1)[: max(0, budget_left - 1)]:
        cost = cost_fn(neighbor)
        used += 1
        if cost < best_cost:
            best, best_cost = neighbor, cost
    return best, best_cost, used


def tune(
    space: StrategySpace,
    default: Strategy,
    cost_fn: Callable[[Strategy], int],
    cfg: TuneConfig,
    log: Optional[Callable[[dict], None]] = None,
) -> TuneReport:
    """Search the space for a low-cost strategy under an evaluation budget.

    cost_fn must memoize (CubeCostOracle does); repeated visits are free.
    Returns the best strategy ever evaluated, which is never worse than the
    default since the default is evaluated first.
    """
    rng = random.Random(cfg.seed)
    evaluated: dict[tuple, int] = {}

    def eval_strategy(s: Strategy) -> int:
        if s.values not in evaluated:
            evaluated[s.values] = cost_fn(s)
        return evaluated[s.values]

    default_cost = eval_strategy(default)
    beta = cfg.beta if cfg.beta is not None else 1.0 / max(1, default_cost)
    best, best_cost = default, default_cost
    current, current_cost = default, default_cost
    trajectory: list[tuple[Strategy, int, bool]] = [(default, default_cost, True)]

    if cfg.probe and cfg.num_samples > 1:
        probed, probed_cost, _ = probe_initialize(
            space, default, eval_strategy, cfg.num_samples
        )
        current, current_cost = probed, probed_cost
        if probed_cost < best_cost:
            best, best_cost = probed, probed_cost
        trajectory.append((probed, probed_cost, True))

    # proposals that only hit memoized strategies are free but must not spin
    # forever on small spaces; cap the walk length as a whole
    max_steps = 100 * cfg.num_samples
    steps = 0
    while len(evaluated) < cfg.num_samples and steps < max_steps:
        steps += 1
        neighbors = space.neighbors(current, cfg.proposal_k)
        if not neighbors:
            break
        proposal = rng.choice(neighbors)
        proposal_cost = eval_strategy(proposal)
        accept_p = acceptance_probability(current_cost, proposal_cost, beta)
        accepted = rng.random() < accept_p if accept_p < 1.0 else True
        if accepted:
            current, current_cost = proposal, proposal_cost
        if proposal_cost < best_cost:
            best, best_cost = proposal, proposal_cost
        trajectory.append((proposal, proposal_cost, accepted))
        if log is not None:
            log({
                "event": "tune_step",
                "strategy": space.describe(proposal),
                "cost": proposal_cost,
                "accepted": accepted,
            })
    return TuneReport(
        best=best,
        best_cost=best_cost,
        default_cost=default_cost,
        beta=beta,
        trajectory=trajectory,
        evaluations=len(evaluated),
    )


def chain_states(
    space: StrategySpace,
    start: Strategy,
    cost_fn: Callable[[Strategy], float],
    beta: float,
    steps: int,
    proposal_k: int = 2,
    seed: int = 0,
) -> list[Strategy]:
    """Raw Metropolis chain over the space, for stationary-distribution checks.

    Unlike tune(), runs a fixed number of steps with no evaluation budget and
    returns the visited state sequence (including the start).
    """
    rng = random.Random(seed)
    current = start
    current_cost = cost_fn(current)
    visits = [current]
    neighbor_cache: dict[tuple, list[Strategy]] = {}
    for _ in range(steps):
        key = current.values
        if key not in neighbor_cache:
            neighbor_cache[key] = space.neighbors(current, proposal_k)
        neighbors = neighbor_cache[key]
        if not neighbors:
            visits.append(current)
            continue
        proposal = rng.choice(neighbors)
        proposal_cost = cost_fn(proposal)
        if rng.random() < acceptance_probability(current_cost, proposal_cost, beta):
            current, current_cost = proposal, proposal_cost
        visits.append(current)
    return visits
