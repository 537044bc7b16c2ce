"""Difficulty-banded cube collection.

Repeatedly draws an unexamined cube and a strategy, solves the cube under
the cube's budget, and keeps refuted cubes whose cost reaches the band
minimum. Cubes the budget could not decide are re-partitioned lazily, only
once every cube in the queue has been examined, with their children getting
geometrically grown budgets. The loop ends when enough banded cubes are
gathered or the whole formula gets solved along the way.

Runs on a worker pool, but cube/strategy draws happen up front in seeded
order and results are committed in that same claim order, so outcomes are
identical for any worker count.
"""

from __future__ import annotations

import math
import random
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .backend import Backend
from .formula import Cube, Formula, model_satisfies
from .minicdcl import SAT, UNKNOWN, UNSAT, SolveOutcome
from .strategy import Strategy


class CollectError(Exception):
    pass


class BudgetOverflow(CollectError):
    pass


class ModelVerificationFailed(CollectError):
    pass


class StepLimitExceeded(CollectError):
    pass


BUDGET_CEILING = 10**18


@dataclass
class CollectConfig:
    """Parameters of one collection run.

    sample_target is the number of cubes to gather; [min_cost, max_cost] the
    difficulty band; online_cubes the fan-out of each re-partitioning;
    budget_growth the per-resplit budget multiplier.
    """

    sample_target: int
    min_cost: int
    max_cost: int
    strategy_pool: Sequence[Strategy]
    online_cubes: int = 64
    budget_growth: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if not (0 <= self.min_cost < self.max_cost):
            raise CollectError("need 0 <= min_cost < max_cost")
        if self.online_cubes < 2:
            raise CollectError("online_cubes must be >= 2")
        if self.sample_target < 1:
            raise CollectError("sample_target must be >= 1")
        if self.budget_growth < 1:
            raise CollectError("budget_growth must be >= 1")
        if not self.strategy_pool:
            raise CollectError("strategy_pool must be non-empty")


def effective_budget(cfg: CollectConfig, resplit_count: int) -> int:
    """Budget for a cube that went through resplit_count re-partitions."""
    budget = math.ceil(cfg.max_cost * cfg.budget_growth**resplit_count)
    if budget > BUDGET_CEILING:
        raise BudgetOverflow(f"budget {budget} exceeds ceiling {BUDGET_CEILING}")
    return budget


@dataclass
class CubeRecord:
    """Ledger entry for one cube in the work queue."""

    cube: Cube
    resplit_count: int = 0
    budget: int = 0
    outcome: Optional[SolveOutcome] = None
    strategy_used: Optional[Strategy] = None


def make_queue(cubes: Sequence[Cube], cfg: CollectConfig) -> list[CubeRecord]:
    """Wrap an initial partition as a work queue of zero-resplit records."""
    budget = effective_budget(cfg, 0)
    return [CubeRecord(cube=c, budget=budget) for c in cubes]


@dataclass
class CollectResult:
    status: str  # sat / unsat / unknown
    collected: list[tuple[Cube, Strategy, int]]
    model: Optional[tuple[bool, ...]] = None


def collect(
    formula: Formula,
    queue: list[CubeRecord],
    cfg: CollectConfig,
    backend: Backend,
    workers: int = 1,
    log: Optional[Callable[[dict], None]] = None,
    step_limit: Optional[int] = None,
) -> CollectResult:
    """Gather sample_target cubes whose refutation cost falls in the band.

    The queue is mutated in place and on return holds exactly the cubes not
    yet solved (collected cubes count as solved work). A sat outcome ends the
    run immediately with a model verified against the original formula.
    """
    rng = random.Random(cfg.seed)
    pool = list(cfg.strategy_pool)
    collected: list[tuple[Cube, Strategy, int]] = []
    unexamined = list(queue)
    deferred: list[CubeRecord] = []
    steps = 0

    def emit(record: CubeRecord, outcome: SolveOutcome, fate: str):
        if log is not None:
            log({
                "event": "collect_check",
                "cube": list(record.cube.literals),
                "resplits": record.resplit_count,
                "budget": record.budget,
                "status": outcome.status,
                "cost": outcome.cost,
                "fate": fate,
            })

    def verify_model(model):
        if model is not None and not model_satisfies(formula, model):
            raise ModelVerificationFailed("backend sat model fails the original formula")

    def finish(status: str, remaining: list[CubeRecord], model=None) -> CollectResult:
        queue[:] = remaining
        return CollectResult(status, collected, model)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        while True:
            # draw the whole round up front: uniform-without-replacement cube
            # order plus one strategy per cube, independent of worker count
            rng.shuffle(unexamined)
            for rec in unexamined:
                # budgets follow the current band, not the one a leftover
                # record was enqueued under
                rec.budget = effective_budget(cfg, rec.resplit_count)
            claims = [(rec, rng.choice(pool)) for rec in unexamined]
            inflight: deque = deque()
            next_claim = 0
            committed = 0
            while committed < len(claims):
                while next_claim < len(claims) and len(inflight) < max(1, workers):
                    rec, strat = claims[next_claim]
                    inflight.append(
                        executor.submit(backend.check, formula, rec.cube, strat, rec.budget)
                    )
                    next_claim += 1
                record, strategy = claims[committed]
                outcome = inflight.popleft().result()
                committed += 1
                steps += 1
                if step_limit is not None and steps > step_limit:
                    raise StepLimitExceeded(f"exceeded {step_limit} collect steps")
                record.outcome = outcome
                record.strategy_used = strategy
                rest = [r for r, _ in claims[committed:]]
                if outcome.status == SAT:
                    verify_model(outcome.model)
                    emit(record, outcome, "sat")
                    return finish(SAT, rest + deferred, outcome.model)
                if outcome.status == UNSAT:
                    if outcome.cost >= cfg.min_cost:
                        collected.append((record.cube, strategy, outcome.cost))
                        emit(record, outcome, "collected")
                    else:
                        emit(record, outcome, "solved_below_band")
                    if len(collected) == cfg.sample_target:
                        return finish(UNKNOWN, rest + deferred)
                else:
                    deferred.append(record)
                    emit(record, outcome, "deferred")
            if not deferred:
                # queue drained with every cube refuted: the formula is unsat
                return finish(UNSAT, [])
            # lazy re-partitioning of every cube the budgets could not decide
            children: list[CubeRecord] = []
            for d_idx, record in enumerate(deferred):
                result = backend.cube(
                    formula, record.cube, cfg.online_cubes, seed=cfg.seed
                )
                if result.decided is not None:
                    if result.decided.status == SAT:
                        verify_model(result.decided.model)
                        emit(record, result.decided, "cuber_sat")
                        return finish(
                            SAT, children + deferred[d_idx + 1:], result.decided.model
                        )
                    # cuber concluded unsat: same as an unsat check at cost 0
                    emit(record, result.decided, "cuber_refuted")
                    continue
                budget = effective_budget(cfg, record.resplit_count + 1)
                for child in result.cubes:
                    children.append(
                        CubeRecord(
                            cube=child,
                            resplit_count=record.resplit_count + 1,
                            budget=budget,
                        )
                    )
            unexamined = children
            deferred = []
            if not unexamined:
                return finish(UNSAT, [])
