"""End-to-end orchestration: cube, learn a strategy online, validate, solve.

sdac() runs the full self-tuning pipeline: an initial partition, a first
collection round (strategies drawn over the whole space) feeding the tuner,
a second round (under the learned strategy only) feeding validation, then a
parallel final phase solving every remaining cube under the chosen policy.
plain_cnc() is the untuned baseline over the same cube order.
"""

from __future__ import annotations

import random
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict
from typing import Callable, Optional

from .backend import Backend
from .collect import CollectConfig, CubeRecord, collect, make_queue
from .formula import TOP, Cube, Formula, model_satisfies
from .minicdcl import SAT, UNKNOWN, UNSAT, SolveOutcome
from .strategy import Strategy, StrategySpace
from .tune import CubeCostOracle, TuneConfig, TuneReport, tune
from .validate import FinalPolicy, ValidationReport, solve_with_policy, validate


class OrchestrationError(Exception):
    pass


@dataclass
class RunConfig:
    """Knobs of one end-to-end run; defaults follow the desk-scale setup."""

    initial_cubes: int = 64
    tuning_cubes: int = 50
    validation_cubes: int = 25
    tuning_band: tuple[int, int] = (500, 10000)
    validation_band: tuple[int, int] = (10000, 50000)
    online_cubes: int = 64
    tune_samples: int = 20
    beta: Optional[float] = None
    proposal_k: int = 2
    par_multiplier: int = 2
    probe: bool = True
    budget_growth: float = 2.0
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        for count in (self.initial_cubes, self.tuning_cubes, self.validation_cubes,
                      self.tune_samples, self.workers):
            if count < 1:
                raise OrchestrationError("all counts must be >= 1")


@dataclass
class RunReport:
    """Machine-readable record of one run.

    per_cube rows tag each decided cube with the phase that solved it.
    timings (wall-clock seconds per phase) and counters/phase_costs (which
    include speculative work that extra workers run ahead on) vary between
    machines and worker counts, so they are excluded from the canonical
    form used for determinism comparisons.
    """

    answer: str = ""
    model: Optional[list[int]] = None
    mode: str = "sdac"
    seed: int = 0
    workers: int = 1
    learned_strategy: Optional[str] = None
    validation_accepted: Optional[bool] = None
    policy: Optional[str] = None
    tune_best_cost: Optional[int] = None
    tune_default_cost: Optional[int] = None
    tune_evaluations: Optional[int] = None
    per_cube: list[dict] = field(default_factory=list)
    counters: dict = field(default_factory=dict)
    phase_costs: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def canonical_dict(self) -> dict:
        d = asdict(self)
        for key in ("timings", "counters", "phase_costs"):
            d.pop(key)
        return d

    def total_cost(self) -> int:
        return self.counters.get("cost", 0)

    def solved_cube_costs(self) -> dict[tuple[int, ...], int]:
        """Map of decided cube -> conflicts paid for it, across all phases."""
        out = {}
        for row in self.per_cube:
            if row["status"] in (SAT, UNSAT):
                out[tuple(row["cube"])] = row["cost"]
        return out


def _noop(record: dict):
    pass


def _initial_partition(formula: Formula, backend: Backend, cfg: RunConfig,
                       report: RunReport, log) -> Optional[list[Cube]]:
    """Cube the formula; fills the report and returns None when already decided."""
    result = backend.cube(formula, TOP, max(2, cfg.initial_cubes), seed=cfg.seed)
    if result.decided is not None:
        report.answer = result.decided.status
        if result.decided.model is not None:
            report.model = _model_to_lits(result.decided.model)
        report.per_cube.append({
            "cube": [], "phase": "cubing", "strategy": None,
            "status": result.decided.status, "cost": result.decided.cost,
        })
        return None
    log({"event": "cubing", "cubes": len(result.cubes)})
    return list(result.cubes)


def _model_to_lits(model) -> list[int]:
    return [(i + 1) if v else -(i + 1) for i, v in enumerate(model)]


def _final_solve(
    formula: Formula,
    queue: list[CubeRecord],
    policy: FinalPolicy,
    backend: Backend,
    cfg: RunConfig,
    report: RunReport,
    log,
    policy_desc: str,
) -> None:
    """Solve remaining cubes in queue order, committing in claim order.

    Workers run ahead speculatively; a sat result cancels the rest, and the
    first sat in claim order is the one reported.
    """
    records = list(queue)
    with ThreadPoolExecutor(max_workers=cfg.workers) as executor:
        inflight: deque = deque()
        next_claim = 0
        committed = 0
        while committed < len(records):
            while next_claim < len(records) and len(inflight) < cfg.workers:
                rec = records[next_claim]
                inflight.append(executor.submit(
                    solve_with_policy, formula, rec.cube, policy, backend
                ))
                next_claim += 1
            outcome = inflight.popleft().result()
            rec = records[committed]
            committed += 1
            row = {
                "cube": list(rec.cube.literals), "phase": "solving",
                "strategy": policy_desc, "status": outcome.status,
                "cost": outcome.cost,
            }
            report.per_cube.append(row)
            log({"event": "solve_cube", **row})
            if outcome.status == SAT:
                if outcome.model is not None and not model_satisfies(formula, outcome.model):
                    raise OrchestrationError("final-phase sat model fails the formula")
                for fut in inflight:
                    fut.cancel()
                report.answer = SAT
                if outcome.model is not None:
                    report.model = _model_to_lits(outcome.model)
                queue[:] = records[committed:]
                return
    queue[:] = []
    report.answer = UNSAT


def _phase_cost(backend: Backend, mark: dict) -> int:
    return backend.stats["cost"] - mark["cost"]


def sdac(
    formula: Formula,
    space: StrategySpace,
    backend: Backend,
    cfg: RunConfig = RunConfig(),
    log: Optional[Callable[[dict], None]] = None,
) -> RunReport:
    """Cube-and-conquer with online strategy learning, end to end."""
    log = log or _noop
    report = RunReport(mode="sdac", seed=cfg.seed, workers=cfg.workers)
    default = space.default_strategy
    t0 = time.perf_counter()
    mark = dict(backend.stats)

    cubes = _initial_partition(formula, backend, cfg, report, log)
    t_cube = time.perf_counter()
    report.timings["cubing"] = t_cube - t0
    report.phase_costs["cubing"] = _phase_cost(backend, mark)
    if cubes is None:
        _finalize(report, backend, t0)
        return report

    # round 1: tuning cubes, strategies drawn over the whole space (unbiased)
    tuning_cfg = CollectConfig(
        sample_target=cfg.tuning_cubes,
        min_cost=cfg.tuning_band[0],
        max_cost=cfg.tuning_band[1],
        strategy_pool=space.enumerate(),
        online_cubes=cfg.online_cubes,
        budget_growth=cfg.budget_growth,
        seed=cfg.seed,
    )
    queue = make_queue(cubes, tuning_cfg)
    mark = dict(backend.stats)
    result = collect(
        formula, queue, tuning_cfg, backend, workers=cfg.workers,
        log=_collect_logger(report, log, "tuning"),
    )
    if result.status in (SAT, UNSAT):
        report.answer = result.status
        if result.model is not None:
            report.model = _model_to_lits(result.model)
        report.timings["learning"] = time.perf_counter() - t_cube
        report.phase_costs["learning"] = _phase_cost(backend, mark)
        _finalize(report, backend, t0)
        return report

    tune_cfg = TuneConfig(
        num_samples=cfg.tune_samples,
        beta=cfg.beta,
        proposal_k=cfg.proposal_k,
        per_cube_budget=cfg.tuning_band[1],
        par_multiplier=cfg.par_multiplier,
        probe=cfg.probe,
        seed=cfg.seed,
        workers=cfg.workers,
    )
    oracle = CubeCostOracle(
        formula, [c for c, _, _ in result.collected], backend,
        budget=tune_cfg.per_cube_budget, par_multiplier=cfg.par_multiplier,
        workers=cfg.workers,
    )
    tune_report = tune(space, default, oracle, tune_cfg, log=log)
    report.learned_strategy = space.describe(tune_report.best)
    report.tune_best_cost = tune_report.best_cost
    report.tune_default_cost = tune_report.default_cost
    report.tune_evaluations = tune_report.evaluations

    policy = FinalPolicy(first=default)
    if tune_report.best != default:
        # round 2: validation cubes, collected under the learned strategy only
        val_cfg = CollectConfig(
            sample_target=cfg.validation_cubes,
            min_cost=cfg.validation_band[0],
            max_cost=cfg.validation_band[1],
            strategy_pool=[tune_report.best],
            online_cubes=cfg.online_cubes,
            budget_growth=cfg.budget_growth,
            seed=cfg.seed + 1,
        )
        result = collect(
            formula, queue, val_cfg, backend, workers=cfg.workers,
            log=_collect_logger(report, log, "validation"),
        )
        if result.status in (SAT, UNSAT):
            report.answer = result.status
            if result.model is not None:
                report.model = _model_to_lits(result.model)
            report.timings["learning"] = time.perf_counter() - t_cube
            report.phase_costs["learning"] = _phase_cost(backend, mark)
            _finalize(report, backend, t0)
            return report
        learned_costs = {c.literals: cost for c, _, cost in result.collected}
        policy, val_report = validate(
            formula, [c for c, _, _ in result.collected],
            tune_report.best, default, backend,
            budget=cfg.validation_band[1], par_multiplier=cfg.par_multiplier,
            learned_costs=learned_costs, workers=cfg.workers, log=log,
        )
        report.validation_accepted = val_report.accepted

    report.policy = _describe_policy(policy, space)
    t_learn = time.perf_counter()
    report.timings["learning"] = t_learn - t_cube
    report.phase_costs["learning"] = _phase_cost(backend, mark)

    mark = dict(backend.stats)
    _final_solve(formula, queue, policy, backend, cfg, report, log, report.policy)
    report.timings["solving"] = time.perf_counter() - t_learn
    report.phase_costs["solving"] = _phase_cost(backend, mark)
    _finalize(report, backend, t0)
    return report


def plain_cnc(
    formula: Formula,
    space: StrategySpace,
    backend: Backend,
    cfg: RunConfig = RunConfig(),
    log: Optional[Callable[[dict], None]] = None,
) -> RunReport:
    """Baseline cube-and-conquer: cube once, solve everything with the default.

    Cubes are solved in the same seeded order sdac's first collection round
    uses, so per-cube costs are comparable between the two modes.
    """
    log = log or _noop
    report = RunReport(mode="cnc", seed=cfg.seed, workers=cfg.workers)
    default = space.default_strategy
    t0 = time.perf_counter()
    mark = dict(backend.stats)
    cubes = _initial_partition(formula, backend, cfg, report, log)
    t_cube = time.perf_counter()
    report.timings["cubing"] = t_cube - t0
    report.phase_costs["cubing"] = _phase_cost(backend, mark)
    if cubes is None:
        _finalize(report, backend, t0)
        return report
    queue = [CubeRecord(cube=c) for c in cubes]
    # mirror the first shuffle of sdac's collection round
    random.Random(cfg.seed).shuffle(queue)
    report.timings["learning"] = 0.0
    report.phase_costs["learning"] = 0
    mark = dict(backend.stats)
    policy = FinalPolicy(first=default)
    report.policy = _describe_policy(policy, space)
    _final_solve(formula, queue, policy, backend, cfg, report, log, report.policy)
    report.timings["solving"] = time.perf_counter() - t_cube
    report.phase_costs["solving"] = _phase_cost(backend, mark)
    _finalize(report, backend, t0)
    return report


def _collect_logger(report: RunReport, log, phase: str):
    """Forward collect events to the log and record decided cubes in the report."""

    def record(entry: dict):
        log({**entry, "phase": phase})
        if entry.get("event") == "collect_check" and entry["status"] in (SAT, UNSAT):
            report.per_cube.append({
                "cube": entry["cube"], "phase": phase, "strategy": None,
                "status": entry["status"], "cost": entry["cost"],
            })

    return record


def _describe_policy(policy: FinalPolicy, space: StrategySpace) -> str:
    if policy.is_portfolio:
        return (
            f"portfolio({space.describe(policy.first)}, {policy.first_budget}, "
            f"{space.describe(policy.fallback)})"
        )
    return space.describe(policy.first)


def _finalize(report: RunReport, backend: Backend, t0: float):
    report.timings["total"] = time.perf_counter() - t0
    report.counters = dict(backend.stats)


def common_cube_costs(a: RunReport, b: RunReport) -> list[tuple[tuple[int, ...], int, int]]:
    """Cubes decided in both runs with the conflicts each run paid for them."""
    costs_a = a.solved_cube_costs()
    costs_b = b.solved_cube_costs()
    common = sorted(set(costs_a) & set(costs_b))
    return [(cube, costs_a[cube], costs_b[cube]) for cube in common]
