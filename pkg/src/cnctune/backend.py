"""Solver backends: the check / eval / cube contract.

A backend solves a formula restricted by a cube under a strategy and a cost
budget, remembers the cost of decided solves for later eval() queries, and
partitions cubes. Two implementations: the embedded CDCL solver and an
external-process adapter driven by a command template. Backends are shared
read-only across workers; every check call allocates its own solver state.
"""

from __future__ import annotations

import re
import shlex
import subprocess
import tempfile
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from .cubers import CubeResult, LookaheadCuber
from .formula import Cube, Formula, conjoin, write_dimacs
from .minicdcl import (
    SAT,
    UNKNOWN,
    UNSAT,
    DecodeError,
    MiniSolverParams,
    SolveOutcome,
    solve as cdcl_solve,
)
from .strategy import Strategy, StrategySpace


class BackendError(Exception):
    pass


class NotYetSolved(BackendError):
    """eval() asked for a cube/strategy pair that no decided check produced."""


class SpawnFailure(BackendError):
    pass


class ExternalTimeout(BackendError):
    """Wall-clock timeout of an external solver; distinct from unknown."""


class UnparseableOutput(BackendError):
    pass


class Backend:
    """Base class: caching of decided costs and the cubing hook."""

    def __init__(self, cuber: Callable = None):
        self.cuber = cuber if cuber is not None else LookaheadCuber()
        self._eval_cache: dict = {}
        self._outcome_cache: dict = {}
        self._lock = threading.Lock()
        # actual solver invocations and conflicts spent; cache hits excluded
        self.stats = {"checks": 0, "cost": 0, "cube_calls": 0}

    def _solve(self, formula: Formula, cube: Cube, strategy: Strategy,
               budget: Optional[int]) -> SolveOutcome:
        raise NotImplementedError

    def check(self, formula: Formula, cube: Cube, strategy: Strategy,
              budget: Optional[int] = None) -> SolveOutcome:
        """Budgeted solve of formula ∧ cube; budget None means unlimited."""
        if budget is not None and budget < 1:
            raise BackendError("budget must be >= 1 or unlimited")
        key = (formula, cube.literals, strategy.values)
        with self._lock:
            cached = self._outcome_cache.get(key)
        # a decided outcome at cost c is valid for any budget > c; an
        # undecided one at budget b covers any smaller budget
        if cached is not None:
            if cached.status in (SAT, UNSAT) and (budget is None or cached.cost < budget):
                return cached
            if cached.status == UNKNOWN and budget is not None and budget <= cached.cost:
                return SolveOutcome(UNKNOWN, budget)
        outcome = self._solve(formula, cube, strategy, budget)
        with self._lock:
            self.stats["checks"] += 1
            self.stats["cost"] += outcome.cost
            prev = self._outcome_cache.get(key)
            if prev is None or outcome.cost > prev.cost or outcome.status != UNKNOWN:
                self._outcome_cache[key] = outcome
            if outcome.status in (SAT, UNSAT):
                self._eval_cache[key] = outcome.cost
        return outcome

    def eval(self, formula: Formula, cube: Cube, strategy: Strategy) -> int:
        """Cost recorded by the check that decided this cube; never re-solves."""
        key = (formula, cube.literals, strategy.values)
        with self._lock:
            if key not in self._eval_cache:
                raise NotYetSolved(f"no decided check recorded for cube {cube.literals}")
            return self._eval_cache[key]

    def cube(self, formula: Formula, base: Cube, k: int, seed: int = 0) -> CubeResult:
        """Partition formula ∧ base into at most k extending cubes."""
        with self._lock:
            self.stats["cube_calls"] += 1
        return self.cuber(formula, base, k, seed)


class MiniCdclBackend(Backend):
    """Embedded deterministic CDCL solver behind the backend contract."""

    def __init__(self, space: StrategySpace, cuber: Callable = None):
        super().__init__(cuber)
        self.space = space
        self._params_cache: dict[tuple, MiniSolverParams] = {}

    def decode(self, strategy: Strategy) -> MiniSolverParams:
        key = strategy.values
        if key not in self._params_cache:
            self._params_cache[key] = MiniSolverParams.from_assignment(
                self.space.as_dict(strategy)
            )
        return self._params_cache[key]

    def _solve(self, formula, cube, strategy, budget):
        return cdcl_solve(conjoin(formula, cube), self.decode(strategy), budget)


@dataclass(frozen=True)
class ExternalSolverConfig:
    """How to drive an external solver process.

    command_template uses {formula_file}, {budget}, and either {params}
    (expanded per param_flag_template for each non-default parameter) or
    explicit {param:NAME} placeholders. Status is classified by searching the
    output for the sat/unsat patterns; cost is the first capture group of
    cost_pattern.
    """

    command_template: str
    sat_pattern: str = r"^s SATISFIABLE"
    unsat_pattern: str = r"^s UNSATISFIABLE"
    cost_pattern: str = r"c conflicts:\s*(\d+)"
    param_flag_template: str = "--{name}={value}"
    timeout: Optional[float] = None
    workdir: Optional[str] = None
    unlimited_budget: int = 10**9
    ok_exit_codes: tuple[int, ...] = (0, 10, 20)


class ExternalBackend(Backend):
    """Runs a configured solver executable per check call.

    The restricted formula goes to a temp DIMACS file (one per call, removed
    on success, kept on error for debugging); the strategy becomes one flag
    per non-default parameter.
    """

    def __init__(self, config: ExternalSolverConfig, space: StrategySpace,
                 cuber: Callable = None):
        super().__init__(cuber)
        self.config = config
        self.space = space
        self._sat_re = re.compile(config.sat_pattern, re.MULTILINE)
        self._unsat_re = re.compile(config.unsat_pattern, re.MULTILINE)
        self._cost_re = re.compile(config.cost_pattern, re.MULTILINE)

    def build_command(self, formula_file: str, strategy: Strategy,
                      budget: Optional[int]) -> list[str]:
        cfg = self.config
        non_default = self.space.non_default(strategy)
        params = " ".join(
            cfg.param_flag_template.format(name=n, value=v)
            for n, v in non_default.items()
        )
        cmd = cfg.command_template
        cmd = cmd.replace("{formula_file}", formula_file)
        cmd = cmd.replace(
            "{budget}", str(budget if budget is not None else cfg.unlimited_budget)
        )
        cmd = cmd.replace("{params}", params)
        for name, value in self.space.as_dict(strategy).items():
            cmd = cmd.replace("{param:%s}" % name, value)
        return [tok for tok in shlex.split(cmd) if tok]

    def _parse_output(self, text: str, budget: Optional[int],
                      returncode: int) -> SolveOutcome:
        cfg = self.config
        if self._sat_re.search(text):
            status = SAT
        elif self._unsat_re.search(text):
            status = UNSAT
        elif returncode in cfg.ok_exit_codes:
            return SolveOutcome(
                UNKNOWN, budget if budget is not None else cfg.unlimited_budget
            )
        else:
            raise UnparseableOutput(
                f"no status pattern matched and exit code {returncode} unexpected"
            )
        m = self._cost_re.search(text)
        if m is None:
            raise UnparseableOutput(
                f"decided output lacks cost pattern {cfg.cost_pattern!r}"
            )
        cost = int(m.group(1))
        model = _parse_model_lines(text) if status == SAT else None
        return SolveOutcome(status, cost, model)

    def _solve(self, formula, cube, strategy, budget):
        cfg = self.config
        workdir = Path(cfg.workdir) if cfg.workdir else Path(tempfile.gettempdir())
        workdir.mkdir(parents=True, exist_ok=True)
        path = workdir / f"cnctune-{uuid.uuid4().hex}.cnf"
        path.write_text(write_dimacs(conjoin(formula, cube)))
        cmd = self.build_command(str(path), strategy, budget)
        try:
            proc = subprocess.run(
                cmd, capture_output=True, text=True, timeout=cfg.timeout,
                cwd=cfg.workdir,
            )
        except subprocess.TimeoutExpired:
            raise ExternalTimeout(f"{cmd[0]} exceeded {cfg.timeout}s on {path}")
        except OSError as exc:
            raise SpawnFailure(f"could not run {cmd[0]}: {exc}")
        outcome = self._parse_output(proc.stdout + proc.stderr, budget, proc.returncode)
        path.unlink(missing_ok=True)
        return outcome


def _parse_model_lines(text: str) -> Optional[tuple[bool, ...]]:
    """Assemble a model from SAT-competition `v ...` lines, if present."""
    lits = []
    for line in text.splitlines():
        if line.startswith("v ") or line == "v":
            lits.extend(int(t) for t in line[1:].split())
    lits = [l for l in lits if l != 0]
    if not lits:
        return None
    n = max(abs(l) for l in lits)
    model = [False] * n
    for l in lits:
        model[abs(l) - 1] = l > 0
    return tuple(model)
