"""A small, deterministic CDCL SAT solver with a conflict budget.

The solver exposes five tunable parameters (bump, tumble, phase, forcephase,
stable) controlling branching order, phase selection, and restarts. It counts
conflicts as its cost metric and stops with an "unknown" outcome when a
conflict budget is exhausted. Learned-clause deletion is deliberately absent
so that the conflict count stays a faithful difficulty measure; intended for
desk-scale instances.

Everything is a pure function of (formula, params, budget): no randomness,
no timing dependence, so repeated calls give byte-identical outcomes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .formula import Formula

SAT = "sat"
UNSAT = "unsat"
UNKNOWN = "unknown"


class DecodeError(Exception):
    """Strategy mentions a parameter or value this solver does not understand."""


@dataclass(frozen=True)
class MiniSolverParams:
    """Decoded solver configuration.

    bump: update variable activities on conflicts (off = frozen scores)
    tumble: heuristic initial variable ordering by occurrence count
            (off = file order)
    phase_saved: reuse each variable's last assigned polarity
    forcephase: always branch with the initial polarity
    stable: restart regime; 0 = Luby (base 64), 1 = alternating Luby /
            no-restart epochs of 1000 conflicts, 2 = no restarts
    """

    bump: bool = True
    tumble: bool = True
    phase_saved: bool = True
    forcephase: bool = False
    stable: int = 1

    @staticmethod
    def from_assignment(assignment: dict[str, str]) -> "MiniSolverParams":
        on_off = {"on": True, "off": False, "1": True, "0": False}
        kwargs = {}
        for name, value in assignment.items():
            if name in ("bump", "tumble", "forcephase"):
                if value not in on_off:
                    raise DecodeError(f"bad value {value!r} for {name}")
                kwargs[name] = on_off[value]
            elif name == "phase":
                if value not in ("saved", "default"):
                    raise DecodeError(f"bad value {value!r} for phase")
                kwargs["phase_saved"] = value == "saved"
            elif name == "stable":
                if value not in ("0", "1", "2"):
                    raise DecodeError(f"bad value {value!r} for stable")
                kwargs["stable"] = int(value)
            else:
                raise DecodeError(f"unknown mini-solver parameter {name!r}")
        return MiniSolverParams(**kwargs)


@dataclass(frozen=True)
class SolveOutcome:
    """Result of one budgeted solve attempt.

    status is sat/unsat/unknown; model is a full assignment (index 0 =
    variable 1) when sat; cost is the number of conflicts incurred.
    """

    status: str
    cost: int
    model: Optional[tuple[bool, ...]] = None


def luby(i: int) -> int:
    """Luby restart sequence, 1-indexed: 1 1 2 1 1 2 4 ..."""
    while True:
        k = i.bit_length()
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1


VAR_DECAY = 0.95
RESTART_BASE = 64
EPOCH_LEN = 1000


class _Solver:
    def __init__(self, formula: Formula, params: MiniSolverParams):
        self.n = formula.num_vars
        self.params = params
        self.clauses: list[list[int]] = [list(c) for c in formula.clauses]
        self.values = [0] * (self.n + 1)  # 0 unassigned, 1 true, -1 false
        self.levels = [0] * (self.n + 1)
        self.reasons: list[Optional[int]] = [None] * (self.n + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.saved_phase = [False] * (self.n + 1)
        self.activity = [0.0] * (self.n + 1)
        self.act_inc = 1.0
        if params.tumble:
            for clause in formula.clauses:
                for lit in clause:
                    self.activity[abs(lit)] += 1.0
        self.watches: dict[int, list[int]] = {}
        for v in range(1, self.n + 1):
            self.watches[v] = []
            self.watches[-v] = []
        self.conflicts = 0
        self.ok = True
        self.units: list[int] = []
        for ci, clause in enumerate(self.clauses):
            if len(clause) == 0:
                self.ok = False
            elif len(clause) == 1:
                self.units.append(clause[0])
            else:
                self.watches[clause[0]].append(ci)
                self.watches[clause[1]].append(ci)

    # -- assignment plumbing -------------------------------------------------

    def level(self) -> int:
        return len(self.trail_lim)

    def assign(self, lit: int, reason: Optional[int]):
        v = abs(lit)
        self.values[v] = 1 if lit > 0 else -1
        self.levels[v] = self.level()
        self.reasons[v] = reason
        self.saved_phase[v] = lit > 0
        self.trail.append(lit)

    def lit_value(self, lit: int) -> int:
        v = self.values[abs(lit)]
        return v if lit > 0 else -v

    def propagate(self) -> Optional[int]:
        """Unit propagation; returns a conflicting clause index or None."""
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            false_lit = -lit
            watchers = self.watches[false_lit]
            i = 0
            while i < len(watchers):
                ci = watchers[i]
                clause = self.clauses[ci]
                # normalize so clause[0] is the other watched literal
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                other = clause[0]
                if self.lit_value(other) == 1:
                    i += 1
                    continue
                moved = False
                for j in range(2, len(clause)):
                    if self.lit_value(clause[j]) != -1:
                        clause[1], clause[j] = clause[j], clause[1]
                        watchers[i] = watchers[-1]
                        watchers.pop()
                        self.watches[clause[1]].append(ci)
                        moved = True
                        break
                if moved:
                    continue
                if self.lit_value(other) == -1:
                    self.qhead = len(self.trail)
                    return ci
                self.assign(other, ci)
                i += 1
        return None

    # -- conflict analysis ---------------------------------------------------

    def bump_var(self, v: int):
        if not self.params.bump:
            return
        self.activity[v] += self.act_inc
        if self.activity[v] > 1e100:
            for u in range(1, self.n + 1):
                self.activity[u] *= 1e-100
            self.act_inc *= 1e-100

    def analyze(self, conflict_ci: int) -> tuple[list[int], int]:
        """First-UIP learning. Returns (learned clause, backjump level)."""
        learned: list[int] = []
        seen = [False] * (self.n + 1)
        counter = 0
        lit = 0
        ci: Optional[int] = conflict_ci
        idx = len(self.trail) - 1
        while True:
            assert ci is not None
            for q in self.clauses[ci]:
                v = abs(q)
                if not seen[v] and self.levels[v] > 0 and q != lit:
                    seen[v] = True
                    self.bump_var(v)
                    if self.levels[v] >= self.level():
                        counter += 1
                    else:
                        learned.append(q)
            while not seen[abs(self.trail[idx])]:
                idx -= 1
            lit = self.trail[idx]
            seen[abs(lit)] = False
            counter -= 1
            idx -= 1
            if counter == 0:
                break
            ci = self.reasons[abs(lit)]
        learned.insert(0, -lit)
        if len(learned) == 1:
            bj_level = 0
        else:
            bj_level = max(self.levels[abs(q)] for q in learned[1:])
            # move a literal of that level into the second watch slot
            for j in range(1, len(learned)):
                if self.levels[abs(learned[j])] == bj_level:
                    learned[1], learned[j] = learned[j], learned[1]
                    break
        if self.params.bump:
            self.act_inc /= VAR_DECAY
        return learned, bj_level

    def backjump(self, level: int):
        if self.level() <= level:
            return
        limit = self.trail_lim[level]
        for lit in self.trail[limit:]:
            v = abs(lit)
            self.values[v] = 0
            self.reasons[v] = None
        del self.trail[limit:]
        del self.trail_lim[level:]
        self.qhead = len(self.trail)

    def add_learned(self, learned: list[int]):
        if len(learned) == 1:
            self.assign(learned[0], None)
            return
        ci = len(self.clauses)
        self.clauses.append(learned)
        self.watches[learned[0]].append(ci)
        self.watches[learned[1]].append(ci)
        self.assign(learned[0], ci)

    # -- branching -----------------------------------------------------------

    def pick_branch_var(self) -> int:
        best_v = 0
        best_act = -1.0
        for v in range(1, self.n + 1):
            if self.values[v] == 0 and self.activity[v] > best_act:
                best_act = self.activity[v]
                best_v = v
        return best_v

    def branch_phase(self, v: int) -> bool:
        if self.params.forcephase:
            return False
        if self.params.phase_saved:
            return self.saved_phase[v]
        return False

    def restart_due(self, since_restart: int, restarts: int) -> bool:
        s = self.params.stable
        if s == 2:
            return False
        if s == 1 and (self.conflicts // EPOCH_LEN) % 2 == 1:
            return False
        return since_restart >= RESTART_BASE * luby(restarts + 1)

    # -- main loop -----------------------------------------------------------

    def solve(self, budget: Optional[int]) -> SolveOutcome:
        if not self.ok:
            return SolveOutcome(UNSAT, 0)
        for lit in self.units:
            val = self.lit_value(lit)
            if val == -1:
                return SolveOutcome(UNSAT, 0)
            if val == 0:
                self.assign(lit, None)
        if self.propagate() is not None:
            return SolveOutcome(UNSAT, 0)
        restarts = 0
        since_restart = 0
        while True:
            conflict = self.propagate()
            if conflict is not None:
                self.conflicts += 1
                since_restart += 1
                if self.level() == 0:
                    return SolveOutcome(UNSAT, self.conflicts)
                learned, bj_level = self.analyze(conflict)
                self.backjump(bj_level)
                self.add_learned(learned)
                if budget is not None and self.conflicts >= budget:
                    return SolveOutcome(UNKNOWN, budget)
                continue
            if self.restart_due(since_restart, restarts):
                restarts += 1
                since_restart = 0
                self.backjump(0)
                continue
            v = self.pick_branch_var()
            if v == 0:
                model = tuple(self.values[u] == 1 for u in range(1, self.n + 1))
                return SolveOutcome(SAT, self.conflicts, model)
            self.trail_lim.append(len(self.trail))
            self.assign(v if self.branch_phase(v) else -v, None)


def solve(
    formula: Formula,
    params: MiniSolverParams = MiniSolverParams(),
    conflict_budget: Optional[int] = None,
) -> SolveOutcome:
    """Run the CDCL solver; None budget means unlimited (always decides)."""
    if conflict_budget is not None and conflict_budget < 1:
        raise ValueError("conflict budget must be >= 1 or None")
    return _Solver(formula, params).solve(conflict_budget)
