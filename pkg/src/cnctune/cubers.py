"""Cube partitioners: a lookahead splitter and a unit-clause splitter.

Both are sound: the disjunction of the returned cube extensions is
equisatisfiable with the restricted formula. When unit propagation alone
decides the restricted formula, a cuber returns no children and reports the
decided status instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .formula import Cube, Formula
from .minicdcl import SAT, UNSAT, SolveOutcome


@dataclass(frozen=True)
class CubeResult:
    """Children of one partitioning call, or a decided status with no children."""

    cubes: tuple[Cube, ...] = ()
    decided: Optional[SolveOutcome] = None


def unit_propagate(
    formula: Formula, assumed: tuple[int, ...]
) -> tuple[Optional[dict[int, bool]], bool]:
    """Exhaustive unit propagation from the assumed literals.

    Returns (assignment, all_satisfied); assignment is None on conflict.
    all_satisfied is True when every clause is satisfied by the assignment.
    """
    assign: dict[int, bool] = {}
    for lit in assumed:
        want = lit > 0
        v = abs(lit)
        if assign.get(v, want) != want:
            return None, False
        assign[v] = want
    changed = True
    while changed:
        changed = False
        for clause in formula.clauses:
            unassigned = []
            satisfied = False
            for lit in clause:
                v = abs(lit)
                if v in assign:
                    if assign[v] == (lit > 0):
                        satisfied = True
                        break
                else:
                    unassigned.append(lit)
            if satisfied:
                continue
            if not unassigned:
                return None, False
            if len(unassigned) == 1:
                lit = unassigned[0]
                assign[abs(lit)] = lit > 0
                changed = True
    all_sat = all(
        any(assign.get(abs(l)) == (l > 0) for l in clause) for clause in formula.clauses
    )
    return assign, all_sat


def _decided_outcome(formula: Formula, assign: Optional[dict[int, bool]], all_sat: bool):
    if assign is None:
        return SolveOutcome(UNSAT, 0)
    if all_sat:
        model = tuple(assign.get(v, False) for v in range(1, formula.num_vars + 1))
        return SolveOutcome(SAT, 0, model)
    return None


class LookaheadCuber:
    """Splits on the variable whose two polarities propagate the most.

    The branch variable maximizes props_pos * props_neg + props_pos +
    props_neg, where props is the number of assignments unit propagation
    derives under each polarity. Recursion depth is floor(log2(k)), so at
    most k cubes come back. Deterministic and budget-free.
    """

    name = "lookahead"

    def __call__(self, formula: Formula, base: Cube, k: int, seed: int = 0) -> CubeResult:
        if k <= 1:
            raise ValueError("k must be > 1")
        assign, all_sat = unit_propagate(formula, base.literals)
        decided = _decided_outcome(formula, assign, all_sat)
        if decided is not None:
            return CubeResult((), decided)
        depth = max(1, int(math.log2(k)))
        leaves: list[Cube] = []
        self._split(formula, base.literals, depth, leaves)
        if not leaves:
            return CubeResult((), SolveOutcome(UNSAT, 0))
        return CubeResult(tuple(leaves))

    def _split(self, formula: Formula, assumed: tuple[int, ...], depth: int, out: list[Cube]):
        assign, all_sat = unit_propagate(formula, assumed)
        if assign is None:
            return  # refuted branch: sound to drop
        if depth == 0 or all_sat:
            out.append(Cube(assumed))
            return
        v = self._pick_variable(formula, assign)
        if v == 0:
            out.append(Cube(assumed))
            return
        self._split(formula, assumed + (v,), depth - 1, out)
        self._split(formula, assumed + (-v,), depth - 1, out)

    def _pick_variable(self, formula: Formula, assign: dict[int, bool]) -> int:
        base_size = len(assign)
        assumed = tuple((u if val else -u) for u, val in sorted(assign.items()))
        best_v, best_score = 0, -1.0
        for v in range(1, formula.num_vars + 1):
            if v in assign:
                continue
            pos, _ = unit_propagate(formula, assumed + (v,))
            neg, _ = unit_propagate(formula, assumed + (-v,))
            p = len(pos) - base_size - 1 if pos is not None else formula.num_vars
            q = len(neg) - base_size - 1 if neg is not None else formula.num_vars
            score = p * q + p + q
            if score > best_score:
                best_score, best_v = score, v
        return best_v


class UnitClauseCuber:
    """Splits on the lowest-indexed variable with no unit occurrence yet.

    Every returned cube extends the base with one fresh unit literal, so any
    cubing trace assigns a new variable per step and reaches a
    propagation-decidable cube within num_vars steps. This is the cuber whose
    bounded cost reduction makes the collection loop provably terminate.
    """

    name = "unit"

    def __call__(self, formula: Formula, base: Cube, k: int, seed: int = 0) -> CubeResult:
        if k <= 1:
            raise ValueError("k must be > 1")
        assign, all_sat = unit_propagate(formula, base.literals)
        decided = _decided_outcome(formula, assign, all_sat)
        if decided is not None:
            return CubeResult((), decided)
        units = {abs(l) for l in base.literals}
        units.update(abs(c[0]) for c in formula.clauses if len(c) == 1)
        v = next(
            (u for u in range(1, formula.num_vars + 1) if u not in units), 0
        )
        # if every variable occurred as a unit, propagation would have decided
        assert v != 0
        return CubeResult((base.extend(v), base.extend(-v)))


CUBERS = {c.name: c for c in (LookaheadCuber(), UnitClauseCuber())}
