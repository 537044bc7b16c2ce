"""Discrete solver-parameter spaces and strategies.

A strategy space is an ordered list of parameters, each with a default value
and a non-empty set of alternatives, plus a cap on how many parameters may
deviate from their defaults at once. Value tokens are opaque strings; any
numeric meaning lives in the backends.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator, Optional


class SpaceError(Exception):
    pass


class SpaceTooLarge(SpaceError):
    pass


DEFAULT_ENUMERATION_CEILING = 10**6


@dataclass(frozen=True)
class ParamDef:
    name: str
    default: str
    alternatives: tuple[str, ...]

    def __post_init__(self):
        if not self.alternatives:
            raise SpaceError(f"parameter {self.name} has no alternatives")
        if len(set(self.alternatives)) != len(self.alternatives):
            raise SpaceError(f"parameter {self.name} has duplicate alternatives")
        if self.default in self.alternatives:
            raise SpaceError(f"parameter {self.name} lists its default as an alternative")

    @property
    def values(self) -> tuple[str, ...]:
        return (self.default,) + self.alternatives


@dataclass(frozen=True)
class Strategy:
    """One value per parameter, in the space's parameter order."""

    values: tuple[str, ...]

    def __str__(self) -> str:
        return " ".join(self.values)


@dataclass(frozen=True)
class StrategySpace:
    params: tuple[ParamDef, ...]
    max_deviations: Optional[int] = None  # None = unlimited

    def __post_init__(self):
        names = [p.name for p in self.params]
        if len(set(names)) != len(names):
            raise SpaceError(f"duplicate parameter names in {names}")
        if self.max_deviations is not None and self.max_deviations < 0:
            raise SpaceError("max_deviations must be >= 0")

    @property
    def default_strategy(self) -> Strategy:
        return Strategy(tuple(p.default for p in self.params))

    def deviation_count(self, s: Strategy) -> int:
        """Number of parameters whose value differs from the default."""
        self._check_member(s)
        return sum(1 for p, v in zip(self.params, s.values) if v != p.default)

    def _check_member(self, s: Strategy):
        if len(s.values) != len(self.params):
            raise SpaceError(
                f"strategy has {len(s.values)} values, space has {len(self.params)} parameters"
            )
        for p, v in zip(self.params, s.values):
            if v != p.default and v not in p.alternatives:
                raise SpaceError(f"value {v!r} not valid for parameter {p.name}")

    def contains(self, s: Strategy) -> bool:
        try:
            self._check_member(s)
        except SpaceError:
            return False
        cap = self.max_deviations
        return cap is None or self.deviation_count(s) <= cap

    def size(self) -> int:
        """Closed-form count of strategies under the deviation cap."""
        alts = [len(p.alternatives) for p in self.params]
        cap = self.max_deviations if self.max_deviations is not None else len(alts)
        cap = min(cap, len(alts))
        total = 0
        for k in range(cap + 1):
            for subset in itertools.combinations(alts, k):
                prod = 1
                for a in subset:
                    prod *= a
                total += prod
        return total

    def enumerate(self, ceiling: int = DEFAULT_ENUMERATION_CEILING) -> list[Strategy]:
        """All strategies with at most max_deviations non-default parameters.

        Deterministic order: by number of deviations, then lexicographic by
        deviating parameter indices, then by alternative order. The default
        strategy always comes first.
        """
        if self.size() > ceiling:
            raise SpaceTooLarge(f"space has {self.size()} strategies, ceiling {ceiling}")
        n = len(self.params)
        cap = self.max_deviations if self.max_deviations is not None else n
        cap = min(cap, n)
        defaults = tuple(p.default for p in self.params)
        out = []
        for k in range(cap + 1):
            for positions in itertools.combinations(range(n), k):
                for choice in itertools.product(
                    *(self.params[i].alternatives for i in positions)
                ):
                    values = list(defaults)
                    for i, v in zip(positions, choice):
                        values[i] = v
                    out.append(Strategy(tuple(values)))
        return out

    def neighbors(self, s: Strategy, k: int) -> list[Strategy]:
        """All valid strategies differing from s in 1..k parameter positions.

        Excludes s itself and anything over the deviation cap, so a uniform
        draw over the result is a proposal over valid states only.
        Deterministic order, mirroring enumerate's.
        """
        if k < 1:
            raise SpaceError("k must be >= 1")
        self._check_member(s)
        n = len(self.params)
        out = []
        for d in range(1, min(k, n) + 1):
            for positions in itertools.combinations(range(n), d):
                option_lists = []
                for i in positions:
                    p = self.params[i]
                    option_lists.append([v for v in p.values if v != s.values[i]])
                for choice in itertools.product(*option_lists):
                    values = list(s.values)
                    for i, v in zip(positions, choice):
                        values[i] = v
                    cand = Strategy(tuple(values))
                    if self.contains(cand):
                        out.append(cand)
        return out

    def sample_uniform(self, rng: random.Random) -> Strategy:
        """Uniform draw over the enumerated space; deterministic given rng state."""
        all_strategies = self.enumerate()
        if not all_strategies:
            raise SpaceError("empty strategy space")
        return rng.choice(all_strategies)

    def describe(self, s: Strategy) -> str:
        """Render non-default parameters as `name=value` pairs; σ0 renders as 'default'."""
        parts = [
            f"{p.name}={v}" for p, v in zip(self.params, s.values) if v != p.default
        ]
        return " ".join(parts) if parts else "default"

    def as_dict(self, s: Strategy) -> dict[str, str]:
        return {p.name: v for p, v in zip(self.params, s.values)}

    def non_default(self, s: Strategy) -> dict[str, str]:
        return {p.name: v for p, v in zip(self.params, s.values) if v != p.default}

    @staticmethod
    def from_config(decl: dict) -> "StrategySpace":
        """Build a space from a run-config declaration.

        Expects {"params": [{"name", "default", "alternatives"}...],
        "max_deviations": int or absent}.
        """
        params = tuple(
            ParamDef(
                name=str(p["name"]),
                default=str(p["default"]),
                alternatives=tuple(str(a) for a in p["alternatives"]),
            )
            for p in decl["params"]
        )
        cap = decl.get("max_deviations")
        return StrategySpace(params, None if cap is None else int(cap))


def count_strategies_recursive(space: StrategySpace) -> int:
    """Independent recursive counter, kept separate from size() for testing."""

    def go(i: int, deviations_left: int) -> int:
        if i == len(space.params):
            return 1
        total = go(i + 1, deviations_left)  # keep default
        if deviations_left > 0:
            total += len(space.params[i].alternatives) * go(i + 1, deviations_left - 1)
        return total

    cap = space.max_deviations if space.max_deviations is not None else len(space.params)
    return go(0, cap)


def kissat_style_space() -> StrategySpace:
    """The 9-parameter branching space with a 4-deviation cap (349 strategies)."""
    flips = ["bump", "bumpreasons", "chrono", "eliminate", "phase", "target", "tumble"]
    params = [ParamDef(name, "1", ("0",)) for name in flips]
    params.append(ParamDef("forcephase", "0", ("1",)))
    params.append(ParamDef("stable", "1", ("0", "2")))
    params.sort(key=lambda p: p.name)
    return StrategySpace(tuple(params), max_deviations=4)


def split_heuristic_space() -> StrategySpace:
    """The 2-parameter splitting space with no cap (12 strategies)."""
    return StrategySpace(
        (
            ParamDef("pl-split-freq", "10", ("1", "2", "5")),
            ParamDef("branch", "pseudo-impact", ("babsr", "polarity")),
        ),
        max_deviations=None,
    )


def mini_solver_space(max_deviations: Optional[int] = None) -> StrategySpace:
    """The embedded solver's 5-parameter space (48 strategies uncapped)."""
    return StrategySpace(
        (
            ParamDef("bump", "on", ("off",)),
            ParamDef("tumble", "on", ("off",)),
            ParamDef("phase", "saved", ("default",)),
            ParamDef("forcephase", "off", ("on",)),
            ParamDef("stable", "1", ("0", "2")),
        ),
        max_deviations=max_deviations,
    )
