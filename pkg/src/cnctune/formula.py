"""CNF formulas, cubes, DIMACS/iCNF I/O, and a brute-force oracle.

Literals are nonzero signed integers in DIMACS convention: positive means
the variable is asserted true, negative means false. Variables are numbered
1..num_vars. Formulas and cubes are immutable once built and safe to share
across worker threads.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np


class FormulaError(Exception):
    """Base class for parse/validation failures."""


class MalformedHeader(FormulaError):
    pass


class LiteralOutOfRange(FormulaError):
    pass


class UnterminatedClause(FormulaError):
    pass


class MalformedCubeLine(FormulaError):
    pass


class TooManyVariables(FormulaError):
    pass


class ContradictoryCube(FormulaError):
    pass


@dataclass(frozen=True)
class Formula:
    """A CNF clause database over variables 1..num_vars."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise LiteralOutOfRange(
                        f"literal {lit} out of range for {self.num_vars} variables"
                    )

    @staticmethod
    def from_clauses(num_vars: int, clauses: Iterable[Iterable[int]]) -> "Formula":
        return Formula(num_vars, tuple(tuple(c) for c in clauses))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def has_empty_clause(self) -> bool:
        return any(len(c) == 0 for c in self.clauses)


@dataclass(frozen=True)
class Cube:
    """A conjunction of literals restricting a formula.

    The empty cube is valid and denotes the unrestricted formula. A cube may
    not mention the same variable twice, in either polarity.
    """

    literals: tuple[int, ...] = ()

    def __post_init__(self):
        seen = set()
        for lit in self.literals:
            if lit == 0:
                raise ContradictoryCube("cube literal may not be 0")
            if abs(lit) in seen:
                raise ContradictoryCube(
                    f"variable {abs(lit)} appears more than once in cube {self.literals}"
                )
            seen.add(abs(lit))

    def extend(self, *lits: int) -> "Cube":
        return Cube(self.literals + tuple(lits))

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)


TOP = Cube()


def conjoin(formula: Formula, cube: Cube) -> Formula:
    """Return formula with each cube literal appended as a unit clause."""
    for lit in cube:
        if abs(lit) > formula.num_vars:
            raise LiteralOutOfRange(
                f"cube literal {lit} out of range for {formula.num_vars} variables"
            )
    if not cube.literals:
        return formula
    return Formula(
        formula.num_vars,
        formula.clauses + tuple((lit,) for lit in cube),
    )


def _parse_clause_tokens(tokens, num_vars, line_no, allow_missing_terminator=False):
    clauses = []
    current: list[int] = []
    for tok in tokens:
        lit = int(tok)
        if lit == 0:
            clauses.append(tuple(current))
            current = []
        else:
            if abs(lit) > num_vars:
                raise LiteralOutOfRange(
                    f"line {line_no}: literal {lit} exceeds declared {num_vars} variables"
                )
            current.append(lit)
    return clauses, current


def parse_dimacs(text: str | bytes) -> Formula:
    """Parse a DIMACS CNF file.

    A clause-count mismatch against the header is a warning, not an error;
    real-world files drift. Empty clauses are preserved.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    num_vars = None
    declared_clauses = None
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise MalformedHeader(f"line {line_no}: bad header {line!r}")
            try:
                num_vars, declared_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise MalformedHeader(f"line {line_no}: bad header {line!r}")
            if num_vars < 0 or declared_clauses < 0:
                raise MalformedHeader(f"line {line_no}: negative counts in {line!r}")
            continue
        if num_vars is None:
            raise MalformedHeader(f"line {line_no}: clause before 'p cnf' header")
        try:
            new_clauses, pending = _parse_clause_tokens(
                pending + [int(t) for t in line.split()], num_vars, line_no
            )
        except ValueError:
            raise MalformedHeader(f"line {line_no}: non-integer token in {line!r}")
        clauses.extend(new_clauses)
    if num_vars is None:
        raise MalformedHeader("missing 'p cnf' header")
    if pending:
        raise UnterminatedClause(f"clause {pending} not terminated by 0 at EOF")
    if declared_clauses is not None and declared_clauses != len(clauses):
        warnings.warn(
            f"header declares {declared_clauses} clauses, file has {len(clauses)}",
            stacklevel=2,
        )
    return Formula(num_vars, tuple(clauses))


def write_dimacs(formula: Formula) -> str:
    """Serialize a formula to DIMACS CNF."""
    lines = [f"p cnf {formula.num_vars} {formula.num_clauses}"]
    for clause in formula.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + (" 0" if clause else "0"))
    return "\n".join(lines) + "\n"


def write_icnf(formula: Formula, cubes: Sequence[Cube]) -> str:
    """Serialize a formula plus cube set in the incremental-CNF format.

    Emits a `p inccnf` header, the clauses, then one `a <lit> ... 0` line per
    cube. Round-trips through parse_icnf bit-exactly.
    """
    for cube in cubes:
        for lit in cube:
            if abs(lit) > formula.num_vars:
                raise LiteralOutOfRange(f"cube literal {lit} out of range")
    lines = ["p inccnf"]
    for clause in formula.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + (" 0" if clause else "0"))
    for cube in cubes:
        body = " ".join(str(lit) for lit in cube)
        lines.append(f"a {body} 0" if body else "a 0")
    return "\n".join(lines) + "\n"


def parse_icnf(text: str | bytes) -> tuple[Formula, list[Cube]]:
    """Parse an incremental-CNF file: inverse of write_icnf.

    The `p inccnf` header carries no counts, so the variable count is the
    maximum index seen in clauses and cubes.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    saw_header = False
    clauses: list[tuple[int, ...]] = []
    cubes: list[Cube] = []
    pending: list[int] = []
    max_var = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 2 or parts[1] != "inccnf":
                raise MalformedHeader(f"line {line_no}: bad header {line!r}")
            saw_header = True
            continue
        if not saw_header:
            raise MalformedHeader(f"line {line_no}: content before 'p inccnf' header")
        if line.startswith("a"):
            if pending:
                raise UnterminatedClause(
                    f"line {line_no}: clause {pending} not terminated before cube line"
                )
            toks = line.split()[1:]
            if not toks or toks[-1] != "0":
                raise MalformedCubeLine(f"line {line_no}: cube line {line!r} lacks terminator")
            try:
                lits = [int(t) for t in toks[:-1]]
            except ValueError:
                raise MalformedCubeLine(f"line {line_no}: non-integer token in {line!r}")
            if any(lit == 0 for lit in lits):
                raise MalformedCubeLine(f"line {line_no}: embedded 0 in cube {line!r}")
            max_var = max([max_var] + [abs(l) for l in lits])
            cubes.append(Cube(tuple(lits)))
            continue
        try:
            toks = [int(t) for t in line.split()]
        except ValueError:
            raise MalformedHeader(f"line {line_no}: non-integer token in {line!r}")
        for tok in toks:
            if tok == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                max_var = max(max_var, abs(tok))
                pending.append(tok)
    if not saw_header:
        raise MalformedHeader("missing 'p inccnf' header")
    if pending:
        raise UnterminatedClause(f"clause {pending} not terminated by 0 at EOF")
    return Formula(max_var, tuple(clauses)), cubes


BRUTE_FORCE_VAR_LIMIT = 24
_CHUNK_BITS = 18  # cap per-chunk memory of the truth-table sweep


def brute_force_sat(formula: Formula) -> Optional[tuple[bool, ...]]:
    """Exhaustive truth-table satisfiability check, used as a test oracle.

    Returns a full assignment (index 0 = variable 1) if satisfiable, None if
    unsatisfiable. Exponential in num_vars; refuses more than 24 variables.
    """
    n = formula.num_vars
    if n > BRUTE_FORCE_VAR_LIMIT:
        raise TooManyVariables(f"{n} variables exceeds the {BRUTE_FORCE_VAR_LIMIT}-var oracle limit")
    if formula.has_empty_clause():
        return None
    if not formula.clauses:
        return tuple([False] * n)
    total = 1 << n
    chunk = min(total, 1 << _CHUNK_BITS)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.uint32)
        ok = np.ones(idx.shape, dtype=bool)
        for clause in formula.clauses:
            sat = np.zeros(idx.shape, dtype=bool)
            for lit in clause:
                bit = (idx >> (abs(lit) - 1)) & 1
                sat |= (bit == 1) if lit > 0 else (bit == 0)
            ok &= sat
            if not ok.any():
                break
        hits = np.flatnonzero(ok)
        if hits.size:
            model_idx = int(idx[hits[0]])
            return tuple(bool((model_idx >> v) & 1) for v in range(n))
    return None


def model_satisfies(formula: Formula, model: Sequence[bool]) -> bool:
    """Check a full assignment against every clause."""
    if len(model) < formula.num_vars:
        return False
    for clause in formula.clauses:
        if not any(model[abs(l) - 1] == (l > 0) for l in clause):
            return False
    return True
