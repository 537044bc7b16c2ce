"""Deterministic CNF benchmark families for desk-scale experiments.

php(p, h): pigeonhole principle, unsatisfiable iff p > h.
xor_miter(width, seed): two structurally different XOR circuits over the
    same inputs with their outputs asserted unequal; unsatisfiable by
    construction, and friendly to static branching orders.
random3cnf(n, m, seed): uniform random 3-CNF.
"""

from __future__ import annotations

import random

from .formula import Formula


def php(pigeons: int, holes: int) -> Formula:
    """Pigeonhole formula: every pigeon in some hole, no hole shared."""
    if pigeons < 1 or holes < 1:
        raise ValueError("pigeons and holes must be positive")
    var = lambda i, j: (i - 1) * holes + j
    clauses = []
    for i in range(1, pigeons + 1):
        clauses.append(tuple(var(i, j) for j in range(1, holes + 1)))
    for j in range(1, holes + 1):
        for i1 in range(1, pigeons + 1):
            for i2 in range(i1 + 1, pigeons + 1):
                clauses.append((-var(i1, j), -var(i2, j)))
    return Formula(pigeons * holes, tuple(clauses))


def _xor_gate(clauses: list, z: int, a: int, b: int, copies: int = 1):
    # z <-> a xor b
    for _ in range(copies):
        clauses.append((-z, a, b))
        clauses.append((-z, -a, -b))
        clauses.append((z, -a, b))
        clauses.append((z, a, -b))


def xor_miter(width: int, seed: int = 0) -> Formula:
    """Miter of an XOR chain against an XOR tree over shuffled inputs.

    Both circuits compute the parity of the same width inputs, so asserting
    that their outputs differ is unsatisfiable. The chain follows input
    order; the tree reduces a seeded shuffle of the inputs pairwise. The
    tree gates are emitted twice (the redundancy circuit encoders often
    leave behind), which skews occurrence counts toward the shuffled tree
    internals and away from the natural chain order, so branching-order
    heuristics genuinely matter on this family.
    """
    if width < 2:
        raise ValueError("width must be >= 2")
    rng = random.Random(seed)
    inputs = list(range(1, width + 1))
    next_var = width + 1
    clauses: list[tuple[int, ...]] = []

    # circuit A: left-to-right chain
    acc = inputs[0]
    for x in inputs[1:]:
        _xor_gate(clauses, next_var, acc, x)
        acc = next_var
        next_var += 1
    out_a = acc

    # circuit B: balanced tree over shuffled inputs
    layer = inputs[:]
    rng.shuffle(layer)
    while len(layer) > 1:
        nxt = []
        for i in range(0, len(layer) - 1, 2):
            _xor_gate(clauses, next_var, layer[i], layer[i + 1], copies=2)
            nxt.append(next_var)
            next_var += 1
        if len(layer) % 2:
            nxt.append(layer[-1])
        layer = nxt
    out_b = layer[0]

    # outputs must differ
    clauses.append((out_a, out_b))
    clauses.append((-out_a, -out_b))
    return Formula(next_var - 1, tuple(clauses))


def random3cnf(num_vars: int, num_clauses: int, seed: int = 0) -> Formula:
    """Uniform random 3-CNF with distinct variables per clause."""
    if num_vars < 3:
        raise ValueError("need at least 3 variables")
    rng = random.Random(seed)
    clauses = []
    for _ in range(num_clauses):
        vs = rng.sample(range(1, num_vars + 1), 3)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return Formula(num_vars, tuple(clauses))


def gen_benchmark(family: str, *args: int, seed: int = 0) -> Formula:
    """Dispatch by family name: php, xor-miter, random3."""
    if family == "php":
        return php(*args)
    if family in ("xor-miter", "xormiter"):
        return xor_miter(args[0], seed)
    if family in ("random3", "random3cnf"):
        return random3cnf(args[0], args[1], seed)
    raise ValueError(f"unknown benchmark family {family!r}")
