"""Brute-force ground truth: exhaustive enumeration of complete assignments.

Assignments are indexed by integers whose bit ``i`` is the value of the
``i``-th variable of the (sorted) variable list.  Enumeration is vectorised
with numpy in chunks, so up to ~24 variables stay practical.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .core import Formula

CHUNK = 1 << 18


class OracleLimitError(ValueError):
    pass


def _cost_chunk(f: Formula, var_index: dict[int, int], start: int, size: int) -> np.ndarray:
    idx = np.arange(start, start + size, dtype=np.int64)
    top = f.top
    cost = np.full(size, min(f.lb, top), dtype=np.int64)
    bits = {}
    for key, w in f.clauses.items():
        fals = np.ones(size, dtype=bool)
        for l in key:
            b = bits.get(l)
            if b is None:
                val = ((idx >> var_index[abs(l)]) & 1).astype(bool)
                b = ~val if l > 0 else val      # literal is false
                bits[l] = b
            fals &= b
        w = min(w, top)
        # capped add without overflow: min(cost, top - w) + w
        cost = np.where(fals, np.minimum(cost, top - w) + w, cost)
    return cost


def cost_table(f: Formula, variables: Sequence[int] | None = None, cap: int = 16) -> np.ndarray:
    """Cost of every complete assignment over ``variables`` (default: those of f)."""
    vs = list(variables) if variables is not None else f.variables()
    missing = set(f.variables()) - set(vs)
    if missing:
        raise ValueError(f"table variables miss {sorted(missing)}")
    if len(vs) > cap:
        raise OracleLimitError(f"{len(vs)} variables exceed the oracle cap {cap}")
    index = {v: i for i, v in enumerate(vs)}
    return _cost_chunk(f, index, 0, 1 << len(vs))


per_assignment_table = cost_table


def brute_force_opt(f: Formula, cap: int = 24) -> tuple[int, dict[int, bool] | None]:
    """Minimum cost and a witness assignment (None if every cost reaches top).

    The witness is the lowest-indexed optimal assignment.
    """
    vs = f.variables()
    n = len(vs)
    if n > cap:
        raise OracleLimitError(f"{n} variables exceed the oracle cap {cap}")
    index = {v: i for i, v in enumerate(vs)}
    total = 1 << n
    best, best_idx = None, None
    for start in range(0, total, CHUNK):
        size = min(CHUNK, total - start)
        cost = _cost_chunk(f, index, start, size)
        i = int(np.argmin(cost))
        if best is None or cost[i] < best:
            best, best_idx = int(cost[i]), start + i
    if best >= f.top:
        return f.top, None
    return best, decode(best_idx, vs)


def decode(index: int, variables: Sequence[int]) -> dict[int, bool]:
    return {v: bool(index >> i & 1) for i, v in enumerate(variables)}


def min_project(table: np.ndarray, variables: Sequence[int], keep: Iterable[int]) -> tuple[np.ndarray, list[int]]:
    """Minimise ``table`` over the variables not in ``keep``.

    Returns the projected table and its variable list (order of ``variables``).
    """
    vs = list(variables)
    keep = set(keep)
    t = table.reshape([2] * len(vs)) if vs else table
    # axis 0 of the reshaped array is the highest bit, i.e. the last variable
    drop = tuple(len(vs) - 1 - i for i, v in enumerate(vs) if v not in keep)
    if drop:
        t = t.min(axis=drop)
    kept = [v for v in vs if v in keep]
    return np.asarray(t).reshape(-1), kept


def equivalent(f: Formula, g: Formula, cap: int = 16) -> bool:
    """Same top, lb-inclusive cost on every assignment of the union variables."""
    if f.top != g.top:
        return False
    vs = sorted(set(f.variables()) | set(g.variables()))
    return bool(np.array_equal(cost_table(f, vs, cap), cost_table(g, vs, cap)))


def equivalent_projected(f: Formula, g: Formula, eliminated: Iterable[int], cap: int = 16) -> bool:
    """``g`` equals ``f`` minimised over the ``eliminated`` variables.

    ``g`` must not mention the eliminated variables.
    """
    elim = set(eliminated)
    if elim & set(g.variables()):
        raise ValueError("the reduced formula still mentions eliminated variables")
    if f.top != g.top:
        return False
    vs = sorted(set(f.variables()) | set(g.variables()) | elim)
    proj, kept = min_project(cost_table(f, vs, cap), vs, [v for v in vs if v not in elim])
    return bool(np.array_equal(proj, cost_table(g, kept, cap)))


def is_satisfiable(clauses: Iterable[Sequence[int]], cap: int = 24) -> bool:
    """Plain CNF satisfiability by enumeration."""
    clauses = [tuple(c) for c in clauses]
    if any(len(c) == 0 for c in clauses):
        return False
    f = Formula(1)
    for c in clauses:
        f.add(c, 1)
    return brute_force_opt(f, cap)[0] == 0
