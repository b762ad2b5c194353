"""Hyper-resolution rules (star, dominating unit clause, chain, cycle) and
the implication graph used to spot chains among unit and binary clauses."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import Clause, Formula, clause_order, make_clause, ominus
from .resolution import cnf_linear


def _key(*lits: int) -> Clause:
    c = make_clause(lits)
    if c is None:
        raise ValueError(f"tautological clause {lits}")
    return c


def _weights(f: Formula, keys: Sequence[Clause]) -> list[int]:
    ws = []
    for k in keys:
        w = f.clauses.get(k, 0)
        if not w:
            raise ValueError(f"clause {k} is not in the formula")
        ws.append(w)
    return ws


def _distinct_vars(lits: Sequence[int]) -> None:
    if len({abs(l) for l in lits}) != len(lits):
        raise ValueError("literals must mention distinct variables")


def star_rule(f: Formula, clause: Iterable[int], *, inplace: bool = False) -> Formula:
    """Clause ``l1 v ... v lk`` whose every literal is negated in a soft unit clause.

    Moves ``m = min(w, u1..uk)`` to the lower bound.
    """
    key = make_clause(clause)
    if not key:
        raise ValueError("star rule needs a non-empty clause")
    units = [(-l,) for l in key]
    w, *us = _weights(f, [key] + units)
    top = f.top
    if any(u >= top for u in us):
        raise ValueError("a mandatory unit clause should be propagated instead")
    m = min(w, *us)
    g = f if inplace else f.copy()
    for k in [key] + units:
        g.remove(k)
    g.add_key(key, ominus(w, m, top))
    for i, l in enumerate(key[:-1]):
        for c, cw in cnf_linear([-l], key[i + 1:], m):
            g.add_key(c, cw)
    for k, u in zip(units, us):
        g.add_key(k, ominus(u, m, top))
    g.add_key((), m)
    return g


def dominating_unit_clause(f: Formula, lit: int, *, inplace: bool = False) -> Formula:
    """Unit ``(l,u)`` outweighing all clauses with ``-l``: eliminate var(l).

    Each ``(-l v B, w)`` becomes ``(B, w)`` and clauses containing ``l`` are
    dropped.  The result preserves the optimum, not per-assignment costs.
    """
    u = f.clauses.get((lit,), 0)
    if not u:
        raise ValueError(f"unit clause ({lit}) is not in the formula")
    if u >= f.top:
        raise ValueError("a mandatory unit clause should be propagated instead")
    negs = list(f.occ.get(-lit, ()))
    if sum(f.clauses[k] for k in negs) > u:
        raise ValueError("unit clause does not dominate")
    g = f if inplace else f.copy()
    for k in sorted(negs, key=clause_order):
        w = g.remove(k)
        g.add_key(tuple(l for l in k if l != -lit), w)
    for k in list(g.occ.get(lit, ())):
        g.remove(k)
    return g


def chain_resolution(f: Formula, lits: Sequence[int], *, inplace: bool = False) -> Formula:
    """Chain ``(l1), (-l1 v l2), ..., (-l(k-1) v lk), (-lk)`` derives the empty clause.

    ``lits`` is ``[l1, ..., lk]``; the involved clauses are read from ``f``.
    """
    lits = list(lits)
    if not lits:
        raise ValueError("empty chain")
    _distinct_vars(lits)
    k = len(lits)
    keys = [(lits[0],)] + [_key(-lits[i], lits[i + 1]) for i in range(k - 1)] + [(-lits[-1],)]
    us = _weights(f, keys)            # u1 .. u(k+1)
    top = f.top
    ms = []                           # m1 .. m(k+1), prefix minima
    for u in us:
        ms.append(u if not ms else min(ms[-1], u))
    g = f if inplace else f.copy()
    for key in keys:
        g.remove(key)
    for i in range(k):
        g.add_key((lits[i],), ominus(ms[i], ms[i + 1], top))
    for i in range(k - 1):
        g.add_key(keys[i + 1], ominus(us[i + 1], ms[i + 1], top))
        g.add_key(_key(lits[i], -lits[i + 1]), ms[i + 1])
    g.add_key(keys[-1], ominus(us[k], ms[k], top))
    g.add_key((), ms[k])
    return g


def cycle_resolution(f: Formula, lits: Sequence[int], *, inplace: bool = False) -> Formula:
    """Cycle ``(-l1 v l2), ..., (-l(k-1) v lk), (-l1 v -lk)`` derives ``(-l1, m)``."""
    lits = list(lits)
    k = len(lits)
    if k < 2:
        raise ValueError("a cycle needs at least two literals")
    _distinct_vars(lits)
    keys = [_key(-lits[i], lits[i + 1]) for i in range(k - 1)] + [_key(-lits[0], -lits[-1])]
    us = _weights(f, keys)            # u1 .. uk
    top = f.top
    ms = []
    for u in us:
        ms.append(u if not ms else min(ms[-1], u))
    l1 = lits[0]
    g = f if inplace else f.copy()
    for key in keys:
        g.remove(key)
    # indices below are 1-based as in the rule schema
    for i in range(2, k + 1):
        g.add_key(_key(-l1, lits[i - 1]), ominus(ms[i - 2], ms[i - 1], top))
    for i in range(2, k):
        g.add_key(keys[i - 1], ominus(us[i - 1], ms[i - 1], top))
        g.add_key(_key(-l1, lits[i - 1], -lits[i]), ms[i - 1])
        g.add_key(_key(l1, -lits[i - 1], lits[i]), ms[i - 1])
    g.add_key(keys[-1], ominus(us[-1], ms[-1], top))
    g.add_key((-l1,), ms[-1])
    return g


@dataclass
class ImplicationGraph:
    """Digraph over literals built from the unit and binary clauses.

    Each binary clause ``(a v b)`` gives the complementary arcs ``-a -> b`` and
    ``-b -> a``; ``arcs[u][v]`` is the clause that produced arc ``u -> v``.
    A unit ``(l)`` makes ``l`` a starting vertex and ``-l`` an ending vertex.
    """
    arcs: dict[int, dict[int, Clause]] = field(default_factory=dict)
    starts: list[int] = field(default_factory=list)
    ends: set[int] = field(default_factory=set)

    def arc_list(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u, nbrs in self.arcs.items() for v in nbrs)


def build_implication_graph(f: Formula) -> ImplicationGraph:
    g = ImplicationGraph()
    arcs = g.arcs
    for key in f.clauses:
        if len(key) == 2:
            a, b = key
            arcs.setdefault(-a, {})[b] = key
            arcs.setdefault(-b, {})[a] = key
        elif len(key) == 1:
            g.starts.append(key[0])
            g.ends.add(-key[0])
    g.starts.sort(key=lambda l: (abs(l), l > 0))
    for u in arcs:
        arcs[u] = dict(sorted(arcs[u].items(), key=lambda kv: (abs(kv[0]), kv[0] > 0)))
    return g


def valid_chain(g: ImplicationGraph, path: Sequence[int]) -> bool:
    """Start-to-end path with distinct variables that uses no clause twice."""
    if len(path) < 2 or path[0] not in g.starts or path[-1] not in g.ends:
        return False
    if len({abs(l) for l in path}) != len(path):
        return False
    used = set()
    for u, v in zip(path, path[1:]):
        key = g.arcs.get(u, {}).get(v)
        if key is None or key in used:
            return False
        used.add(key)
    return True


def detect_chain(g: ImplicationGraph) -> list[int] | None:
    """Shortest start-to-end path usable by chain resolution, or None.

    Starting vertices are probed in ascending variable order; from each one a
    breadth-first search (Dijkstra with unit arc lengths) yields one shortest
    path per reachable ending vertex, and the first valid one is returned.
    Like any single-path probe this can miss chains that exist.
    """
    if not g.ends:
        return None
    arcs = g.arcs
    for s in g.starts:
        parent = {s: None}
        q = deque([s])
        while q:
            u = q.popleft()
            if u in g.ends and u != s:
                path = [u]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                path.reverse()
                if valid_chain(g, path):
                    return path
            for v in arcs.get(u, ()):
                if v not in parent:
                    parent[v] = u
                    q.append(v)
    return None


def find_cycle3(f: Formula) -> list[int] | None:
    """First triple ``(l v h), (-l v q), (-h v q)`` of binary clauses.

    Returns the literal sequence for ``cycle_resolution``, which then derives
    the unit clause ``(q)``.
    """
    adj: dict[int, set[int]] = {}
    for key in f.clauses:
        if len(key) == 2:
            a, b = key
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
    if not adj:
        return None
    for key in sorted((k for k in f.clauses if len(k) == 2), key=clause_order):
        for l, h in (key, key[::-1]):
            na, nb = adj.get(-l), adj.get(-h)
            if not na or not nb:
                continue
            common = na & nb
            if not common:
                continue
            for q in sorted(common, key=lambda x: (abs(x), x > 0)):
                if abs(q) != abs(l) and abs(q) != abs(h):
                    return [-q, -l, h]
    return None


def find_star(f: Formula) -> Clause | None:
    """Binary clause whose two literals are both negated in soft unit clauses."""
    top = f.top
    units = f.clauses
    for key in sorted((k for k in f.clauses if len(k) == 2), key=clause_order):
        if all(0 < units.get((-l,), 0) < top for l in key):
            return key
    return None


def find_dominating_unit(f: Formula) -> int | None:
    top = f.top
    for key in sorted((k for k in f.clauses if len(k) == 1), key=clause_order):
        u = f.clauses[key]
        if u >= top:
            continue
        l = key[0]
        if sum(f.clauses[k] for k in f.occ.get(-l, ())) <= u:
            return l
    return None
