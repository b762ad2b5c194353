"""Variable elimination: interaction graphs, induced width, Max-VarElim and Max-DP."""
from __future__ import annotations

import heapq
import os
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .core import Clause, Formula, clause_order, make_clause, ominus
from .resolution import absorbed, cnf_linear
from .search import Simplifier

DEFAULT_CLAUSE_CAP = 10 ** 7
ORDERS = ("mindeg", "minfill", "given")


class ResourceLimitError(RuntimeError):
    """Elimination stored more clauses than the configured cap."""


@dataclass
class InteractionGraph:
    adj: dict[int, set[int]] = field(default_factory=dict)

    @property
    def vertices(self) -> list[int]:
        return sorted(self.adj)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u, nb in self.adj.items() for v in nb if u < v)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def copy(self) -> "InteractionGraph":
        return InteractionGraph({v: set(nb) for v, nb in self.adj.items()})


def interaction_graph(f: Formula) -> InteractionGraph:
    g = InteractionGraph({v: set() for v in f.variables()})
    for key in f.clauses:
        vs = [abs(l) for l in key]
        for a, b in combinations(vs, 2):
            g.adj[a].add(b)
            g.adj[b].add(a)
    return g


@dataclass
class EliminationOrder:
    order: list[int]
    widths: dict[int, int]
    induced_width: int
    added_edges: list[tuple[int, int]]


def induced_width(g: InteractionGraph, order: Sequence[int]) -> EliminationOrder:
    """Induced graph along ``order``: vertices are processed last to first and
    the earlier neighbours (parents) of each one are connected pairwise."""
    order = list(order)
    if sorted(order) != g.vertices:
        raise ValueError("order must be a permutation of the graph's vertices")
    pos = {v: i for i, v in enumerate(order)}
    adj = {v: set(nb) for v, nb in g.adj.items()}
    widths = {}
    added = []
    for v in reversed(order):
        parents = sorted((u for u in adj[v] if pos[u] < pos[v]), key=pos.get)
        widths[v] = len(parents)
        for a, b in combinations(parents, 2):
            if b not in adj[a]:
                adj[a].add(b)
                adj[b].add(a)
                added.append((min(a, b), max(a, b)))
    return EliminationOrder(order, widths, max(widths.values(), default=0), added)


def select_elim_var(g: InteractionGraph) -> int:
    """Minimum-degree vertex, lowest index on ties."""
    if not g.adj:
        raise ValueError("empty graph")
    return min(g.adj, key=lambda v: (len(g.adj[v]), v))


def min_fill_order(g: InteractionGraph) -> list[int]:
    """Static greedy min-fill elimination sequence (first eliminated first)."""
    adj = {v: set(nb) for v, nb in g.adj.items()}
    seq = []
    while adj:
        def fill(v):
            nb = adj[v]
            return sum(1 for a, b in combinations(nb, 2) if b not in adj[a])
        v = min(adj, key=lambda v: (fill(v), len(adj[v]), v))
        nb = adj.pop(v)
        for a in nb:
            adj[a].discard(v)
        for a, b in combinations(nb, 2):
            adj[a].add(b)
            adj[b].add(a)
        seq.append(v)
    return seq


@dataclass
class StepStats:
    var: int
    neighbors: int          # variables sharing a clause with var at elimination
    max_bucket: int         # largest number of distinct clauses held in the bucket
    resolvents: int         # distinct clauses added to the formula
    resolutions: int        # resolution steps performed


@dataclass
class EliminationStats:
    steps: list[StepStats] = field(default_factory=list)
    rules: Counter = field(default_factory=Counter)
    peak_clauses: int = 0

    @property
    def max_width(self) -> int:
        return max((s.neighbors for s in self.steps), default=0)

    @property
    def max_bucket(self) -> int:
        return max((s.max_bucket for s in self.steps), default=0)

    @property
    def max_resolvents(self) -> int:
        return max((s.resolvents for s in self.steps), default=0)

    def as_dict(self) -> dict[str, int]:
        d = {"eliminated": len(self.steps), "max_width": self.max_width,
             "max_bucket": self.max_bucket, "max_resolvents": self.max_resolvents,
             "resolutions": sum(s.resolutions for s in self.steps),
             "peak_clauses": self.peak_clauses}
        for rule in sorted(self.rules):
            d[f"rule_{rule}"] = self.rules[rule]
        return d


def max_var_elim(f: Formula, x: int, *, inplace: bool = False, stats: EliminationStats | None = None,
                 clause_cap: int | None = None, check_saturation: bool = False) -> Formula:
    """Eliminate variable ``x`` by resolving its bucket with weighted resolution.

    Positive clauses are popped smallest first (canonical order on ties) and
    resolved against clashing negative clauses until their weight runs out or
    none clash.  Resolvents go to the formula, compensation clauses back to
    the bucket; whatever is left in the bucket at the end is discarded.
    """
    g = f if inplace else f.copy()
    top = g.top
    bucket: dict[Clause, int] = {}
    for key in list(g.occ.get(x, ())) + list(g.occ.get(-x, ())):
        bucket[key] = g.remove(key)
    nbrs = {abs(l) for key in bucket for l in key} - {x}
    step = StepStats(x, len(nbrs), len(bucket), 0, 0)
    resolvents: set[Clause] = set()
    discarded: list[Clause] = []

    pos_heap = [(clause_order(k), k) for k in bucket if x in k]
    neg_heap = [(clause_order(k), k) for k in bucket if -x in k]
    heapq.heapify(pos_heap)
    heapq.heapify(neg_heap)

    def put(key, w):
        if w <= 0:
            return
        old = bucket.get(key, 0)
        bucket[key] = min(old + w, top)
        if not old:
            heapq.heappush(pos_heap if x in key else neg_heap, (clause_order(key), key))

    def clashing(A, nkey, Aneg=frozenset()):
        if not Aneg.isdisjoint(nkey):
            return None         # tautological resolvent
        B = [l for l in nkey if l != -x]
        r = make_clause(A + B)
        if r is not None and not absorbed(g, r):
            return B, r
        return None

    while pos_heap:
        _, key = heapq.heappop(pos_heap)
        u = bucket.pop(key, 0)
        if not u:
            continue
        A = [l for l in key if l != x]
        Aneg = frozenset(-l for l in A)
        # negative clauses that do not clash with x v A never will: clashing
        # only depends on the clause and on mandatory clauses, which only grow
        dead: list = []
        while u > 0 and neg_heap:
            entry = heapq.heappop(neg_heap)
            nkey = entry[1]
            if nkey not in bucket:
                continue
            hit = clashing(A, nkey, Aneg)
            if hit is None:
                dead.append(entry)
                continue
            B, r = hit
            w = bucket.pop(nkey)
            m = min(u, w)
            sA, sB = set(A), set(B)
            put(nkey, ominus(w, m, top))
            if not (sB <= sA or u >= top):
                for c, cw in cnf_linear([x] + A, B, m):
                    put(c, cw)
            if not (sA <= sB or w >= top):
                for c, cw in cnf_linear([-x] + B, A, m):
                    put(c, cw)
            u = ominus(u, m, top)
            g.add_key(r, m)
            resolvents.add(r)
            step.resolutions += 1
            step.max_bucket = max(step.max_bucket, len(bucket) + (1 if u > 0 else 0))
            if clause_cap is not None and len(g.clauses) + len(bucket) > clause_cap:
                raise ResourceLimitError(
                    f"more than {clause_cap} clauses stored while eliminating x{x}")
        for entry in dead:
            heapq.heappush(neg_heap, entry)
        if u > 0:
            discarded.append(key)
    if check_saturation:
        negs = [k for k in bucket if -x in k]
        for key in discarded:
            A = [l for l in key if l != x]
            if any(clashing(A, nk) is not None for nk in negs):
                raise AssertionError(f"discarded clause {key} is not saturated")
    step.resolvents = len(resolvents)
    if stats is not None:
        stats.steps.append(step)
    return g


def _clause_cap(cap: int | None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get("MAXRES_CLAUSE_CAP")
    return int(env) if env else DEFAULT_CLAUSE_CAP


def max_dp(f: Formula, order: str = "mindeg", *, given: Iterable[int] | None = None,
           clause_cap: int | None = None, stats: EliminationStats | None = None) -> int:
    """Optimal cost of ``f`` (or top if it has no model) by eliminating every variable.

    ``order`` picks the next variable: dynamic minimum degree, a static
    min-fill sequence, or ``given`` (ascending index unless a sequence is
    passed).  Raises ResourceLimitError when the clause cap is exceeded.
    """
    if order not in ORDERS:
        raise ValueError(f"unknown order {order!r}")
    cap = _clause_cap(clause_cap)
    stats = stats if stats is not None else EliminationStats()
    g = f.copy()
    g.changed_vars = set()
    simp = Simplifier(level=1, counts=stats.rules)
    simp.run(g)

    if order == "mindeg":
        heap = [(_degree(g, v), v) for v in g.variables()]
        heapq.heapify(heap)
        seq = None
    else:
        if order == "minfill":
            seq = min_fill_order(interaction_graph(g))
        else:
            seq = list(given) if given is not None else g.variables()
            seq += [v for v in g.variables() if v not in set(seq)]
        seq.reverse()
    g.changed_vars.clear()

    while g.lb < g.top and g.clauses:
        if seq is None:
            x = _pop_min_degree(g, heap)
        else:
            x = seq.pop()
            while x not in g.occ and -x not in g.occ:
                x = seq.pop()
        max_var_elim(g, x, inplace=True, stats=stats, clause_cap=cap)
        stats.peak_clauses = max(stats.peak_clauses, len(g.clauses))
        simp.run(g, full=False)
        if seq is None:
            for v in g.changed_vars:
                if v in g.occ or -v in g.occ:
                    heapq.heappush(heap, (_degree(g, v), v))
        g.changed_vars.clear()
    return min(g.lb, g.top)


def _degree(g: Formula, v: int) -> int:
    nb = set()
    for lit in (v, -v):
        for key in g.occ.get(lit, ()):
            nb.update(abs(l) for l in key)
    nb.discard(v)
    return len(nb)


def _pop_min_degree(g: Formula, heap: list) -> int:
    while True:
        d, v = heapq.heappop(heap)
        if v not in g.occ and -v not in g.occ:
            continue
        cur = _degree(g, v)
        if cur == d:
            return v
        heapq.heappush(heap, (cur, v))
