"""Problem encoders and seeded random generators."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .core import Formula


@dataclass
class Graph:
    n: int
    edges: set[tuple[int, int]] = field(default_factory=set)

    def __post_init__(self):
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self loop on vertex {u}")
            u, v = min(u, v), max(u, v)
            if u < 1 or v > self.n:
                raise ValueError(f"edge ({u},{v}) out of range 1..{self.n}")
            norm.add((u, v))
        self.edges = norm

    def complement(self) -> "Graph":
        all_pairs = set(combinations(range(1, self.n + 1), 2))
        return Graph(self.n, all_pairs - self.edges)


@dataclass
class AuctionInstance:
    goods: int
    bids: list[tuple[int, frozenset[int]]] = field(default_factory=list)

    def __post_init__(self):
        bids = []
        for value, goods in self.bids:
            goods = frozenset(goods)
            if value < 1:
                raise ValueError("bid values must be >= 1")
            if any(g < 1 or g > self.goods for g in goods):
                raise ValueError(f"bid requests a good outside 1..{self.goods}")
            bids.append((value, goods))
        self.bids = bids

    def conflicts(self) -> list[tuple[int, int]]:
        out = []
        for i, j in combinations(range(len(self.bids)), 2):
            if self.bids[i][1] & self.bids[j][1]:
                out.append((i + 1, j + 1))
        return out


def encode_vertex_cover(g: Graph, top: int | None = None, clique: bool = False) -> Formula:
    """Minimum vertex cover; with ``clique`` the complement graph is covered,
    so ``n - optimum`` is the maximum clique size."""
    if clique:
        g = g.complement()
    f = Formula(top if top is not None else g.n + 1, num_vars=g.n)
    for i in range(1, g.n + 1):
        f.add((-i,), 1)
    for u, v in sorted(g.edges):
        f.add((u, v), f.top)
    return f


def encode_max_cut(g: Graph) -> Formula:
    """Max cut; the cut size of an assignment is ``|E| - cost``."""
    f = Formula(2 * len(g.edges) + 1, num_vars=g.n)
    for u, v in sorted(g.edges):
        f.add((u, v), 1)
        f.add((-u, -v), 1)
    return f


def encode_max_one(clauses: Iterable[Sequence[int]], n: int | None = None) -> Formula:
    """Max-one: hard input clauses plus ``(x_i, 1)`` per variable.

    The optimum is ``n - max ones`` when the input is satisfiable, else top.
    """
    clauses = [tuple(c) for c in clauses]
    n = n if n is not None else max((abs(l) for c in clauses for l in c), default=0)
    f = Formula(n + 1, num_vars=n)
    for c in clauses:
        f.add(c, f.top)
    for i in range(1, n + 1):
        f.add((i,), 1)
    return f


def encode_auction(a: AuctionInstance) -> Formula:
    """Winner determination; revenue is ``sum(values) - cost``."""
    total = sum(v for v, _ in a.bids)
    f = Formula(total + 1, num_vars=len(a.bids))
    for i, (value, _) in enumerate(a.bids, start=1):
        f.add((i,), value)
    for i, j in a.conflicts():
        f.add((-i, -j), f.top)
    return f


def gen_random_ksat(k: int, n: int, m: int, seed: int) -> Formula:
    """``m`` clauses over ``k`` distinct uniform variables with fair-coin signs.

    Repeated clauses are merged into one clause whose weight counts them.
    """
    return gen_random_wcnf(k, n, m, seed)


def gen_random_wcnf(k: int, n: int, m: int, seed: int, max_weight: int = 1,
                    hard_fraction: float = 0.0, top: int | None = None) -> Formula:
    """Random k-CNF with weights uniform in ``1..max_weight``; a
    ``hard_fraction`` of the clauses is made mandatory."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if m < 0 or max_weight < 1 or not 0.0 <= hard_fraction <= 1.0:
        raise ValueError("invalid generator parameters")
    rng = random.Random(seed)
    drawn = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), k)
        lits = tuple(v if rng.random() < 0.5 else -v for v in vs)
        hard = hard_fraction > 0 and rng.random() < hard_fraction
        w = rng.randint(1, max_weight) if max_weight > 1 else 1
        drawn.append((lits, None if hard else w))
    soft_total = sum(w for _, w in drawn if w is not None)
    f = Formula(top if top is not None else soft_total + 1, num_vars=n)
    for lits, w in drawn:
        f.add(lits, f.top if w is None else w)
    return f


def gen_random_graph(n: int, e: int, seed: int) -> Graph:
    """``e`` distinct edges drawn uniformly among the ``n(n-1)/2`` pairs."""
    if n < 0 or e < 0 or e > n * (n - 1) // 2:
        raise ValueError(f"cannot place {e} edges on {n} vertices")
    rng = random.Random(seed)
    pairs = list(combinations(range(1, n + 1), 2))
    return Graph(n, set(rng.sample(pairs, e)))


def gen_random_auction(bids: int, goods: int, seed: int, max_goods: int = 3,
                       max_value: int = 20) -> AuctionInstance:
    rng = random.Random(seed)
    out = []
    for _ in range(bids):
        size = rng.randint(1, min(max_goods, goods))
        out.append((rng.randint(1, max_value), frozenset(rng.sample(range(1, goods + 1), size))))
    return AuctionInstance(goods, out)


def gen_path_formula(n: int, seed: int, per_edge: int = 2, max_weight: int = 5) -> Formula:
    """Random soft clauses whose interaction graph is the path x1 - x2 - ... - xn."""
    if n < 2:
        raise ValueError("a path needs at least two variables")
    rng = random.Random(seed)
    drawn = []
    for i in range(1, n):
        for _ in range(per_edge):
            drawn.append(((i if rng.random() < 0.5 else -i,
                           i + 1 if rng.random() < 0.5 else -(i + 1)),
                          rng.randint(1, max_weight)))
    for i in range(1, n + 1):
        if rng.random() < 0.3:
            drawn.append(((i if rng.random() < 0.5 else -i,), rng.randint(1, max_weight)))
    f = Formula(sum(w for _, w in drawn) + 1, num_vars=n)
    for lits, w in drawn:
        f.add(lits, w)
    return f
