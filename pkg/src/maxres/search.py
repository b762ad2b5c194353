"""Depth-first branch and bound (Max-DPLL) with a prioritized simplification loop.

Inference levels:

1. mandatory-unit assignment, aggregation and hardening only
2. plus neighborhood resolution on clauses of arity <= 2
3. plus chain resolution
4. plus cycle resolution on variable triples
"""
from __future__ import annotations

import random
import sys
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import Formula
from .hyper import (build_implication_graph, chain_resolution, cycle_resolution,
                    detect_chain, dominating_unit_clause, find_cycle3,
                    find_dominating_unit, find_star, star_rule)
from .resolution import _neighborhood

HEURISTICS = ("jw", "index", "random")


@dataclass
class SolverConfig:
    level: int = 4
    star: bool = False
    duc: bool = False
    top: Optional[int] = None
    node_limit: Optional[int] = None
    time_limit: Optional[float] = None
    heuristic: str = "jw"
    seed: int = 0
    # called as on_node(before, after) with copies of the node formula
    # around simplification; for instrumentation only
    on_node: Optional[Callable[[Formula, Formula], None]] = None

    def __post_init__(self):
        if self.level not in (1, 2, 3, 4):
            raise ValueError(f"level must be 1..4, got {self.level}")
        if self.heuristic not in HEURISTICS:
            raise ValueError(f"unknown heuristic {self.heuristic!r}")


@dataclass
class SolveResult:
    """``optimum`` is the optimal cost, or ``top`` when there is no model.

    When ``status`` is ``"unknown"`` a limit was hit and ``optimum`` is only
    the best upper bound found.
    """
    optimum: int
    top: int
    status: str
    nodes: int = 0
    rules: Counter = field(default_factory=Counter)
    max_simplify_iterations: int = 0
    elapsed: float = 0.0

    @property
    def stats(self) -> dict[str, int | float]:
        d = {"nodes": self.nodes, "max_simplify_iterations": self.max_simplify_iterations}
        for rule in sorted(self.rules):
            d[f"rule_{rule}"] = self.rules[rule]
        d["time"] = round(self.elapsed, 6)
        return d


class SimplifyLimitError(RuntimeError):
    pass


class Simplifier:
    """Applies the enabled rules to a formula, in place, until quiescence.

    Rule priority: assignment of mandatory units, aggregation (done on every
    insertion), hardening, neighborhood resolution, chain resolution, cycle
    resolution, then the optional star and dominating-unit rules.  Rules are
    triggered from the formula's stream of touched clauses; the global
    patterns (chain, cycle, star, dominating unit) are searched again only
    after something changed.
    """

    def __init__(self, level: int = 4, star: bool = False, duc: bool = False,
                 counts: Counter | None = None, max_iterations: int | None = None):
        self.level = level
        self.star = star
        self.duc = duc
        self.counts = counts if counts is not None else Counter()
        self.max_iterations = max_iterations
        self.iterations = 0

    def run(self, f: Formula, full: bool = True) -> Formula:
        counts = self.counts
        level = self.level
        if full:
            f.touched.clear()
            units = [k for k in f.clauses if len(k) == 1]
            small = [k for k in f.clauses if len(k) <= 2]
            harden_all = True
        else:
            units, small = [], []
            harden_all = any(not k for k in f.touched)
        hard_pending: list = []
        stale = True
        lb_seen = f.lb
        cap = self.max_iterations
        it = 0
        while f.lb < f.top:
            it += 1
            if cap is not None and it > cap:
                raise SimplifyLimitError(f"simplify exceeded {cap} iterations")
            touched = f.touched
            if touched:
                stale = True
                for k in touched:
                    n = len(k)
                    if n == 1:
                        units.append(k)
                        if level >= 2:
                            small.append(k)
                    elif n == 2 and level >= 2:
                        small.append(k)
                    if n and not harden_all:
                        hard_pending.append(k)
                touched.clear()
            if f.lb != lb_seen:
                harden_all = True
                lb_seen = f.lb
            # mandatory unit clause: assign it
            lit = self._pop_hard_unit(f, units)
            if lit is not None:
                f.assign(lit)
                counts["assign"] += 1
                continue
            # hardening against the lower bound
            if self._harden(f, hard_pending, harden_all):
                harden_all = False
                continue
            harden_all = False
            if level >= 2 and self._neighborhood(f, small):
                continue
            if not stale:
                break
            if level >= 3:
                path = detect_chain(build_implication_graph(f))
                if path is not None:
                    chain_resolution(f, path, inplace=True)
                    counts["chain"] += 1
                    continue
            if level >= 4:
                cyc = find_cycle3(f)
                if cyc is not None:
                    cycle_resolution(f, cyc, inplace=True)
                    counts["cycle"] += 1
                    continue
            if self.star:
                key = find_star(f)
                if key is not None:
                    star_rule(f, key, inplace=True)
                    counts["star"] += 1
                    continue
            if self.duc:
                lit = find_dominating_unit(f)
                if lit is not None:
                    dominating_unit_clause(f, lit, inplace=True)
                    counts["duc"] += 1
                    continue
            stale = False
            if not f.touched:
                break
        if f.lb >= f.top:
            f.collapse()
        f.touched.clear()
        self.iterations = max(self.iterations, it)
        return f

    @staticmethod
    def _pop_hard_unit(f: Formula, units: list) -> int | None:
        top = f.top
        clauses = f.clauses
        while units:
            k = units.pop()
            if clauses.get(k, 0) >= top:
                return k[0]
        return None

    def _harden(self, f: Formula, pending: list, full: bool) -> bool:
        top, lb = f.top, f.lb
        if lb == 0:
            pending.clear()
            return False
        threshold = top - lb
        clauses = f.clauses
        if full:
            if f.max_soft < threshold:
                return False
            cands = [k for k, w in clauses.items() if threshold <= w < top]
        else:
            cands = [k for k in pending if threshold <= clauses.get(k, 0) < top]
        pending.clear()
        if not cands:
            return False
        for k in cands:
            f.set_weight(k, top)
        self.counts["harden"] += len(cands)
        return True

    def _neighborhood(self, f: Formula, small: list) -> bool:
        clauses = f.clauses
        while small:
            k = small.pop()
            if k not in clauses:
                continue
            if len(k) == 1:
                p = (-k[0],)
                if p in clauses:
                    _neighborhood(f, k, p, k[0])
                    self.counts["neighborhood"] += 1
                    return True
            else:
                a, b = k
                for p, lit in (((-a, b), a), ((a, -b), b)):
                    if p in clauses:
                        _neighborhood(f, k, p, lit)
                        self.counts["neighborhood"] += 1
                        return True
        return False


def simplify(f: Formula, level: int = 4, *, star: bool = False, duc: bool = False,
             counts: Counter | None = None, inplace: bool = False) -> Formula:
    """Simplify to a fixpoint of the rules enabled at ``level``."""
    g = f if inplace else f.copy()
    return Simplifier(level, star, duc, counts).run(g)


_JW = [2.0 ** -i for i in range(64)]


def select_literal(f: Formula, heuristic: str = "jw", rng: random.Random | None = None) -> int:
    """Branching literal: two-sided weighted Jeroslow-Wang by default.

    The variable with the largest combined score is chosen (lowest index on
    ties) and its higher-scoring phase is returned (positive on ties).
    """
    if not f.occ:
        raise ValueError("formula has no variables")
    if heuristic == "index":
        v = min(abs(l) for l in f.occ)
        return v if v in f.occ else -v
    if heuristic == "random":
        v = (rng or random).choice(f.variables())
        return v if (rng or random).random() < 0.5 else -v
    score: dict[int, float] = {}
    jw = _JW
    for key, w in f.clauses.items():
        n = len(key)
        s = w * (jw[n] if n < 64 else 2.0 ** -n)
        for l in key:
            score[l] = score.get(l, 0.0) + s
    best_v, best_s = 0, -1.0
    for v in sorted({abs(l) for l in score}):
        s = score.get(v, 0.0) + score.get(-v, 0.0)
        if s > best_s:
            best_v, best_s = v, s
    return best_v if score.get(best_v, 0.0) >= score.get(-best_v, 0.0) else -best_v


class _LimitReached(Exception):
    pass


class _Search:
    def __init__(self, cfg: SolverConfig):
        self.cfg = cfg
        self.simp = Simplifier(cfg.level, cfg.star, cfg.duc)
        self.nodes = 0
        self.best = None
        self.deadline = (time.monotonic() + cfg.time_limit) if cfg.time_limit else None
        self.rng = random.Random(cfg.seed)

    def node(self, f: Formula, top: int) -> int:
        cfg = self.cfg
        self.nodes += 1
        if cfg.node_limit is not None and self.nodes > cfg.node_limit:
            raise _LimitReached
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise _LimitReached
        before = f.copy() if cfg.on_node else None
        self.simp.run(f)
        if cfg.on_node:
            cfg.on_node(before, f.copy())
        if f.lb >= f.top or not f.clauses:
            return f.lb
        lit = select_literal(f, cfg.heuristic, self.rng)
        for branch in (lit, -lit):
            if f.lb >= top:     # includes top == 0: nothing cheaper exists
                break
            g = f.copy()
            g.set_top(top)
            g.assign(branch)
            top = min(top, self.node(g, top))
            if self.best is None or top < self.best:
                self.best = top
        return top


def max_dpll(f: Formula, config: SolverConfig | None = None) -> SolveResult:
    """Optimal cost of ``f`` (or its top when it has no model) by branch and bound."""
    cfg = config or SolverConfig()
    g = f.copy()
    if cfg.top is not None:
        g.set_top(cfg.top)
    search = _Search(cfg)
    need = len(g.variables()) + 100
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)
    t0 = time.perf_counter()
    try:
        opt = search.node(g, g.top)
        status = "optimum" if opt < g.top else "unsatisfiable"
    except _LimitReached:
        opt = search.best if search.best is not None else g.top
        status = "unknown"
    return SolveResult(optimum=opt, top=g.top, status=status, nodes=search.nodes,
                       rules=search.simp.counts,
                       max_simplify_iterations=search.simp.iterations,
                       elapsed=time.perf_counter() - t0)
