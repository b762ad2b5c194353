"""Weighted clauses, top-capped weight arithmetic and the basic equivalence rules.

Literals are non-zero ints in DIMACS convention (``3`` is x3, ``-3`` its
negation).  A clause is a tuple of literals sorted by variable index with no
repeated variable; the empty tuple is the empty clause.  Weights are naturals
in ``[0..top]`` and a clause whose weight equals ``top`` is mandatory.
"""
from __future__ import annotations

from typing import Iterable, Mapping

Clause = tuple[int, ...]


def oplus(a: int, b: int, top: int) -> int:
    """Capped sum: ``min(a + b, top)``."""
    s = a + b
    return top if s >= top else s


def ominus(u: int, w: int, top: int) -> int:
    """Capped difference for ``u >= w``; ``top`` is absorbing."""
    if u < w:
        raise ValueError(f"ominus needs u >= w, got {u} < {w}")
    if u >= top:
        return top
    return u - w


def make_clause(lits: Iterable[int]) -> Clause | None:
    """Canonical clause for a bag of literals, or None for a tautology."""
    s = set(lits)
    for l in s:
        if l == 0:
            raise ValueError("0 is not a literal")
        if -l in s:
            return None
    return tuple(sorted(s, key=abs))


def clause_order(c: Clause):
    """Sort key giving the canonical listing order of clauses."""
    return (len(c), tuple(abs(l) for l in c), tuple(l > 0 for l in c))


def falsified(c: Clause, assignment: Mapping[int, bool]) -> bool:
    for l in c:
        if assignment[abs(l)] == (l > 0):
            return False
    return True


class Formula:
    """A set of distinct weighted clauses with an upper bound ``top``.

    The weight of the empty clause is kept apart as ``lb`` (the lower bound).
    Clauses are stored in ``clauses`` (clause -> weight) and indexed by literal
    in ``occ``.  Every write appends the clause to ``touched`` so that rule
    engines can react to changes instead of rescanning.
    """

    __slots__ = ("top", "lb", "clauses", "occ", "touched", "declared_vars",
                 "max_soft", "changed_vars")

    def __init__(self, top: int, clauses: Iterable[tuple[Iterable[int], int]] = (),
                 lower_bound: int = 0, num_vars: int = 0):
        if top < 1:
            raise ValueError("top must be a positive natural")
        self.top = top
        self.lb = 0
        self.clauses: dict[Clause, int] = {}
        self.occ: dict[int, set[Clause]] = {}
        self.touched: list[Clause] = []
        self.declared_vars = num_vars
        # upper estimate of the largest soft weight ever stored; lets hardening
        # skip a full scan when lb + max_soft < top
        self.max_soft = 0
        self.changed_vars: set[int] | None = None
        for lits, w in clauses:
            self.add(lits, w)
        if lower_bound:
            self.add_key((), lower_bound)

    # -- storage primitives -------------------------------------------------

    def _store(self, key: Clause, w: int) -> None:
        """Set the weight of a canonical non-empty clause (0 removes it)."""
        old = self.clauses.get(key)
        if w <= 0:
            if old is not None:
                del self.clauses[key]
                occ = self.occ
                for l in key:
                    s = occ[l]
                    s.discard(key)
                    if not s:
                        del occ[l]
                if self.changed_vars is not None:
                    self.changed_vars.update(abs(l) for l in key)
            return
        if old is None:
            occ = self.occ
            for l in key:
                s = occ.get(l)
                if s is None:
                    occ[l] = {key}
                else:
                    s.add(key)
            if self.changed_vars is not None:
                self.changed_vars.update(abs(l) for l in key)
        elif old == w:
            return
        self.clauses[key] = w
        if w < self.top and w > self.max_soft:
            self.max_soft = w
        self.touched.append(key)

    def add_key(self, key: Clause, w: int) -> None:
        """Aggregate ``(key, w)`` into the formula; ``key`` must be canonical."""
        if w <= 0:
            return
        top = self.top
        if not key:
            nlb = oplus(self.lb, w, top)
            if nlb != self.lb:
                self.lb = nlb
                self.touched.append(())
            return
        old = self.clauses.get(key, 0)
        self._store(key, oplus(old, min(w, top), top))

    def add(self, lits: Iterable[int], w: int) -> None:
        """Add a weighted clause; tautologies and zero weights are dropped."""
        if w < 0:
            raise ValueError("negative weight")
        key = make_clause(lits)
        if key is None or w == 0:
            return
        self.add_key(key, w)

    def set_weight(self, key: Clause, w: int) -> None:
        if not key:
            self.lb = min(w, self.top)
            self.touched.append(())
            return
        self._store(key, min(w, self.top))

    def remove(self, key: Clause) -> int:
        w = self.clauses.get(key, 0)
        if w:
            self._store(key, 0)
        return w

    def weight(self, key: Clause) -> int:
        if not key:
            return self.lb
        return self.clauses.get(key, 0)

    def is_hard(self, key: Clause) -> bool:
        return self.weight(key) >= self.top

    # -- queries ---------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.clauses)

    def __contains__(self, key) -> bool:
        return key in self.clauses

    def __eq__(self, other) -> bool:
        if not isinstance(other, Formula):
            return NotImplemented
        return (self.top == other.top and self.lb == other.lb
                and self.clauses == other.clauses)

    def __repr__(self) -> str:
        parts = [f"({_fmt(c)},{'T' if w >= self.top else w})" for c, w in self.items()]
        if self.lb:
            parts.insert(0, f"([],{'T' if self.lb >= self.top else self.lb})")
        return f"Formula(top={self.top}, {{{', '.join(parts)}}})"

    @property
    def is_contradiction(self) -> bool:
        return self.lb >= self.top

    @property
    def num_vars(self) -> int:
        m = max((abs(l) for l in self.occ), default=0)
        return max(m, self.declared_vars)

    def variables(self) -> list[int]:
        return sorted({abs(l) for l in self.occ})

    def items(self) -> list[tuple[Clause, int]]:
        """Clauses with weights in canonical order (empty clause excluded)."""
        return sorted(self.clauses.items(), key=lambda kv: clause_order(kv[0]))

    def hard_clauses(self) -> list[Clause]:
        top = self.top
        return [c for c, w in self.clauses.items() if w >= top]

    def copy(self) -> "Formula":
        g = Formula.__new__(Formula)
        g.top = self.top
        g.lb = self.lb
        g.clauses = self.clauses.copy()
        g.occ = {l: s.copy() for l, s in self.occ.items()}
        g.touched = []
        g.declared_vars = self.declared_vars
        g.max_soft = self.max_soft
        g.changed_vars = None
        return g

    def set_top(self, top: int) -> None:
        """Change the upper bound; mandatory clauses stay mandatory."""
        old = self.top
        if top == old:
            return
        if top < 1:
            raise ValueError("top must be a positive natural")
        self.top = top
        if top < old:
            for key, w in list(self.clauses.items()):
                if w >= top:
                    self.clauses[key] = top
                    self.touched.append(key)
            if self.lb >= top:
                self.lb = top
            self.max_soft = min(self.max_soft, top - 1)
        else:
            for key, w in list(self.clauses.items()):
                if w >= old:
                    self.clauses[key] = top
                    self.touched.append(key)
            if self.lb >= old:
                self.lb = top

    # -- in-place rules used by the engines -----------------------------------

    def assign(self, lit: int) -> None:
        """Condition on ``lit`` being true (F[l])."""
        occ = self.occ
        for key in list(occ.get(lit, ())):
            self._store(key, 0)
        for key in list(occ.get(-lit, ())):
            w = self.clauses[key]
            self._store(key, 0)
            self.add_key(tuple(l for l in key if l != -lit), w)

    def collapse(self) -> None:
        """Absorb everything into (empty, top) once the bound is reached."""
        for key in list(self.clauses):
            self._store(key, 0)
        self.lb = self.top


def _fmt(c: Clause) -> str:
    return "v".join(str(l) for l in c) if c else "[]"


# -- functional rule API ------------------------------------------------------

def _target(f: Formula, inplace: bool) -> Formula:
    return f if inplace else f.copy()


def add_clause(f: Formula, lits: Iterable[int], w: int, *, inplace: bool = False) -> Formula:
    g = _target(f, inplace)
    g.add(lits, w)
    return g


def assign(f: Formula, lit: int, *, inplace: bool = False) -> Formula:
    g = _target(f, inplace)
    g.assign(lit)
    return g


def absorb(f: Formula, *, inplace: bool = False) -> Formula:
    """Remove every clause that contains a mandatory clause."""
    g = _target(f, inplace)
    if g.is_contradiction:
        g.collapse()
        return g
    for h in sorted(g.hard_clauses(), key=clause_order):
        if h not in g.clauses:
            continue
        hs = set(h)
        # every superset of h contains its first literal
        for key in list(g.occ.get(h[0], ())):
            if key != h and hs.issubset(key):
                g.remove(key)
    return g


def harden(f: Formula, *, inplace: bool = False) -> Formula:
    """Promote soft clauses whose violation already costs ``top``.

    A clause is hardened when the lower bound plus its weight reaches top, or
    when the lower bound plus the weights of its proper unit sub-clauses plus
    its own weight does (only binary clauses have such sub-clauses here).
    """
    g = _target(f, inplace)
    top, lb = g.top, g.lb
    for key, w in list(g.clauses.items()):
        if w >= top:
            continue
        total = oplus(lb, w, top)
        if total < top and len(key) == 2:
            for l in key:
                total = oplus(total, g.clauses.get((l,), 0), top)
        if total >= top:
            g.set_weight(key, top)
    return g


def pure_literal(f: Formula, *, inplace: bool = False) -> Formula:
    """Drop all clauses of variables that occur with a single polarity."""
    g = _target(f, inplace)
    queue = g.variables()
    while queue:
        nxt = set()
        for v in queue:
            pos, neg = g.occ.get(v), g.occ.get(-v)
            if pos and neg or not (pos or neg):
                continue
            for key in list(pos or neg):
                nxt.update(abs(l) for l in key if abs(l) != v)
                g.remove(key)
        queue = sorted(nxt)
    return g


def cost_of(f: Formula, assignment: Mapping[int, bool]) -> int:
    """Cost of a complete assignment: lb plus falsified weights, capped at top."""
    top = f.top
    total = f.lb
    for key, w in f.clauses.items():
        try:
            if falsified(key, assignment):
                total = oplus(total, w, top)
        except KeyError as e:
            raise ValueError(f"assignment misses variable {e.args[0]}") from None
    return total
