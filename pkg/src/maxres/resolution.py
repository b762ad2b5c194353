"""Weighted resolution (Max-RES) and clausal recovery of negated clauses."""
from __future__ import annotations

from typing import Iterable

from .core import Clause, Formula, make_clause, ominus

WeightedClause = tuple[Clause, int]


def cnf_recover(prefix: Iterable[int], negated: Iterable[int], u: int) -> list[WeightedClause]:
    """Clausal form of ``(A v not(l v B), u)``, exponential in ``|l v B|``.

    ``prefix`` is A and ``negated`` is the clause ``l v B``; literals of the
    negated clause are peeled in ascending variable order.
    """
    A = make_clause(prefix)
    neg = make_clause(negated)
    if A is None or not neg or u <= 0:
        return []
    out: dict[Clause, int] = {}
    _recover(list(A), list(neg), u, out)
    return list(out.items())


def _recover(A: list[int], neg: list[int], u: int, out: dict) -> None:
    l, B = neg[0], neg[1:]
    if not B:
        _emit(A + [-l], u, out)
        return
    _emit(A + [-l] + B, u, out)
    for lit in (-l, l):
        pre = make_clause(A + [lit])
        if pre is not None:
            _recover(list(pre), B, u, out)


def _emit(lits: list[int], u: int, out: dict) -> None:
    c = make_clause(lits)
    if c is not None:
        out[c] = out.get(c, 0) + u


def cnf_linear(prefix: Iterable[int], negated: Iterable[int], u: int) -> list[WeightedClause]:
    """Clausal form of ``(A v not(l v B), u)`` using ``|l v B|`` clauses."""
    A = make_clause(prefix)
    neg = make_clause(negated)
    if A is None or not neg or u <= 0:
        return []
    out: list[WeightedClause] = []
    A = list(A)
    for i, l in enumerate(neg):
        c = make_clause(A + [-l] + list(neg[i + 1:]))
        if c is not None:
            out.append((c, u))
    return out


def clashing_variable(c1: Clause, c2: Clause) -> int | None:
    """The variable occurring with opposite signs, if exactly one does."""
    s2 = set(c2)
    clash = [abs(l) for l in c1 if -l in s2]
    return clash[0] if len(clash) == 1 else None


def absorbed(f: Formula, c: Clause) -> bool:
    """True if some mandatory clause of ``f`` is a subset of ``c``."""
    if f.lb >= f.top:
        return True
    top = f.top
    clauses = f.clauses
    occ = f.occ
    n = len(c)
    scan = sum(len(occ.get(l, ())) for l in c)
    if n < 20 and (1 << n) <= scan:
        for mask in range(1, 1 << n):
            sub = tuple(c[i] for i in range(n) if mask >> i & 1)
            if clauses.get(sub, 0) >= top:
                return True
        return False
    cs = set(c)
    for l in c:
        for key in occ.get(l, ()):
            if clauses[key] >= top and cs.issuperset(key):
                return True
    return False

def max_res(f: Formula, c1: Iterable[int], c2: Iterable[int], *, inplace: bool = False) -> Formula:
    """Replace two clashing clauses by their resolvent, posterior and compensation clauses.

    Zero-weight, tautological and absorbed right-hand clauses are omitted
    eagerly; compensation clauses are put in clausal form with ``cnf_linear``.
    """
    k1, k2 = make_clause(c1), make_clause(c2)
    if k1 not in f.clauses or k2 not in f.clauses:
        raise ValueError("both clauses must belong to the formula")
    x = clashing_variable(k1, k2)
    if x is None:
        raise ValueError(f"{k1} and {k2} do not clash on exactly one variable")
    if x not in k1:
        k1, k2 = k2, k1
    A = [l for l in k1 if l != x]
    B = [l for l in k2 if l != -x]
    resolvent = make_clause(A + B)
    if absorbed(f, resolvent):
        raise ValueError("resolvent is absorbed; the clauses do not clash")

    g = f if inplace else f.copy()
    top = g.top
    u, w = g.remove(k1), g.remove(k2)
    m = min(u, w)
    sA, sB = set(A), set(B)
    g.add_key(resolvent, m)
    if not (sB <= sA and m >= top):
        g.add_key(k1, ominus(u, m, top))
    if not (sA <= sB and m >= top):
        g.add_key(k2, ominus(w, m, top))
    if not (sB <= sA or u >= top):
        for c, cw in cnf_linear([x] + A, B, m):
            g.add_key(c, cw)
    if not (sA <= sB or w >= top):
        for c, cw in cnf_linear([-x] + B, A, m):
            g.add_key(c, cw)
    return g


def neighborhood_res(f: Formula, c1: Iterable[int], c2: Iterable[int], *,
                     inplace: bool = False) -> Formula:
    """``{(l v A,u), (-l v A,w)}`` with ``w <= u`` becomes ``{(A,w), (l v A, u - w)}``."""
    k1, k2 = make_clause(c1), make_clause(c2)
    if k1 not in f.clauses or k2 not in f.clauses:
        raise ValueError("both clauses must belong to the formula")
    diff = [l for l in k1 if l not in k2]
    if len(k1) != len(k2) or len(diff) != 1 or -diff[0] not in k2:
        raise ValueError(f"{k1} and {k2} are not an almost-common pair")
    g = f if inplace else f.copy()
    _neighborhood(g, k1, k2, diff[0])
    return g


def _neighborhood(g: Formula, k1: Clause, k2: Clause, lit: int) -> None:
    u, w = g.clauses[k1], g.clauses[k2]
    if w > u:
        k1, k2, u, w = k2, k1, w, u
    g.remove(k1)
    g.remove(k2)
    g.add_key(tuple(l for l in k1 if abs(l) != abs(lit)), w)
    g.add_key(k1, ominus(u, w, g.top))
