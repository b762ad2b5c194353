"""Text formats: weighted DIMACS (WCNF), plain CNF, DIMACS graphs, auctions and OPB export.

All readers are whitespace tolerant and report errors with 1-based line numbers.
"""
from __future__ import annotations

from .core import Formula
from .instances import AuctionInstance, Graph


class ParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        yield lineno, line


def _clause_lits(nums: list[int], nvars: int, lineno: int) -> list[int]:
    if not nums or nums[-1] != 0:
        raise ParseError("clause must end with 0", lineno)
    lits = nums[:-1]
    for l in lits:
        if l == 0:
            raise ParseError("0 inside a clause", lineno)
        if abs(l) > nvars:
            raise ParseError(f"literal {l} out of range 1..{nvars}", lineno)
    return lits


def parse_wcnf(text: str) -> Formula:
    """Read ``p wcnf <nvars> <nclauses> [<top>]`` followed by ``<w> <lits> 0`` lines.

    Lines starting with ``h`` are mandatory clauses.  Weights above top are
    clamped; without a top field it defaults to one plus the sum of weights.
    The clause count in the header is informative only.
    """
    header = None
    rows: list[tuple[list[int], int | None]] = []
    for lineno, line in _lines(text):
        tok = line.split()
        if tok[0] == "p":
            if header is not None:
                raise ParseError("duplicate header", lineno)
            if len(tok) not in (4, 5) or tok[1] != "wcnf":
                raise ParseError("expected 'p wcnf <nvars> <nclauses> [<top>]'", lineno)
            nums = _ints(tok[2:], lineno)
            if nums[0] < 0 or nums[1] < 0 or (len(nums) == 3 and nums[2] < 1):
                raise ParseError("invalid header values", lineno)
            header = nums
            continue
        if header is None:
            raise ParseError("clause before header", lineno)
        if tok[0] == "h":
            rows.append((_clause_lits(_ints(tok[1:], lineno), header[0], lineno), None))
            continue
        nums = _ints(tok, lineno)
        w = nums[0]
        if w <= 0:
            raise ParseError(f"clause weight must be positive, got {w}", lineno)
        rows.append((_clause_lits(nums[1:], header[0], lineno), w))
    if header is None:
        raise ParseError("missing 'p wcnf' header")
    if len(header) == 3:
        top = header[2]
    else:
        top = 1 + sum(w for _, w in rows if w is not None)
    f = Formula(top, num_vars=header[0])
    for lits, w in rows:
        f.add(lits, top if w is None else min(w, top))
    return f


def write_wcnf(f: Formula) -> str:
    """Canonical text: header with top, clauses in canonical order, the lower
    bound (if any) first as an empty clause line ``<lb> 0``."""
    items = f.items()
    lines = [f"p wcnf {f.num_vars} {len(items) + (1 if f.lb else 0)} {f.top}"]
    if f.lb:
        lines.append(f"{f.lb} 0")
    for key, w in items:
        lines.append(" ".join([str(w), *map(str, key), "0"]))
    return "\n".join(lines) + "\n"


def parse_cnf(text: str) -> tuple[int, list[list[int]]]:
    """Plain DIMACS CNF; clauses may span lines.  Returns ``(nvars, clauses)``."""
    nvars = None
    clauses: list[list[int]] = []
    cur: list[int] = []
    for lineno, line in _lines(text):
        tok = line.split()
        if tok[0] == "p":
            if len(tok) != 4 or tok[1] != "cnf":
                raise ParseError("expected 'p cnf <nvars> <nclauses>'", lineno)
            nvars = _ints(tok[2:3], lineno)[0]
            continue
        if nvars is None:
            raise ParseError("clause before header", lineno)
        for l in _ints(tok, lineno):
            if l == 0:
                clauses.append(cur)
                cur = []
            elif abs(l) > nvars:
                raise ParseError(f"literal {l} out of range 1..{nvars}", lineno)
            else:
                cur.append(l)
    if nvars is None:
        raise ParseError("missing 'p cnf' header")
    if cur:
        clauses.append(cur)
    return nvars, clauses


def parse_graph(text: str) -> Graph:
    """DIMACS graph: ``p edge <n> <m>`` then ``e <u> <v>`` lines."""
    n = None
    edges = set()
    for lineno, line in _lines(text):
        tok = line.split()
        if tok[0] == "p":
            if len(tok) != 4:
                raise ParseError("expected 'p edge <n> <m>'", lineno)
            n = _ints(tok[2:3], lineno)[0]
        elif tok[0] == "e":
            if n is None:
                raise ParseError("edge before header", lineno)
            if len(tok) != 3:
                raise ParseError("expected 'e <u> <v>'", lineno)
            u, v = _ints(tok[1:], lineno)
            if u == v or not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"invalid edge {u} {v}", lineno)
            edges.add((min(u, v), max(u, v)))
        else:
            raise ParseError(f"unexpected line {line!r}", lineno)
    if n is None:
        raise ParseError("missing 'p edge' header")
    return Graph(n, edges)


def write_graph(g: Graph) -> str:
    lines = [f"p edge {g.n} {len(g.edges)}"]
    lines += [f"e {u} {v}" for u, v in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def parse_auction(text: str) -> AuctionInstance:
    """Header ``<goods> <bids>`` then one ``<value> <g1> <g2> ...`` line per bid.

    Goods are numbered from 1 and values must be naturals (scale prices first).
    """
    header = None
    bids = []
    for lineno, line in _lines(text):
        nums = _ints(line.split(), lineno)
        if header is None:
            if len(nums) != 2 or nums[0] < 0 or nums[1] < 0:
                raise ParseError("expected '<goods> <bids>' header", lineno)
            header = nums
            continue
        value, goods = nums[0], nums[1:]
        if value < 1:
            raise ParseError(f"bid value must be >= 1, got {value}", lineno)
        for g in goods:
            if not 1 <= g <= header[0]:
                raise ParseError(f"good {g} out of range 1..{header[0]}", lineno)
        bids.append((value, frozenset(goods)))
    if header is None:
        raise ParseError("missing auction header")
    if len(bids) != header[1]:
        raise ParseError(f"header announces {header[1]} bids, found {len(bids)}")
    return AuctionInstance(header[0], bids)


def write_auction(a: AuctionInstance) -> str:
    lines = [f"{a.goods} {len(a.bids)}"]
    lines += [" ".join(map(str, [v, *sorted(goods)])) for v, goods in a.bids]
    return "\n".join(lines) + "\n"


def _term(coef: int, lit: int) -> str:
    return f"{coef:+d} {'~' if lit < 0 else ''}x{abs(lit)}"


def export_opb(f: Formula) -> str:
    """Linear pseudo-Boolean encoding.

    Mandatory clauses become ``sum >= 1`` constraints.  A soft clause of
    arity >= 2 gets a fresh relaxation variable ``r`` (numbered after the
    formula's variables) and the constraint ``sum + r >= 1``; ``u * r`` goes
    to the objective.  A soft unit ``(l, u)`` costs ``u`` when ``l`` is false,
    so it contributes ``u`` times the complement of ``l`` to the objective.
    Models must cost less than top, so when the soft weights can reach
    ``top - lb`` the objective is also bounded by ``top - lb - 1``.
    The lower bound is a constant and is reported in a comment only.
    """
    top = f.top
    n = f.num_vars
    obj: list[tuple[int, int]] = []
    cons: list[str] = []
    fresh = n
    for key, w in f.items():
        terms = [_term(1, l) for l in key]
        if w >= top:
            cons.append(" ".join(terms) + " >= 1 ;")
        elif len(key) == 1:
            obj.append((w, -key[0]))
        else:
            fresh += 1
            cons.append(" ".join(terms + [_term(1, fresh)]) + " >= 1 ;")
            obj.append((w, fresh))
    budget = top - f.lb - 1
    if budget < 0:
        fresh = max(fresh, 1)
        cons.append("+1 x1 >= 2 ;")          # lower bound already reaches top
    elif sum(w for w, _ in obj) > budget:
        cons.append(" ".join(_term(-w, l) for w, l in obj) + f" >= {-budget} ;")
    head = [f"* #variable= {fresh} #constraint= {len(cons)}",
            f"* lower bound {f.lb}, top {top}"]
    objective = "min: " + " ".join(_term(w, l) for w, l in obj) + " ;" if obj else "min: ;"
    return "\n".join(head + [objective] + cons) + "\n"
