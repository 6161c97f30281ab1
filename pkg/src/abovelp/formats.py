"""Text formats read and written by the command line tool.

Graph (DIMACS, 1-indexed)::

    c comment
    p edge <n> <m>
    e <u> <v>            one line per edge, exactly m of them
    w <v> <weight>       optional, default weight 1
    t <v>                optional, terminal for multiway cut

CNF (DIMACS)::

    p cnf <nvars> <nclauses>
    <lit> <lit> ... 0    clauses may span lines

BIP2 (variables 1-indexed; ``j`` is 0 when ``b`` is 0)::

    # comment
    bip2 <nvars> <ncons>
    v <id> <weight> <B|N>
    c <a> <i> <b> <j> <rhs> <d|H>     H marks a hard constraint
"""

from __future__ import annotations

from typing import Optional

from .bip2 import Bip2Instance, InfeasibleInstanceError


class ParseError(ValueError):
    def __init__(self, line: int, col: int, msg: str):
        super().__init__(f"line {line}, col {col}: {msg}")
        self.line = line
        self.col = col


def _tokens(text: str):
    """Yield (line_no, [(col, token), ...]) for non-blank lines."""
    for ln, raw in enumerate(text.splitlines(), start=1):
        toks = []
        col = 0
        for part in raw.split():
            col = raw.index(part, col)
            toks.append((col + 1, part))
            col += len(part)
        if toks:
            yield ln, toks


def _int(ln, tok, what, lo=None):
    col, s = tok
    try:
        val = int(s)
    except ValueError:
        raise ParseError(ln, col, f"expected integer {what}, got {s!r}") from None
    if lo is not None and val < lo:
        raise ParseError(ln, col, f"{what} must be at least {lo}")
    return val


def _arity(ln, toks, k):
    if len(toks) != k:
        col = toks[min(len(toks), k) - 1][0] if toks else 1
        raise ParseError(ln, col, f"expected {k} fields, got {len(toks)}")


def parse_graph(text: str):
    """Returns ``(n, edges, weights, terminals)`` with 0-based vertex ids."""
    n = m = None
    edges, seen = [], set()
    weights: list[int] = []
    terminals: list[int] = []
    last = 1
    for ln, toks in _tokens(text):
        last = ln
        kind = toks[0][1]
        if kind == "c":
            continue
        if kind == "p":
            _arity(ln, toks, 4)
            if n is not None:
                raise ParseError(ln, 1, "second problem line")
            if toks[1][1] not in ("edge", "col"):
                raise ParseError(ln, toks[1][0], f"unknown problem type {toks[1][1]!r}")
            n = _int(ln, toks[2], "vertex count", 0)
            m = _int(ln, toks[3], "edge count", 0)
            weights = [1] * n
            continue
        if n is None:
            raise ParseError(ln, 1, "data before the problem line")

        def vertex(tok):
            v = _int(ln, tok, "vertex")
            if not 1 <= v <= n:
                raise ParseError(ln, tok[0], f"vertex {v} out of range 1..{n}")
            return v - 1

        if kind == "e":
            _arity(ln, toks, 3)
            u, v = vertex(toks[1]), vertex(toks[2])
            if u == v:
                raise ParseError(ln, toks[2][0], "self-loop")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ParseError(ln, toks[1][0], f"duplicate edge {u + 1} {v + 1}")
            seen.add(key)
            edges.append((u, v))
        elif kind == "w":
            _arity(ln, toks, 3)
            weights[vertex(toks[1])] = _int(ln, toks[2], "weight", 0)
        elif kind == "t":
            _arity(ln, toks, 2)
            terminals.append(vertex(toks[1]))
        else:
            raise ParseError(ln, toks[0][0], f"unknown line type {kind!r}")
    if n is None:
        raise ParseError(last, 1, "missing problem line")
    if len(edges) != m:
        raise ParseError(last, 1, f"problem line announces {m} edges, found {len(edges)}")
    return n, edges, weights, sorted(set(terminals))


def parse_cnf(text: str, max_len: Optional[int] = None):
    """Returns ``(nvars, clauses)`` with DIMACS literals."""
    nvars = ncl = None
    clauses, cur = [], []
    last = 1
    for ln, toks in _tokens(text):
        last = ln
        if toks[0][1] == "c":
            continue
        if toks[0][1] == "p":
            _arity(ln, toks, 4)
            if toks[1][1] != "cnf":
                raise ParseError(ln, toks[1][0], "expected 'p cnf'")
            nvars = _int(ln, toks[2], "variable count", 0)
            ncl = _int(ln, toks[3], "clause count", 0)
            continue
        if nvars is None:
            raise ParseError(ln, 1, "data before the problem line")
        for tok in toks:
            lit = _int(ln, tok, "literal")
            if lit == 0:
                if not cur:
                    raise ParseError(ln, tok[0], "empty clause")
                if max_len is not None and len(cur) != max_len:
                    raise ParseError(ln, tok[0], f"clause has {len(cur)} literals, expected {max_len}")
                clauses.append(cur)
                cur = []
            elif abs(lit) > nvars:
                raise ParseError(ln, tok[0], f"variable {abs(lit)} out of range")
            else:
                cur.append(lit)
    if nvars is None:
        raise ParseError(last, 1, "missing problem line")
    if cur:
        raise ParseError(last, 1, "last clause is not terminated by 0")
    if len(clauses) != ncl:
        raise ParseError(last, 1, f"problem line announces {ncl} clauses, found {len(clauses)}")
    return nvars, clauses


def parse_bip2(text: str) -> Bip2Instance:
    header = None
    weights: dict[int, tuple[int, bool]] = {}
    rows = []
    last = 1
    for ln, toks in _tokens(text):
        last = ln
        kind = toks[0][1]
        if kind.startswith("#"):
            continue
        if kind == "bip2":
            _arity(ln, toks, 3)
            header = (_int(ln, toks[1], "variable count", 0), _int(ln, toks[2], "constraint count", 0))
            continue
        if header is None:
            raise ParseError(ln, 1, "data before the bip2 header")
        nv = header[0]
        if kind == "v":
            _arity(ln, toks, 4)
            vid = _int(ln, toks[1], "variable id", 1)
            if vid > nv:
                raise ParseError(ln, toks[1][0], f"variable {vid} out of range")
            if vid in weights:
                raise ParseError(ln, toks[1][0], f"variable {vid} declared twice")
            dom = toks[3][1]
            if dom not in ("B", "N"):
                raise ParseError(ln, toks[3][0], "domain must be B or N")
            weights[vid] = (_int(ln, toks[2], "weight", 0), dom == "B")
        elif kind == "c":
            _arity(ln, toks, 7)
            vals = []
            for k, what in ((1, "a"), (2, "i"), (3, "b"), (4, "j"), (5, "rhs")):
                vals.append(_int(ln, toks[k], what))
            a, i, b, j, c = vals
            for coef, tok in ((a, toks[1]), (b, toks[3])):
                if coef not in (-1, 0, 1):
                    raise ParseError(ln, tok[0], "coefficient must be -1, 0 or 1")
            for coef, var, tok in ((a, i, toks[2]), (b, j, toks[4])):
                if coef and not 1 <= var <= nv:
                    raise ParseError(ln, tok[0], f"variable {var} out of range")
                if not coef and var != 0:
                    raise ParseError(ln, tok[0], "variable id must be 0 when its coefficient is 0")
            if a and b and i == j:
                raise ParseError(ln, toks[4][0], "both slots use the same variable")
            d = None if toks[6][1] == "H" else _int(ln, toks[6], "independent weight", 0)
            rows.append((ln, (a, i - 1, b, j - 1, c, d)))
        else:
            raise ParseError(ln, toks[0][0], f"unknown line type {kind!r}")
    if header is None:
        raise ParseError(last, 1, "missing bip2 header")
    nv, nc = header
    if len(weights) != nv:
        missing = min(set(range(1, nv + 1)) - set(weights))
        raise ParseError(last, 1, f"variable {missing} is not declared")
    if len(rows) != nc:
        raise ParseError(last, 1, f"header announces {nc} constraints, found {len(rows)}")
    inst = Bip2Instance([weights[v][0] for v in range(1, nv + 1)], [weights[v][1] for v in range(1, nv + 1)])
    for ln, row in rows:
        try:
            inst.add(*row)
        except InfeasibleInstanceError as exc:
            raise ParseError(ln, 1, str(exc)) from None
    return inst


def format_graph(n: int, edges, weights=None, terminals=()) -> str:
    out = [f"p edge {n} {len(edges)}"]
    out += [f"e {u + 1} {v + 1}" for u, v in edges]
    if weights is not None:
        out += [f"w {v + 1} {w}" for v, w in enumerate(weights) if w != 1]
    out += [f"t {t + 1}" for t in terminals]
    return "\n".join(out) + "\n"


def format_cnf(nvars: int, clauses) -> str:
    out = [f"p cnf {nvars} {len(clauses)}"]
    out += [" ".join(str(l) for l in cl) + " 0" for cl in clauses]
    return "\n".join(out) + "\n"


def format_bip2(inst: Bip2Instance) -> str:
    if not inst.is_concrete():
        raise ValueError("only concrete instances can be written")
    if inst.offset:
        raise ValueError("constant objective offsets have no text form")
    out = [f"bip2 {inst.n} {len(inst.cons)}"]
    out += [f"v {i + 1} {w.base} {'B' if b else 'N'}" for i, (w, b) in enumerate(zip(inst.weights, inst.binary))]
    for con in inst.cons:
        d = "H" if con.hard else str(con.d.base)
        j = con.j + 1 if con.b else 0
        out.append(f"c {con.a} {con.i + 1} {con.b} {j} {con.c} {d}")
    return "\n".join(out) + "\n"
