"""Encoders from graph and satisfiability problems into binary BIP2.

Every problem class has ``encode() -> (Bip2Instance, ctx)``,
``decode(x, ctx) -> ProblemSolution`` and ``verify(sol) -> VerifyReport``.
Verification never touches the solver: it recomputes feasibility and the
objective from the problem definition alone.

Literals are signed 1-based ints as in DIMACS CNF: ``3`` is variable 2,
``-3`` its negation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from .bip2 import Bip2Instance, InfeasibleInstanceError, LpPair, solve_bip2, solve_bip2_auto


@dataclass
class ProblemSolution:
    kind: str
    value: object  # sorted vertex list, edge list or 0/1 assignment
    objective: int


@dataclass
class VerifyReport:
    ok: bool
    objective: int
    violations: list[str] = field(default_factory=list)


class _Builder:
    """Pseudo-boolean objective over binary variables, lowered to BIP2 rows."""

    def __init__(self):
        self.weights: list[int] = []
        self.rows: list[tuple] = []
        self.offset = 0

    def var(self, weight: int = 0) -> int:
        self.weights.append(0)
        self.linear(len(self.weights) - 1, weight)
        return len(self.weights) - 1

    def linear(self, v: int, coef: int) -> None:
        self.weights[v] += coef

    def forbid(self, u: int, val_u: int, v: int, val_v: int, weight: Optional[int]) -> None:
        """Charge ``weight`` (None: forbid) when ``x_u == val_u and x_v == val_v``."""
        if weight == 0:
            return
        a = -1 if val_u else 1
        b = -1 if val_v else 1
        self.rows.append((a, u, b, v, 1 - (a < 0) - (b < 0), weight))

    def forbid_one(self, v: int, val: int, weight: Optional[int]) -> None:
        if weight == 0:
            return
        a = -1 if val else 1
        self.rows.append((a, v, 0, -1, 1 - (a < 0), weight))

    def clause(self, lits: Sequence[tuple[int, bool]], weight: Optional[int]) -> bool:
        """Row for a clause of one or two literals ``(var, positive)``; False if tautological."""
        lits = list(dict.fromkeys(lits))
        if len(lits) == 2 and lits[0][0] == lits[1][0]:
            return False
        if len(lits) == 1:
            v, pos = lits[0]
            self.forbid_one(v, 0 if pos else 1, weight)
        else:
            (u, pu), (v, pv) = lits
            self.forbid(u, 0 if pu else 1, v, 0 if pv else 1, weight)
        return True

    def table(self, u: int, v: int, t: Sequence[int]) -> None:
        """Add cost ``t[2*x_u + x_v]`` for an arbitrary 2x2 table."""
        t00, t01, t10, t11 = t
        self.offset += t00
        self.linear(u, t10 - t00)
        self.linear(v, t01 - t00)
        q = t11 - t10 - t01 + t00
        if q >= 0:
            self.forbid(u, 1, v, 1, q)
        else:
            # q*x_u*x_v = q*x_u - q*[x_u = 1, x_v = 0]
            self.linear(u, q)
            self.forbid(u, 1, v, 0, -q)

    def build(self) -> Bip2Instance:
        weights = []
        extra = []
        for v, w in enumerate(self.weights):
            if w >= 0:
                weights.append(w)
            else:
                # w*x = |w|*(1 - x) - |w|
                weights.append(0)
                extra.append((1, v, 0, -1, 1, -w))
                self.offset += w
        inst = Bip2Instance(weights, [True] * len(weights), [], self.offset)
        for row in self.rows + extra:
            inst.add(*row)
        return inst


def _check_graph(n: int, edges, directed: bool = False) -> list[tuple[int, int]]:
    seen = set()
    out = []
    for u, v in edges:
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge {(u, v)} out of range")
        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in seen:
            raise ValueError(f"duplicate edge {key}")
        seen.add(key)
        out.append((u, v))
    return out


def _weights(n, weights):
    if weights is None:
        return [1] * n
    weights = [int(w) for w in weights]
    if len(weights) != n or any(w < 0 for w in weights):
        raise ValueError("need one nonnegative weight per element")
    return weights


def _two_colorable(n: int, edges, removed=()) -> bool:
    gone = set(removed)
    adj = [[] for _ in range(n)]
    for u, v in edges:
        if u not in gone and v not in gone:
            adj[u].append(v)
            adj[v].append(u)
    color = [-1] * n
    for s in range(n):
        if s in gone or color[s] != -1:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if color[v] == -1:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return False
    return True


def _lit_value(lit: int, assignment) -> bool:
    return bool(assignment[abs(lit) - 1]) == (lit > 0)


def _check_clauses(nvars, clauses, max_len=None):
    out = []
    for cl in clauses:
        cl = [int(l) for l in cl]
        if not cl or any(l == 0 or abs(l) > nvars for l in cl):
            raise ValueError(f"bad clause {cl}")
        if max_len is not None and len(cl) > max_len:
            raise ValueError(f"clause {cl} has more than {max_len} literals")
        out.append(cl)
    return out


def _bits(x, n):
    return [int(v) for v in x[:n]]


# -- first-class problems ----------------------------------------------------

@dataclass
class VertexCoverProblem:
    n: int
    edges: list
    weights: Optional[list] = None
    kind = "vc"

    def __post_init__(self):
        self.edges = _check_graph(self.n, self.edges)
        self.weights = _weights(self.n, self.weights)

    def encode(self):
        inst = Bip2Instance(list(self.weights), [True] * self.n)
        for u, v in self.edges:
            inst.add(1, u, 1, v, 1)
        return inst, None

    def decode(self, x, ctx=None) -> ProblemSolution:
        cover = [v for v in range(self.n) if x[v]]
        return ProblemSolution(self.kind, cover, sum(self.weights[v] for v in cover))

    def verify(self, sol: ProblemSolution) -> VerifyReport:
        chosen = set(sol.value)
        bad = [f"edge ({u},{v}) uncovered" for u, v in self.edges if u not in chosen and v not in chosen]
        return _report(bad, sum(self.weights[v] for v in chosen if 0 <= v < self.n), sol)


@dataclass
class OddCycleTransversal:
    n: int
    edges: list
    weights: Optional[list] = None
    kind = "oct"

    def __post_init__(self):
        self.edges = _check_graph(self.n, self.edges)
        self.weights = _weights(self.n, self.weights)

    def encode(self):
        # variables: l_v (index v), r_v (index n + v); the deletion indicator is
        # the independent variable of the row l_v + r_v + x_v >= 1
        n = self.n
        inst = Bip2Instance([0] * (2 * n), [True] * (2 * n))
        for v in range(n):
            inst.add(1, v, 1, n + v, 1, self.weights[v])
        for u, v in self.edges:
            inst.add(-1, u, -1, v, -1)
            inst.add(-1, n + u, -1, n + v, -1)
        return inst, None

    def decode(self, x, ctx=None) -> ProblemSolution:
        n = self.n
        cut = [v for v in range(n) if x[v] + x[n + v] < 1]
        return ProblemSolution(self.kind, cut, sum(self.weights[v] for v in cut))

    def verify(self, sol: ProblemSolution) -> VerifyReport:
        bad = []
        if not _two_colorable(self.n, self.edges, sol.value):
            bad.append("an odd cycle remains after removal")
        return _report(bad, sum(self.weights[v] for v in set(sol.value) if 0 <= v < self.n), sol)


@dataclass
class Almost2Sat:
    nvars: int
    clauses: list
    weights: Optional[list] = None
    kind = "a2sat"

    def __post_init__(self):
        self.clauses = _check_clauses(self.nvars, self.clauses, 2)
        self.weights = _weights(len(self.clauses), self.weights)

    def encode(self):
        b = _Builder()
        for _ in range(self.nvars):
            b.var()
        for cl, w in zip(self.clauses, self.weights):
            b.clause([(abs(l) - 1, l > 0) for l in cl], w)
        return b.build(), None

    def decode(self, x, ctx=None) -> ProblemSolution:
        assign = _bits(x, self.nvars)
        return ProblemSolution(self.kind, assign, self._cost(assign))

    def _cost(self, assign) -> int:
        return sum(w for cl, w in zip(self.clauses, self.weights) if not any(_lit_value(l, assign) for l in cl))

    def verify(self, sol: ProblemSolution) -> VerifyReport:
        if len(sol.value) != self.nvars:
            return _report([f"assignment has {len(sol.value)} values, expected {self.nvars}"], 0, sol)
        return _report([], self._cost(sol.value), sol)


# -- further problems ----------------------------------------------------------

@dataclass
class EdgeBipartization:
    n: int
    edges: list
    weights: Optional[list] = None  # per edge
    kind = "edge-bip"

    def __post_init__(self):
        self.edges = _check_graph(self.n, self.edges)
        self.weights = _weights(len(self.edges), self.weights)

    def encode(self):
        # side indicator s_v; an edge pays when both ends share a side
        inst = Bip2Instance([0] * self.n, [True] * self.n)
        for (u, v), w in zip(self.edges, self.weights):
            inst.add(1, u, 1, v, 1, w)
            inst.add(-1, u, -1, v, -1, w)
        return inst, None

    def decode(self, x, ctx=None) -> ProblemSolution:
        cut = [e for e, (u, v) in enumerate(self.edges) if x[u] == x[v]]
        return ProblemSolution(self.kind, cut, sum(self.weights[e] for e in cut))

    def verify(self, sol: ProblemSolution) -> VerifyReport:
        chosen = set(sol.value)
        kept = [uv for e, uv in enumerate(self.edges) if e not in chosen]
        bad = [] if _two_colorable(self.n, kept) else ["remaining graph is not bipartite"]
        return _report(bad, sum(self.weights[e] for e in chosen if 0 <= e < len(self.edges)), sol)


@dataclass
class MinSat:
    nvars: int
    clauses: list
    weights: Optional[list] = None
    kind = "minsat"

    def __post_init__(self):
        self.clauses = _check_clauses(self.nvars, self.clauses)
        self.weights = _weights(len(self.clauses), self.weights)

    def encode(self):
        # y_C = 1 whenever some literal of C is true; y_C costs the clause weight
        b = _Builder()
        for _ in range(self.nvars):
            b.var()
        for cl, w in zip(self.clauses, self.weights):
            y = b.var(w)
            for lit in set(cl):
                b.forbid(y, 0, abs(lit) - 1, 1 if lit > 0 else 0, None)
        return b.build(), None

    def decode(self, x, ctx=None) -> ProblemSolution:
        assign = _bits(x, self.nvars)
        return ProblemSolution(self.kind, assign, self._cost(assign))

    def _cost(self, assign):
        return sum(w for cl, w in zip(self.clauses, self.weights) if any(_lit_value(l, assign) for l in cl))

    def verify(self, sol):
        if len(sol.value) != self.nvars:
            return _report([f"assignment has {len(sol.value)} values, expected {self.nvars}"], 0, sol)
        return _report([], self._cost(sol.value), sol)


@dataclass
class GeneralizedVertexCover:
    n: int
    edges: list
    weights: Optional[list]
    d: list  # per edge (d0, d1, d2)
    kind = "gvc"

    def __post_init__(self):
        self.edges = _check_graph(self.n, self.edges)
        self.weights = _weights(self.n, self.weights)
        if len(self.d) != len(self.edges):
            raise ValueError("need (d0, d1, d2) per edge")
        self.d = [tuple(int(v) for v in t) for t in self.d]
        for d0, d1, d2 in self.d:
            if not d0 >= d1 >= d2 >= 0:
                raise ValueError("edge costs must satisfy d0 >= d1 >= d2 >= 0")

    def encode(self):
        b = _Builder()
        for w in self.weights:
            b.var(w)
        for (u, v), (d0, d1, d2) in zip(self.edges, self.d):
            b.table(u, v, (d0, d1, d1, d2))
        return b.build(), None

    def decode(self, x, ctx=None):
        chosen = [v for v in range(self.n) if x[v]]
        return ProblemSolution(self.kind, chosen, self._cost(chosen))

    def _cost(self, chosen):
        s = set(chosen)
        total = sum(self.weights[v] for v in s)
        for (u, v), dd in zip(self.edges, self.d):
            total += dd[(u in s) + (v in s)]
        return total

    def verify(self, sol):
        bad = [f"unknown vertex {v}" for v in sol.value if not 0 <= v < self.n]
        return _report(bad, self._cost([v for v in sol.value if 0 <= v < self.n]), sol)


@dataclass
class Generalized2Sat:
    nvars: int
    clauses: list
    weights: Optional[list] = None  # per variable, paid when true
    kind = "g2sat"

    def __post_init__(self):
        self.clauses = _check_clauses(self.nvars, self.clauses, 2)
        self.weights = _weights(self.nvars, self.weights)

    def encode(self):
        b = _Builder()
        for w in self.weights:
            b.var(w)
        for cl in self.clauses:
            b.clause([(abs(l) - 1, l > 0) for l in cl], None)
        return b.build(), None

    def decode(self, x, ctx=None):
        assign = _bits(x, self.nvars)
        return ProblemSolution(self.kind, assign, sum(w for w, a in zip(self.weights, assign) if a))

    def verify(self, sol):
        if len(sol.value) != self.nvars:
            return _report([f"assignment has {len(sol.value)} values, expected {self.nvars}"], 0, sol)
        bad = [f"clause {cl} unsatisfied" for cl in self.clauses if not any(_lit_value(l, sol.value) for l in cl)]
        return _report(bad, sum(w for w, a in zip(self.weights, sol.value) if a), sol)


@dataclass
class CliqueComplement:
    n: int
    edges: list
    weights: Optional[list] = None
    kind = "clique-comp"

    def __post_init__(self):
        self.edges = _check_graph(self.n, self.edges)
        self.weights = _weights(self.n, self.weights)

    def encode(self):
        present = {(min(u, v), max(u, v)) for u, v in self.edges}
        inst = Bip2Instance(list(self.weights), [True] * self.n)
        for u, v in combinations(range(self.n), 2):
            if (u, v) not in present:
                inst.add(1, u, 1, v, 1)
        return inst, None

    def decode(self, x, ctx=None):
        chosen = [v for v in range(self.n) if x[v]]
        return ProblemSolution(self.kind, chosen, sum(self.weights[v] for v in chosen))

    def verify(self, sol):
        gone = set(sol.value)
        present = {(min(u, v), max(u, v)) for u, v in self.edges}
        rest = [v for v in range(self.n) if v not in gone]
        bad = [f"({u},{v}) missing in the remaining clique" for u, v in combinations(rest, 2) if (u, v) not in present]
        return _report(bad, sum(self.weights[v] for v in gone if 0 <= v < self.n), sol)


@dataclass
class AlmostBoolean2Csp:
    """Each constraint is ``(vars, allowed)``: one or two variables and the allowed tuples."""

    nvars: int
    constraints: list
    weights: Optional[list] = None
    kind = "ab2csp"

    def __post_init__(self):
        out = []
        for vs, allowed in self.constraints:
            vs = tuple(int(v) for v in vs)
            if len(vs) not in (1, 2) or len(set(vs)) != len(vs) or any(not 0 <= v < self.nvars for v in vs):
                raise ValueError(f"bad constraint scope {vs}")
            allowed = frozenset(tuple(int(b) for b in t) for t in allowed)
            if any(len(t) != len(vs) or any(b not in (0, 1) for b in t) for t in allowed):
                raise ValueError(f"bad allowed tuples for scope {vs}")
            out.append((vs, allowed))
        self.constraints = out
        self.weights = _weights(len(out), self.weights)

    def encode(self):
        b = _Builder()
        for _ in range(self.nvars):
            b.var()
        for (vs, allowed), w in zip(self.constraints, self.weights):
            if len(vs) == 1:
                for val in (0, 1):
                    if (val,) not in allowed:
                        b.forbid_one(vs[0], val, w)
            else:
                t = [0 if (p, q) in allowed else w for p in (0, 1) for q in (0, 1)]
                b.table(vs[0], vs[1], t)
        return b.build(), None

    def decode(self, x, ctx=None):
        assign = _bits(x, self.nvars)
        return ProblemSolution(self.kind, assign, self._cost(assign))

    def _cost(self, assign):
        return sum(w for (vs, allowed), w in zip(self.constraints, self.weights)
                   if tuple(assign[v] for v in vs) not in allowed)

    def verify(self, sol):
        if len(sol.value) != self.nvars:
            return _report([f"assignment has {len(sol.value)} values, expected {self.nvars}"], 0, sol)
        return _report([], self._cost(sol.value), sol)


@dataclass
class DirectedMinUncut:
    """Side ``S`` is the set of vertices with value 1; arcs from S to the rest are free."""

    n: int
    arcs: list
    weights: Optional[list] = None
    kind = "dir-uncut"

    def __post_init__(self):
        self.arcs = _check_graph(self.n, self.arcs, directed=True)
        self.weights = _weights(len(self.arcs), self.weights)

    def encode(self):
        b = _Builder()
        for _ in range(self.n):
            b.var()
        for (u, v), w in zip(self.arcs, self.weights):
            b.table(u, v, (w, w, 0, w))
        return b.build(), None

    def decode(self, x, ctx=None):
        side = [v for v in range(self.n) if x[v]]
        return ProblemSolution(self.kind, side, self._cost(side))

    def _cost(self, side):
        s = set(side)
        return sum(w for (u, v), w in zip(self.arcs, self.weights) if not (u in s and v not in s))

    def verify(self, sol):
        bad = [f"unknown vertex {v}" for v in sol.value if not 0 <= v < self.n]
        return _report(bad, self._cost(sol.value), sol)


@dataclass
class SplitVertexDeletion:
    n: int
    edges: list
    weights: Optional[list] = None
    kind = "split-del"

    def __post_init__(self):
        self.edges = _check_graph(self.n, self.edges)
        self.weights = _weights(self.n, self.weights)

    def encode(self):
        # c_v (index v) marks the clique side, i_v (index n + v) the independent side
        n = self.n
        present = {(min(u, v), max(u, v)) for u, v in self.edges}
        inst = Bip2Instance([0] * (2 * n), [True] * (2 * n))
        for v in range(n):
            inst.add(1, v, 1, n + v, 1, self.weights[v])
        for u, v in combinations(range(n), 2):
            if (u, v) in present:
                inst.add(-1, n + u, -1, n + v, -1)
            else:
                inst.add(-1, u, -1, v, -1)
        return inst, None

    def decode(self, x, ctx=None):
        n = self.n
        gone = [v for v in range(n) if x[v] + x[n + v] < 1]
        return ProblemSolution(self.kind, gone, sum(self.weights[v] for v in gone))

    def verify(self, sol):
        gone = set(sol.value)
        rest = [v for v in range(self.n) if v not in gone]
        adj = {v: set() for v in rest}
        for u, v in self.edges:
            if u in adj and v in adj:
                adj[u].add(v)
                adj[v].add(u)
        # degree-sequence test for split graphs
        deg = sorted((len(adj[v]) for v in rest), reverse=True)
        m = sum(1 for i, d in enumerate(deg) if d >= i)
        ok = sum(deg[:m]) == m * (m - 1) + sum(deg[m:])
        bad = [] if ok else ["remaining graph is not a split graph"]
        return _report(bad, sum(self.weights[v] for v in gone if 0 <= v < self.n), sol)


PROBLEMS = {
    cls.kind: cls
    for cls in (
        VertexCoverProblem, OddCycleTransversal, Almost2Sat, EdgeBipartization, MinSat,
        GeneralizedVertexCover, Generalized2Sat, CliqueComplement, AlmostBoolean2Csp,
        DirectedMinUncut, SplitVertexDeletion,
    )
}


def _report(bad, objective, sol) -> VerifyReport:
    bad = list(bad)
    if sol.objective != objective:
        bad.append(f"claimed objective {sol.objective} but the solution costs {objective}")
    return VerifyReport(not bad, objective, bad)


def encode(p):
    return p.encode()


def decode(p, x, ctx=None) -> ProblemSolution:
    return p.decode(x, ctx)


def verify(p, sol: ProblemSolution) -> VerifyReport:
    return p.verify(sol)


@dataclass
class ProblemResult:
    solution: Optional[ProblemSolution]
    lp: object
    gap_doubled: Optional[int]
    stats: object
    report: Optional[VerifyReport]


def solve_problem(p, k: Optional[int] = None, pair: Optional[LpPair] = None) -> ProblemResult:
    """Encode, solve above the LP of the encoding (``k`` doubled, None for auto), decode, verify."""
    inst, ctx = p.encode()
    res = solve_bip2_auto(inst, pair) if k is None else solve_bip2(inst, k, pair)
    if res.x is None:
        return ProblemResult(None, res.lp, None, res.stats, None)
    sol = p.decode(res.x, ctx)
    rep = p.verify(sol)
    if not rep.ok:
        raise AssertionError("decoded solution failed verification: " + "; ".join(rep.violations))
    if sol.objective != res.objective:
        raise AssertionError(f"encoding objective {res.objective} differs from problem objective {sol.objective}")
    return ProblemResult(sol, res.lp, res.gap_doubled, res.stats, rep)
