"""Independent reference answers for small instances.

Nothing here calls solver code: feasibility checks are re-implemented and
LP optima come from HiGHS (through scipy) followed by an exact rational
certificate check, so a wrong float answer cannot slip through.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, linprog, milp


class OracleBudgetError(RuntimeError):
    pass


class OracleCertificateError(RuntimeError):
    pass


MAX_BRUTE_BITS = 22


def _budget(bits: int) -> None:
    if bits > MAX_BRUTE_BITS:
        raise OracleBudgetError(f"2^{bits} states exceed the enumeration budget")


# -- vertex cover ----------------------------------------------------------

def brute_vc(n: int, edges, weights) -> tuple[int, list[int]]:
    """Minimum weight cover by enumerating all subsets (vectorized)."""
    _budget(n)
    masks = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(1 << n, dtype=bool)
    for u, v in edges:
        ok &= ((masks >> u) & 1).astype(bool) | ((masks >> v) & 1).astype(bool)
    cost = np.zeros(1 << n, dtype=np.int64)
    for v in range(n):
        cost += ((masks >> v) & 1) * int(weights[v])
    cost = np.where(ok, cost, np.iinfo(np.int64).max)
    best = int(np.argmin(cost))
    return int(cost[best]), [v for v in range(n) if best >> v & 1]


def vc_ip(n: int, edges, weights) -> int:
    """Integer optimum; isolated vertices are dropped, MILP beyond the brute-force budget."""
    used = sorted({v for e in edges for v in e})
    if len(used) <= MAX_BRUTE_BITS:
        index = {v: i for i, v in enumerate(used)}
        return brute_vc(len(used), [(index[u], index[v]) for u, v in edges], [weights[v] for v in used])[0]
    a = np.zeros((len(edges), n))
    for r, (u, v) in enumerate(edges):
        a[r, u] = a[r, v] = 1
    res = milp(np.array(weights, dtype=float), constraints=LinearConstraint(a, lb=1, ub=np.inf),
               integrality=np.ones(n), bounds=Bounds(0, 1))
    if res.status != 0:
        raise OracleCertificateError(res.message)
    xs = [int(round(v)) for v in res.x]
    if any(xs[u] + xs[v] < 1 for u, v in edges):
        raise OracleCertificateError("MILP cover infeasible")
    return sum(w * x for w, x in zip(weights, xs))


def _halves(vals) -> list[Fraction]:
    out = []
    for v in vals:
        f = Fraction(round(2 * float(v)), 2)
        if abs(float(f) - float(v)) > 1e-6:
            f = Fraction(float(v)).limit_denominator(64)
        out.append(f)
    return out


def vc_lp(n: int, edges, weights) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    """Exact LP optimum of the cover relaxation with a checked primal/dual pair."""
    m = len(edges)
    if m == 0:
        return Fraction(0), [Fraction(0)] * n, []
    a = np.zeros((m, n))
    for r, (u, v) in enumerate(edges):
        a[r, u] = a[r, v] = 1
    w = np.array(weights, dtype=float)
    res = linprog(w, A_ub=-a, b_ub=-np.ones(m), bounds=[(0, None)] * n, method="highs-ds")
    if res.status != 0:
        raise OracleCertificateError(res.message)
    x = _halves(res.x)
    y = _halves(-res.ineqlin.marginals)
    for u, v in edges:
        if x[u] + x[v] < 1:
            raise OracleCertificateError("rounded primal infeasible")
    load = [Fraction(0)] * n
    for (u, v), yv in zip(edges, y):
        if yv < 0:
            raise OracleCertificateError("negative dual")
        load[u] += yv
        load[v] += yv
    if any(load[v] > weights[v] for v in range(n)) or any(xv < 0 for xv in x):
        raise OracleCertificateError("rounded dual infeasible")
    val = sum(Fraction(weights[v]) * x[v] for v in range(n))
    if val != sum(y):
        raise OracleCertificateError(f"values differ: {val} vs {sum(y)}")
    return val, x, y


def brute_halfint_lp(n: int, edges, weights) -> Fraction:
    return vc_lp(n, edges, weights)[0]


def halfint_grid_lp(n: int, edges, weights) -> Fraction:
    """Optimum over the {0, 1/2, 1} grid; only for tiny cross-checks."""
    if 3 ** n > 200_000:
        raise OracleBudgetError("grid too large")
    best = None
    for xs in itertools.product((0, 1, 2), repeat=n):
        if all(xs[u] + xs[v] >= 2 for u, v in edges):
            val = sum(w * x for w, x in zip(weights, xs))
            best = val if best is None else min(best, val)
    return Fraction(best, 2)


def vc_independent_tight_sets(n: int, edges, weights, alive=None) -> list[int]:
    """Nonempty independent sets S with w(S) == w(N(S)) among ``alive`` vertices."""
    alive = list(range(n)) if alive is None else list(alive)
    _budget(len(alive))
    adj = {v: set() for v in alive}
    for u, v in edges:
        if u in adj and v in adj:
            adj[u].add(v)
            adj[v].add(u)
    found = []
    for mask in range(1, 1 << len(alive)):
        s = [alive[b] for b in range(len(alive)) if mask >> b & 1]
        ss = set(s)
        if any(adj[v] & ss for v in s):
            continue
        nb = set().union(*(adj[v] for v in s))
        if sum(weights[v] for v in s) == sum(weights[v] for v in nb):
            found.append(mask)
    return found


# -- generic two-variable integer programs ---------------------------------

def _rows(inst, m0: int):
    """Concrete rows (coefs, c, d) of a Bip2Instance, reading plain fields only."""
    out = []
    for con in inst.cons:
        coefs = [(con.a, con.i)] + ([(con.b, con.j)] if con.b else [])
        d = None if con.d is None else con.d.mu * m0 + con.d.base
        out.append((coefs, con.c, d))
    return out


def _matrix(inst, m0: int):
    n = inst.n
    rows = _rows(inst, m0)
    soft = [r for r, (_, _, d) in enumerate(rows) if d is not None]
    nv = n + len(soft)
    a = np.zeros((len(rows), nv))
    b = np.zeros(len(rows))
    zcol = {r: n + k for k, r in enumerate(soft)}
    for r, (coefs, c, d) in enumerate(rows):
        for co, v in coefs:
            a[r, v] += co
        if r in zcol:
            a[r, zcol[r]] = 1
        b[r] = c
    cost = np.zeros(nv)
    for v, w in enumerate(inst.weights):
        cost[v] = w.mu * m0 + w.base
    for r, col in zcol.items():
        cost[col] = rows[r][2]
    upper = np.full(nv, np.inf)
    for v, isbin in enumerate(inst.binary):
        if isbin:
            upper[v] = 1
    return cost, a, b, upper


def bip2_lp(inst, m0: int = 0) -> Fraction:
    """Exact LP value (with the symbolic constant set to ``m0``), certified."""
    cost, a, b, upper = _matrix(inst, m0)
    nv = len(cost)
    if nv == 0:
        return Fraction(inst.offset)
    if len(b) == 0:
        return Fraction(inst.offset)
    bounds = [(0, None if np.isinf(u) else u) for u in upper]
    res = linprog(cost, A_ub=-a, b_ub=-b, bounds=bounds, method="highs-ds")
    if res.status == 2:
        raise ValueError("LP infeasible")
    if res.status != 0:
        raise OracleCertificateError(res.message)
    x = _halves(res.x)
    y = _halves(-res.ineqlin.marginals)
    beta = _halves(-res.upper.marginals) if res.upper is not None else [Fraction(0)] * nv
    # exact certificate
    ia = a.astype(int)
    for r in range(len(b)):
        if sum(int(ia[r, v]) * x[v] for v in range(nv)) < int(b[r]) or y[r] < 0:
            raise OracleCertificateError("rounded LP pair infeasible")
    for v in range(nv):
        if x[v] < 0 or (not np.isinf(upper[v]) and x[v] > 1) or beta[v] < 0:
            raise OracleCertificateError("rounded LP pair out of bounds")
        load = sum(int(ia[r, v]) * y[r] for r in range(len(b))) - (0 if np.isinf(upper[v]) else beta[v])
        if load > int(cost[v]):
            raise OracleCertificateError("rounded dual infeasible")
    primal = sum(int(cost[v]) * x[v] for v in range(nv))
    dual = sum(int(b[r]) * y[r] for r in range(len(b))) - sum(
        beta[v] for v in range(nv) if not np.isinf(upper[v]))
    if primal != dual:
        raise OracleCertificateError(f"LP values differ: {primal} vs {dual}")
    return primal + inst.offset


def bip2_ip(inst, m0: int = 0) -> Optional[int]:
    """Integer optimum via brute force when all variables are binary, else MILP."""
    cost, a, b, upper = _matrix(inst, m0)
    n = inst.n
    if all(inst.binary) and n <= 16:
        rows = _rows(inst, m0)
        best = None
        for xs in itertools.product((0, 1), repeat=n):
            total = inst.offset + sum(int(cost[v]) * xs[v] for v in range(n))
            ok = True
            for coefs, c, d in rows:
                lhs = sum(co * xs[v] for co, v in coefs)
                if lhs < c:
                    if d is None:
                        ok = False
                        break
                    total += d * (c - lhs)
            if ok and (best is None or total < best):
                best = total
        return best
    if len(b) == 0:
        return inst.offset
    res = milp(cost, constraints=LinearConstraint(a, lb=b, ub=np.inf),
               integrality=np.ones(len(cost)), bounds=Bounds(0, upper))
    if res.status == 2 or res.x is None:
        return None
    if res.status != 0:
        raise OracleCertificateError(res.message)
    xs = [int(round(v)) for v in res.x]
    if np.any(a @ np.array(xs) < b - 1e-9):
        raise OracleCertificateError("MILP point infeasible")
    return int(round(float(np.dot(cost, xs)))) + inst.offset


def bip2_gap(inst, m0: int = 0) -> Optional[Fraction]:
    opt = bip2_ip(inst, m0)
    if opt is None:
        return None
    return opt - bip2_lp(inst, m0)


# -- problem-level brute force ---------------------------------------------

def _bipartite(n: int, edges, removed=frozenset()) -> bool:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        if u not in removed and v not in removed:
            adj[u].append(v)
            adj[v].append(u)
    side = {}
    for s in range(n):
        if s in removed or s in side:
            continue
        side[s] = 0
        todo = [s]
        while todo:
            u = todo.pop()
            for v in adj[u]:
                if v not in side:
                    side[v] = side[u] ^ 1
                    todo.append(v)
                elif side[v] == side[u]:
                    return False
    return True


def _assignments(n):
    _budget(n)
    return itertools.product((0, 1), repeat=n)


def _sat(lit, a):
    return (a[abs(lit) - 1] == 1) == (lit > 0)


def brute_problem(p) -> Optional[int]:
    """Exact optimum of a frontend problem by exhaustive search (None if infeasible)."""
    kind = p.kind
    if kind == "vc":
        return brute_vc(p.n, p.edges, p.weights)[0]
    if kind == "oct":
        _budget(p.n)
        best = None
        for mask in range(1 << p.n):
            s = frozenset(v for v in range(p.n) if mask >> v & 1)
            cost = sum(p.weights[v] for v in s)
            if (best is None or cost < best) and _bipartite(p.n, p.edges, s):
                best = cost
        return best
    if kind == "edge-bip":
        return min(sum(w for (u, v), w in zip(p.edges, p.weights) if a[u] == a[v]) for a in _assignments(p.n))
    if kind in ("a2sat", "minsat"):
        want = kind == "minsat"
        return min(sum(w for cl, w in zip(p.clauses, p.weights) if any(_sat(l, a) for l in cl) == want)
                   for a in _assignments(p.nvars))
    if kind == "g2sat":
        vals = [sum(w for w, x in zip(p.weights, a) if x) for a in _assignments(p.nvars)
                if all(any(_sat(l, a) for l in cl) for cl in p.clauses)]
        return min(vals) if vals else None
    if kind == "gvc":
        best = None
        for a in _assignments(p.n):
            cost = sum(w for w, x in zip(p.weights, a) if x)
            cost += sum(d[a[u] + a[v]] for (u, v), d in zip(p.edges, p.d))
            best = cost if best is None else min(best, cost)
        return best
    if kind == "clique-comp":
        adj = {(min(u, v), max(u, v)) for u, v in p.edges}
        best = None
        for a in _assignments(p.n):
            keep = [v for v in range(p.n) if not a[v]]
            if all((u, v) in adj for u, v in itertools.combinations(keep, 2)):
                cost = sum(p.weights[v] for v in range(p.n) if a[v])
                best = cost if best is None else min(best, cost)
        return best
    if kind == "ab2csp":
        return min(sum(w for (vs, ok), w in zip(p.constraints, p.weights) if tuple(a[v] for v in vs) not in ok)
                   for a in _assignments(p.nvars))
    if kind == "dir-uncut":
        return min(sum(w for (u, v), w in zip(p.arcs, p.weights) if not (a[u] == 1 and a[v] == 0))
                   for a in _assignments(p.n))
    if kind == "split-del":
        if 3 ** p.n > 3 ** 12:
            raise OracleBudgetError("too many vertices")
        adj = {(min(u, v), max(u, v)) for u, v in p.edges}
        best = None
        # 0 = deleted, 1 = clique side, 2 = independent side
        for lab in itertools.product((0, 1, 2), repeat=p.n):
            cost = sum(p.weights[v] for v in range(p.n) if lab[v] == 0)
            if best is not None and cost >= best:
                continue
            ok = True
            for u, v in itertools.combinations(range(p.n), 2):
                e = (u, v) in adj
                if (lab[u] == lab[v] == 1 and not e) or (lab[u] == lab[v] == 2 and e):
                    ok = False
                    break
            if ok:
                best = cost
        return best
    raise ValueError(f"no oracle for {kind}")


# -- multiway cut ----------------------------------------------------------

def _separated(n, edges, terminals, removed) -> bool:
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    tset = set(terminals)
    comp = [-1] * n
    for t in terminals:
        if comp[t] != -1:
            return False
        comp[t] = t
        queue = deque([t])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v in removed or comp[v] != -1:
                    continue
                if v in tset:
                    return False
                comp[v] = t
                queue.append(v)
    return True


def brute_multiway(n: int, edges, terminals) -> Optional[int]:
    """Smallest set of non-terminals separating all terminal pairs, or None."""
    tset = set(terminals)
    others = [v for v in range(n) if v not in tset]
    _budget(len(others))
    for size in range(len(others) + 1):
        for cut in itertools.combinations(others, size):
            if _separated(n, edges, terminals, set(cut)):
                return size
    return None


def min_isolating_cuts(n: int, edges, terminals, t) -> tuple[int, list[tuple[frozenset, frozenset]]]:
    """All minimum isolating cuts of ``t`` with their regions (component of ``t``)."""
    tset = set(terminals)
    others = [v for v in range(n) if v not in tset]
    _budget(len(others))
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    for size in range(len(others) + 1):
        found = []
        for cut in itertools.combinations(others, size):
            cs = set(cut)
            seen = {t}
            todo = [t]
            bad = False
            while todo and not bad:
                u = todo.pop()
                for v in adj[u]:
                    if v in cs or v in seen:
                        continue
                    if v in tset:
                        bad = True
                        break
                    seen.add(v)
                    todo.append(v)
            if not bad:
                found.append((frozenset(cut), frozenset(seen)))
        if found:
            return size, found
    return -1, []


# -- seeded generators -----------------------------------------------------

def random_graph(rng: random.Random, n: int, m_max: int, w_max: int = 1):
    pairs = list(itertools.combinations(range(n), 2))
    rng.shuffle(pairs)
    m = rng.randint(0, min(m_max, len(pairs)))
    edges = sorted(pairs[:m])
    weights = [rng.randint(1 if w_max == 1 else 0, w_max) for _ in range(n)]
    return edges, weights


def random_2cnf(rng: random.Random, nvars: int, m: int):
    out = []
    for _ in range(m):
        u = rng.randint(1, nvars)
        v = rng.randint(1, nvars)
        out.append([u * rng.choice((-1, 1)), v * rng.choice((-1, 1))])
    return out


def random_bip2_rows(rng: random.Random, n: int, m: int, w_max: int = 3, c_range=(-2, 3), hard_p: float = 0.4):
    """Raw rows ``(a, i, b, j, c, d)`` for ``Bip2Instance.add``."""
    weights = [rng.randint(0, w_max) for _ in range(n)]
    rows = []
    for _ in range(m):
        i = rng.randrange(n)
        if n > 1 and rng.random() < 0.8:
            j = rng.choice([v for v in range(n) if v != i])
            b = rng.choice((-1, 1))
        else:
            j, b = -1, 0
        d = None if rng.random() < hard_p else rng.randint(0, w_max)
        rows.append((rng.choice((-1, 1)), i, b, j, rng.randint(*c_range), d))
    return weights, rows


def random_multiway(rng: random.Random, n: int, n_terms: int, p: float):
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    terms = sorted(rng.sample(range(n), n_terms))
    return edges, terms


# -- fixed-gap families for scaling runs --------------------------------------
# Each returns (n, edges, weights, x, y, k): a unit-weight graph, a doubled
# optimal LP pair for it, and the doubled gap.

def bipartite_family(rng: random.Random, n: int):
    """Perfect matching (2t, 2t+1) plus one random even-odd chord per pair; gap 0."""
    n -= n % 2
    half = n // 2
    edges = [(2 * t, 2 * t + 1) for t in range(half)]
    have = set(edges)
    for t in range(half):
        s = rng.randrange(half)
        e = (min(2 * t, 2 * s + 1), max(2 * t, 2 * s + 1))
        if e not in have:
            have.add(e)
            edges.append(e)
    x = [2 * (v % 2) for v in range(n)]
    y = [2 if i < half else 0 for i in range(len(edges))]
    return n, edges, [1] * n, x, y, 0


def k3_path_family(n: int):
    """A triangle next to a path on the remaining vertices; gap 1/2."""
    n = max(n, 3)
    n -= (n - 3) % 2
    edges = [(0, 1), (0, 2), (1, 2)]
    edges += [(v, v + 1) for v in range(3, n - 1)]
    x = [1, 1, 1] + [2 * ((v - 3) % 2) for v in range(3, n)]
    y = [1, 1, 1] + [2 if (u - 3) % 2 == 0 else 0 for u, _ in edges[3:]]
    return n, edges, [1] * n, x, y, 1
