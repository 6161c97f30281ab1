"""Two-variable integer programs (BIP2) and their reduction to Vertex Cover.

A constraint reads ``a*x_i + b*x_j + z >= c`` with ``a, b`` in {-1, 0, 1};
``z`` is the optional independent variable of weight ``d`` (``d is None``
marks a hard constraint).  A constraint with ``b == 0`` is unary and has
``j == -1``.  Variables are nonnegative integers, optionally binary.

LP pairs store every primal and dual quantity doubled, so half-integral
values are plain ints.  Weights and duals that may involve the symbolic
large constant are ``BigWeight``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .flownet import DirectedNet, FlowState, UnboundedFlowError, augment_to_max, reachable_mask, residual
from .vcal import SearchStats, VcSolution, solve_above_lp, verify_pair
from .vclp import VcInstance


class InvalidPairError(ValueError):
    pass


class InfeasibleInstanceError(ValueError):
    pass


class PairRequiredError(ValueError):
    pass


@dataclass(frozen=True)
class BigWeight:
    """``mu * M + base`` for a symbolic, sufficiently large ``M``."""

    mu: int = 0
    base: int = 0

    def _key(self):
        return (self.mu, self.base)

    def __add__(self, other):
        o = as_big(other)
        return BigWeight(self.mu + o.mu, self.base + o.base)

    __radd__ = __add__

    def __neg__(self):
        return BigWeight(-self.mu, -self.base)

    def __sub__(self, other):
        return self + (-as_big(other))

    def __rsub__(self, other):
        return as_big(other) - self

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return BigWeight(self.mu * k, self.base * k)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, BigWeight)):
            return self._key() == as_big(other)._key()
        return NotImplemented

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other):
        return self._key() < as_big(other)._key()

    def __le__(self, other):
        return self._key() <= as_big(other)._key()

    def __gt__(self, other):
        return self._key() > as_big(other)._key()

    def __ge__(self, other):
        return self._key() >= as_big(other)._key()

    def concretize(self, m0: int) -> int:
        return self.mu * m0 + self.base

    def __str__(self):
        if not self.mu:
            return str(self.base)
        head = "M" if self.mu == 1 else f"{self.mu}M"
        if not self.base:
            return head
        return f"{head}{self.base:+d}"


BIG_M = BigWeight(1, 0)


def as_big(v) -> BigWeight:
    if isinstance(v, BigWeight):
        return v
    if isinstance(v, bool) or not isinstance(v, int):
        raise TypeError(f"expected int or BigWeight, got {v!r}")
    return BigWeight(0, v)


Number = Union[int, BigWeight]


@dataclass(frozen=True)
class Constraint:
    a: int
    i: int
    b: int
    j: int
    c: int
    d: Optional[BigWeight] = None

    @property
    def unary(self) -> bool:
        return self.b == 0

    @property
    def hard(self) -> bool:
        return self.d is None

    def terms(self) -> list[tuple[int, int]]:
        if self.b == 0:
            return [(self.a, self.i)]
        return [(self.a, self.i), (self.b, self.j)]


def make_constraint(a: int, i: int, b: int, j: int, c: int, d=None) -> Constraint:
    """Normalized constraint: the unary form keeps its variable in slot ``i``."""
    if a not in (-1, 0, 1) or b not in (-1, 0, 1):
        raise ValueError("coefficients must be in {-1, 0, 1}")
    if a == 0:
        a, i, b, j = b, j, 0, -1
    if a == 0:
        raise ValueError("constraint has no shared variable")
    if b == 0:
        j = -1
    elif i == j:
        raise ValueError(f"constraint uses variable {i} twice")
    if d is not None:
        d = as_big(d)
        if d < 0:
            raise ValueError("independent variable weight must be nonnegative")
    return Constraint(a, i, b, j, int(c), d)


@dataclass
class Bip2Instance:
    weights: list[BigWeight]
    binary: list[bool]
    cons: list[Constraint] = field(default_factory=list)
    offset: int = 0

    def __post_init__(self):
        self.weights = [as_big(w) for w in self.weights]
        if len(self.binary) != len(self.weights):
            raise ValueError("one domain flag per variable required")
        for w in self.weights:
            if w < 0:
                raise ValueError("variable weights must be nonnegative")
        n = len(self.weights)
        for con in self.cons:
            for _, v in con.terms():
                if not 0 <= v < n:
                    raise ValueError(f"constraint refers to unknown variable {v}")

    @property
    def n(self) -> int:
        return len(self.weights)

    def all_binary(self) -> bool:
        return all(self.binary)

    def is_concrete(self) -> bool:
        return all(w.mu == 0 for w in self.weights) and all(c.d is None or c.d.mu == 0 for c in self.cons)

    def add(self, a, i, b, j, c, d=None) -> None:
        """Append a constraint; rows without shared variables fold into the offset."""
        if a == 0 and b == 0:
            if c <= 0:
                return
            if d is None:
                raise InfeasibleInstanceError(f"hard constraint 0 >= {c}")
            d = as_big(d)
            if d.mu:
                raise ValueError("symbolic weight on a constant constraint")
            self.offset += d.base * c
            return
        con = make_constraint(a, i, b, j, c, d)
        for _, v in con.terms():
            if not 0 <= v < self.n:
                raise ValueError(f"constraint refers to unknown variable {v}")
        self.cons.append(con)


@dataclass
class LpPair:
    """Doubled primal ``x`` (shared), ``z`` (per constraint, None if hard) and dual ``y``.

    For instances with binary variables ``y`` carries one extra entry per
    binary variable (in index order): the dual of its bound ``-x_i >= -1``.
    """

    x: list[int]
    z: list[Optional[int]]
    y: list[BigWeight]

    def copy(self) -> "LpPair":
        return LpPair(list(self.x), list(self.z), list(self.y))


def add_bounds(inst: Bip2Instance) -> Bip2Instance:
    """Make the binary domains explicit as hard rows ``-x_i >= -1``."""
    out = Bip2Instance(list(inst.weights), [False] * inst.n, list(inst.cons), inst.offset)
    for i, isbin in enumerate(inst.binary):
        if isbin:
            out.cons.append(Constraint(-1, i, 0, -1, -1, None))
    return out


def check_pair(inst: Bip2Instance, pair: LpPair) -> BigWeight:
    """Verify feasibility of both sides and equal values; return the doubled value."""
    if any(inst.binary):
        inst = add_bounds(inst)
        if len(pair.z) < len(inst.cons):
            pair = LpPair(pair.x, list(pair.z) + [None] * (len(inst.cons) - len(pair.z)), pair.y)
    problems = []
    n, m = inst.n, len(inst.cons)
    if len(pair.x) != n or len(pair.z) != m or len(pair.y) != m:
        raise InvalidPairError(f"pair shape {len(pair.x)}/{len(pair.z)}/{len(pair.y)} != {n}/{m}/{m}")
    for i, xv in enumerate(pair.x):
        if xv < 0:
            problems.append(f"x[{i}] < 0")
    load = [BigWeight()] * n
    primal = BigWeight(0, 2 * inst.offset)
    dual = BigWeight(0, 2 * inst.offset)
    for r, con in enumerate(inst.cons):
        zr = pair.z[r]
        yr = as_big(pair.y[r])
        lhs = sum(a * pair.x[v] for a, v in con.terms())
        if con.hard:
            if zr not in (None, 0):
                problems.append(f"row {r} is hard but carries z = {Fraction(zr, 2)}")
        else:
            if zr is None or zr < 0:
                problems.append(f"row {r}: z missing or negative")
                zr = 0
            lhs += zr
            primal += con.d * zr
            if yr > 2 * con.d:
                problems.append(f"row {r}: dual {yr} above 2*d = {2 * con.d}")
        if lhs < 2 * con.c:
            problems.append(f"row {r} violated: {Fraction(lhs, 2)} < {con.c}")
        if yr < 0:
            problems.append(f"row {r}: negative dual")
        dual += con.c * yr
        for a, v in con.terms():
            load[v] = load[v] + a * yr
    for i in range(n):
        primal += inst.weights[i] * pair.x[i]
        if load[i] > 2 * inst.weights[i]:
            problems.append(f"dual constraint of variable {i}: {load[i]} > {2 * inst.weights[i]}")
    if not problems and primal != dual:
        problems.append(f"primal value {primal}/2 != dual value {dual}/2")
    if problems:
        raise InvalidPairError("; ".join(problems))
    return primal


def half_integral(pair: LpPair) -> bool:
    # doubled ints are half-integral by construction; this guards against stray types
    vals = list(pair.x) + [z for z in pair.z if z is not None]
    return all(isinstance(v, int) for v in vals) and all(isinstance(as_big(y).base, int) for y in pair.y)


# -- half-integral pairs of binary instances ------------------------------

def _literal_arcs(net, n, sign_i, i, sign_j, j, cap):
    li, ri, lj, rj = 2 + i, 2 + n + i, 2 + j, 2 + n + j
    if sign_i > 0 and sign_j > 0:
        return net.add_arc(li, rj, cap), net.add_arc(lj, ri, cap)
    if sign_i > 0 > sign_j:
        return net.add_arc(li, lj, cap), net.add_arc(rj, ri, cap)
    if sign_i < 0 < sign_j:
        return net.add_arc(lj, li, cap), net.add_arc(ri, rj, cap)
    return net.add_arc(rj, li, cap), net.add_arc(ri, lj, cap)


def _unary_arcs(net, n, sign, i, cap):
    li, ri = 2 + i, 2 + n + i
    if sign > 0:
        return net.add_arc(li, 1, cap), net.add_arc(0, ri, cap)
    return net.add_arc(0, li, cap), net.add_arc(ri, 1, cap)


def compute_halfint_pair(inst: Bip2Instance) -> LpPair:
    """Optimal half-integral pair of an all-binary instance from one max flow.

    Each variable gets two nodes ``l_i``, ``r_i`` with ``x_i = (a_i + b_i)/2``
    where ``a_i`` says ``l_i`` is cut off from the source and ``b_i`` says
    ``r_i`` is not.  Rows with literal right-hand side 1 become two arcs;
    rows with right-hand side 2 or more split into unary literal costs.
    """
    if not inst.all_binary():
        raise PairRequiredError("pairs are only computed for instances whose variables are all binary")
    if not inst.is_concrete():
        raise ValueError("instance weights must be concrete")
    n = inst.n
    net = DirectedNet(2 * n + 2, 0, 1)
    for i in range(n):
        net.add_arc(0, 2 + i, 2 * inst.weights[i].base)
    for i in range(n):
        net.add_arc(2 + n + i, 1, 2 * inst.weights[i].base)
    plan = []
    for r, con in enumerate(inst.cons):
        cap = None if con.hard else 2 * con.d.base
        terms = con.terms()
        cl = con.c + sum(1 for a, _ in terms if a < 0)
        if cl <= 0:
            plan.append(("none",))
        elif cl == 1 and len(terms) == 2:
            plan.append(("pair", _literal_arcs(net, n, con.a, con.i, con.b, con.j, cap)))
        elif cl == 1:
            plan.append(("pair", _unary_arcs(net, n, con.a, con.i, cap)))
        else:
            if con.hard and cl > len(terms):
                raise InfeasibleInstanceError(f"row {r} cannot be met by binary values")
            subs = [_unary_arcs(net, n, a, v, cap) for a, v in terms]
            plan.append(("split", subs, cl - len(terms)))
    flow = FlowState(net)
    try:
        augment_to_max(net, flow)
    except UnboundedFlowError as exc:
        raise InfeasibleInstanceError("hard constraints are contradictory") from exc
    f = flow.flow
    seen = reachable_mask(residual(net, flow), 0)
    x = [(0 if seen[2 + i] else 1) + (1 if seen[2 + n + i] else 0) for i in range(n)]
    # a zero-weight variable with no arcs reads as 1/2; zero is just as good and tidier
    touched = bytearray(n)
    for con, item in zip(inst.cons, plan):
        if item[0] != "none":
            for _, v in con.terms():
                touched[v] = 1
    x = [xv if touched[i] else 0 for i, xv in enumerate(x)]

    y: list[BigWeight] = []
    for con, item in zip(inst.cons, plan):
        if item[0] == "none":
            y.append(BigWeight())
        elif item[0] == "pair":
            ea, eb = item[1]
            y.append(BigWeight(0, (f[ea] + f[eb]) // 2))
        else:
            subs, extra = item[1], item[2]
            if extra == 0 and len(subs) == 2:
                y.append(BigWeight(0, max((f[ea] + f[eb]) // 2 for ea, eb in subs)))
            else:
                y.append(BigWeight(0, 2 * con.d.base))
    load = [0] * n
    for con, yr in zip(inst.cons, y):
        for a, v in con.terms():
            load[v] += a * yr.base
    beta = [BigWeight(0, max(0, load[i] - 2 * inst.weights[i].base)) for i in range(n)]

    z: list[Optional[int]] = []
    for con in inst.cons:
        if con.hard:
            z.append(None)
        else:
            z.append(max(0, 2 * con.c - sum(a * x[v] for a, v in con.terms())))
    pair = LpPair(x, z, y + beta)
    check_pair(inst, pair)
    return pair


# -- the reduction chain ---------------------------------------------------

@dataclass
class Stage:
    name: str
    inst: Bip2Instance
    pair: LpPair
    shift: BigWeight  # doubled lp increase relative to the previous stage
    info: dict = field(default_factory=dict)


def add_independent_vars(inst: Bip2Instance, pair: LpPair) -> Stage:
    cons, z, added = [], [], []
    for r, con in enumerate(inst.cons):
        if con.hard:
            cons.append(Constraint(con.a, con.i, con.b, con.j, con.c, BIG_M))
            z.append(0)
            added.append(r)
        else:
            cons.append(con)
            z.append(pair.z[r])
    out = Bip2Instance(list(inst.weights), list(inst.binary), cons, inst.offset)
    return Stage("independent", out, LpPair(list(pair.x), z, list(pair.y)), BigWeight(), {"added": added})


def monotonize(inst: Bip2Instance, pair: LpPair, big_x: Optional[int] = None) -> Stage:
    """Split every variable into ``x+`` (index i) and ``x-`` (index n+i)."""
    n = inst.n
    if big_x is None:
        big_x = choose_x(inst)
    weights = [BIG_M + w for w in inst.weights] + [BIG_M] * n
    cons = []
    neg_load = [BigWeight()] * n
    for r, con in enumerate(inst.cons):
        if con.hard:
            raise ValueError("monotonize expects an independent variable in every row")
        vs, shift = [], 0
        for a, v in con.terms():
            if a > 0:
                vs.append(v)
            else:
                vs.append(n + v)
                shift += big_x
                neg_load[v] = neg_load[v] + pair.y[r]
        if len(vs) == 1:
            cons.append(Constraint(1, vs[0], 0, -1, con.c + shift, con.d))
        else:
            cons.append(Constraint(1, vs[0], 1, vs[1], con.c + shift, con.d))
    for i in range(n):
        cons.append(Constraint(1, i, 1, n + i, big_x, None))
    x = list(pair.x) + [2 * big_x - xv for xv in pair.x]
    z = list(pair.z) + [None] * n
    y = list(pair.y) + [2 * BIG_M - neg_load[i] for i in range(n)]
    out = Bip2Instance(weights, [False] * (2 * n), cons, inst.offset)
    return Stage("monotone", out, LpPair(x, z, y), BigWeight(2 * n * big_x, 0), {"X": big_x, "n": n})


def eliminate_independent(inst: Bip2Instance, pair: LpPair) -> Stage:
    """Replace each independent variable by shared ones; no row keeps a ``z``."""
    weights = list(inst.weights)
    x = list(pair.x)
    cons, y = [], []
    rows = []  # per input row: ("copy", k) | ("unary", zvar) | ("gadget", zi, zj)
    shift = BigWeight()
    for r, con in enumerate(inst.cons):
        if con.a != 1 or (con.b not in (0, 1)):
            raise ValueError("eliminate_independent expects all coefficients to be +1")
        yr = as_big(pair.y[r])
        if con.hard:
            rows.append(("copy", len(cons)))
            cons.append(con)
            y.append(yr)
            continue
        if con.unary:
            zv = len(weights)
            weights.append(con.d)
            x.append(pair.z[r])
            rows.append(("unary", zv))
            cons.append(Constraint(1, con.i, 1, zv, con.c, None))
            y.append(yr)
            continue
        zi, zj = len(weights), len(weights) + 1
        weights += [con.d, con.d]
        c2 = 2 * con.c
        if con.c > 0:
            vi = max(0, c2 - pair.x[con.i])
            vj = max(c2 - vi, c2 - pair.x[con.j])
            yz = 2 * con.d - yr
            shift += 2 * con.c * con.d
        else:
            vi = vj = 0
            yz = BigWeight()
        x += [vi, vj]
        rows.append(("gadget", zi, zj))
        cons += [
            Constraint(1, con.i, 1, zi, con.c, None),
            Constraint(1, con.j, 1, zj, con.c, None),
            Constraint(1, zi, 1, zj, con.c, None),
        ]
        y += [yr, yr, yz]
    out = Bip2Instance(weights, [False] * len(weights), cons, inst.offset)
    return Stage("gadget", out, LpPair(x, [None] * len(cons), y), shift, {"rows": rows, "n": inst.n})


def choose_x(inst: Bip2Instance) -> int:
    return 2 * max([1] + [abs(c.c) for c in inst.cons]) + 2


def choose_m0(inst: Bip2Instance, big_x: int) -> int:
    """Concrete value for the symbolic constant, from the bounded input instance."""
    total = sum(w.base for w in inst.weights)
    for con in inst.cons:
        if not con.hard:
            total += con.d.base * (abs(con.c) + 2 * big_x)
    return 1 + total


@dataclass
class ReductionTrace:
    source: Bip2Instance
    stages: list[Stage]
    m0: int
    big_x: int
    vc: VcInstance
    vc_pair: tuple[list[int], list[int]]
    floors: list[int]
    vc_offset_doubled: int  # doubled constant part of the final objective

    def lp_doubled(self) -> int:
        """Doubled LP value of the source instance."""
        return self.stages[0].info["value"].base

    def shift_doubled(self) -> int:
        return sum((s.shift for s in self.stages), BigWeight()).concretize(self.m0)


def binarize_to_vc(inst: Bip2Instance, pair: LpPair, m0: int):
    """Round down to the floors of ``x*``; tight half/half rows become VC edges."""
    weights = [w.concretize(m0) for w in inst.weights]
    if any(w < 0 for w in weights):
        raise AssertionError("concrete weight negative; the large constant is too small")
    x = pair.x
    floors = [xv // 2 for xv in x]
    merged: dict[tuple[int, int], int] = {}
    for r, con in enumerate(inst.cons):
        if con.a != 1 or con.b != 1 or not con.hard:
            raise ValueError("binarize_to_vc expects hard rows x_i + x_j >= c")
        p, q = con.i, con.j
        if x[p] + x[q] != 2 * con.c:
            continue
        if x[p] % 2 and x[q] % 2:
            assert con.c - floors[p] - floors[q] == 1
            key = (min(p, q), max(p, q))
            merged[key] = merged.get(key, 0) + as_big(pair.y[r]).concretize(m0)
        else:
            assert con.c - floors[p] - floors[q] == 0
    edges = sorted(merged)
    vc = VcInstance(weights, edges)
    xv = [v % 2 for v in x]
    yv = [merged[e] for e in edges]
    verify_pair(vc, xv, yv)
    offset = 2 * inst.offset + sum(2 * w * f for w, f in zip(weights, floors))
    return vc, (xv, yv), floors, offset


def reduce_to_vc(inst: Bip2Instance, pair: LpPair) -> ReductionTrace:
    """Run the whole chain, checking the transported pair after every stage."""
    bounded = add_bounds(inst)
    full = LpPair(list(pair.x), list(pair.z) + [None] * (len(bounded.cons) - len(pair.z)), list(pair.y))
    value = check_pair(bounded, full)
    stages = [Stage("bounds", bounded, full, BigWeight(), {"value": value})]
    s1 = add_independent_vars(bounded, full)
    s2 = monotonize(s1.inst, s1.pair)
    s3 = eliminate_independent(s2.inst, s2.pair)
    for prev, st in zip(stages + [s1, s2], [s1, s2, s3]):
        st.info["value"] = check_pair(st.inst, st.pair)
        assert st.info["value"] == prev.info["value"] + st.shift, f"value drift at stage {st.name}"
        stages.append(st)
    big_x = s2.info["X"]
    m0 = choose_m0(bounded, big_x)
    vc, vc_pair, floors, offset = binarize_to_vc(s3.inst, s3.pair, m0)
    lp3 = s3.info["value"].concretize(m0)
    assert offset + sum(w * xv for w, xv in zip(vc.weights, vc_pair[0])) == lp3
    return ReductionTrace(inst, stages, m0, big_x, vc, vc_pair, floors, offset)


# -- integer solutions -----------------------------------------------------

def evaluate(inst: Bip2Instance, x: Sequence[int]) -> tuple[list[str], int]:
    """Violations and objective of an integer point, with optimal ``z`` per row."""
    problems = []
    if len(x) != inst.n:
        return [f"expected {inst.n} values, got {len(x)}"], 0
    total = inst.offset
    for i, xv in enumerate(x):
        if xv < 0 or (inst.binary[i] and xv > 1):
            problems.append(f"x[{i}] = {xv} outside its domain")
        total += inst.weights[i].base * xv
    for r, con in enumerate(inst.cons):
        lhs = sum(a * x[v] for a, v in con.terms())
        if lhs >= con.c:
            continue
        if con.hard:
            problems.append(f"row {r} violated")
        else:
            total += con.d.base * (con.c - lhs)
    return problems, total


def decode_solution(sol: VcSolution, trace: ReductionTrace) -> tuple[list[int], int]:
    """Map a vertex cover of the final instance back to the source instance."""
    chosen = set(sol.cover)
    x3 = [f + (1 if i in chosen else 0) for i, f in enumerate(trace.floors)]
    inst3 = trace.stages[-1].inst
    for r, con in enumerate(inst3.cons):
        if x3[con.i] + x3[con.j] < con.c:
            raise AssertionError(f"decoded point violates row {r} of the last stage")
    # gadget and split variables are appended after the originals at every stage
    x = x3[: trace.source.n]
    problems, obj = evaluate(trace.source, x)
    if problems:
        # the added big-weight variables only stay positive when nothing else is feasible
        raise InfeasibleInstanceError("no integer point satisfies the hard rows: " + "; ".join(problems))
    claimed2 = trace.vc_offset_doubled + 2 * sol.weight - trace.shift_doubled()
    if 2 * obj > claimed2:
        raise AssertionError(f"decoded objective {obj} exceeds the reduced cost {Fraction(claimed2, 2)}")
    return x, obj


@dataclass
class Bip2Result:
    x: Optional[list[int]]
    objective: Optional[int]
    lp: Fraction
    gap_doubled: Optional[int]
    stats: SearchStats
    trace: ReductionTrace


def _prepare(inst: Bip2Instance, pair: Optional[LpPair]) -> ReductionTrace:
    if pair is None:
        if not inst.all_binary():
            raise PairRequiredError("instance has non-binary variables: an LP pair must be supplied")
        pair = compute_halfint_pair(inst)
    return reduce_to_vc(inst, pair)


def _finish(trace: ReductionTrace, sol: Optional[VcSolution], stats: SearchStats) -> Bip2Result:
    lp = Fraction(trace.lp_doubled(), 2)
    if sol is None:
        return Bip2Result(None, None, lp, None, stats, trace)
    x, obj = decode_solution(sol, trace)
    gap_d = 2 * obj - trace.lp_doubled()
    assert gap_d == sol.gap_doubled, "gap changed along the reduction"
    return Bip2Result(x, obj, lp, gap_d, stats, trace)


def solve_bip2(inst: Bip2Instance, k: int, pair: Optional[LpPair] = None) -> Bip2Result:
    """Optimal solution with objective at most ``lp + k/2``; ``x is None`` if none exists."""
    trace = _prepare(inst, pair)
    sol, stats = solve_above_lp(trace.vc, trace.vc_pair, k)
    return _finish(trace, sol, stats)


def solve_bip2_auto(inst: Bip2Instance, pair: Optional[LpPair] = None) -> Bip2Result:
    trace = _prepare(inst, pair)
    k = 0
    while True:
        sol, stats = solve_above_lp(trace.vc, trace.vc_pair, k)
        if sol is not None:
            return _finish(trace, sol, stats)
        k += 1
