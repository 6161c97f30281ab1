"""The Vertex Cover LP as a bipartite flow network.

Node layout of the network built for ``n`` vertices: ``0`` is the source,
``1`` the sink, ``2 + v`` is the left copy ``l_v`` and ``2 + n + v`` the
right copy ``r_v``.  Forward arc ``v`` is ``s -> l_v``, arc ``n + v`` is
``r_v -> t`` and edge ``i = {u, v}`` owns arcs ``2n + 2i`` (``l_u -> r_v``)
and ``2n + 2i + 1`` (``l_v -> r_u``).

Primal values are doubled: 0, 1, 2 stand for 0, 1/2, 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .flownet import (
    DirectedNet,
    FlowState,
    augment_to_max,
    reachable_mask,
    remove_node_flow,
    residual,
    scc_condense,
)

SOURCE, SINK = 0, 1


class InfeasibleDualError(ValueError):
    pass


@dataclass
class VcInstance:
    weights: list[int]
    edges: list[tuple[int, int]]

    def __post_init__(self):
        self.weights = [int(w) for w in self.weights]
        if any(w < 0 for w in self.weights):
            raise ValueError("vertex weights must be nonnegative")
        n = len(self.weights)
        seen = set()
        edges = []
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {(u, v)} out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            edges.append((u, v))
        self.edges = edges

    @property
    def n(self) -> int:
        return len(self.weights)

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


class VcFlowBundle:
    """Network, current flow and the alive mask over the original vertices."""

    __slots__ = ("inst", "net", "flow", "alive")

    def __init__(self, inst: VcInstance, net: DirectedNet, flow: FlowState, alive: bytearray):
        self.inst = inst
        self.net = net
        self.flow = flow
        self.alive = alive

    def l(self, v: int) -> int:
        return 2 + v

    def r(self, v: int) -> int:
        return 2 + self.inst.n + v

    def copy(self) -> "VcFlowBundle":
        return VcFlowBundle(self.inst, self.net, self.flow.copy(), bytearray(self.alive))

    def live_vertices(self) -> list[int]:
        return [v for v in range(self.inst.n) if self.alive[v]]

    def live_edges(self) -> list[int]:
        alive = self.alive
        return [i for i, (u, v) in enumerate(self.inst.edges) if alive[u] and alive[v]]

    def kill(self, v: int) -> int:
        """Drop vertex ``v``: cancel flow through both copies and mask them out."""
        removed = remove_node_flow(self.net, self.flow, self.l(v))
        removed += remove_node_flow(self.net, self.flow, self.r(v))
        self.flow.dead[self.l(v)] = 1
        self.flow.dead[self.r(v)] = 1
        self.alive[v] = 0
        return removed

    def state_key(self) -> tuple:
        return (tuple(self.flow.flow), self.flow.amount, bytes(self.flow.dead), bytes(self.alive))


def build_network(inst: VcInstance) -> VcFlowBundle:
    n = inst.n
    net = DirectedNet(2 * n + 2, SOURCE, SINK)
    for v in range(n):
        net.add_arc(SOURCE, 2 + v, 2 * inst.weights[v])
    for v in range(n):
        net.add_arc(2 + n + v, SINK, 2 * inst.weights[v])
    for u, v in inst.edges:
        net.add_arc(2 + u, 2 + n + v, None)
        net.add_arc(2 + v, 2 + n + u, None)
    return VcFlowBundle(inst, net, FlowState(net), bytearray([1]) * n)


def dual_to_flow(bundle: VcFlowBundle, y: Sequence[int]) -> FlowState:
    """Install the symmetric flow of a doubled dual ``y`` (one entry per edge)."""
    inst = bundle.inst
    n, m = inst.n, len(inst.edges)
    if len(y) != m:
        raise InfeasibleDualError(f"expected {m} dual values, got {len(y)}")
    load = [0] * n
    problems = []
    for i, (u, v) in enumerate(inst.edges):
        if y[i] < 0:
            problems.append(f"y[{u},{v}] = {Fraction(y[i], 2)} < 0")
        load[u] += y[i]
        load[v] += y[i]
    for v in range(n):
        if load[v] > 2 * inst.weights[v]:
            problems.append(f"vertex {v}: dual load {Fraction(load[v], 2)} > w = {inst.weights[v]}")
    if problems:
        raise InfeasibleDualError("; ".join(problems))
    flow = bundle.flow
    f = flow.flow
    for v in range(n):
        f[v] = load[v]
        f[n + v] = load[v]
    for i in range(m):
        f[2 * n + 2 * i] = y[i]
        f[2 * n + 2 * i + 1] = y[i]
    flow.amount = sum(load)
    return flow


def flow_to_dual(bundle: VcFlowBundle) -> list[Fraction]:
    """Dual value per edge, ``(f(l_u, r_v) + f(l_v, r_u)) / 2``.

    Returned as exact fractions: after augmentations the two arcs of an edge
    may disagree in parity, which puts the average on a quarter grid.
    """
    n = bundle.inst.n
    f = bundle.flow.flow
    return [Fraction(f[2 * n + 2 * i] + f[2 * n + 2 * i + 1], 4) for i in range(len(bundle.inst.edges))]


def primal_from_residual(bundle: VcFlowBundle) -> list[Optional[int]]:
    """Doubled optimal primal read off residual reachability from the source.

    Dead vertices get ``None``.  Checks the strong-duality certificate.
    """
    inst = bundle.inst
    n = inst.n
    view = residual(bundle.net, bundle.flow)
    seen = reachable_mask(view, SOURCE)
    x: list[Optional[int]] = [None] * n
    value = 0
    for v in range(n):
        if not bundle.alive[v]:
            continue
        lr, rr = seen[2 + v], seen[2 + n + v]
        if lr and not rr:
            x[v] = 0
        elif rr and not lr:
            x[v] = 2
        else:
            x[v] = 1
        value += inst.weights[v] * x[v]
    # value is 2 * val(x); amount is 4 * val(y)
    assert 2 * value == bundle.flow.amount, "primal and dual values differ"
    return x


def peel_integral(bundle: VcFlowBundle, x: Sequence[Optional[int]]) -> tuple[dict[int, int], VcFlowBundle]:
    """Fix every integral coordinate of ``x`` and drop those vertices."""
    fixed = {}
    for v, xv in enumerate(x):
        if xv is None or xv == 1:
            continue
        fixed[v] = xv // 2
    for v in fixed:
        bundle.kill(v)
    if fixed:
        assert augment_to_max(bundle.net, bundle.flow) == 0, "restricted flow is not maximum"
    return fixed, bundle


def fix_tail_sccs(bundle: VcFlowBundle) -> tuple[dict[int, int], VcFlowBundle]:
    """Repeatedly fix tail components of the residual graph on L and R.

    Needs the all-half vector to be optimal for the live instance.  One
    condensation is swept sinks-first: a component is removed when it has
    no left/right copies of the same vertex and all of its successors are
    gone already.
    """
    inst, net, flow = bundle.inst, bundle.net, bundle.flow
    n = inst.n
    f = flow.flow
    for v in range(n):
        if bundle.alive[v]:
            assert f[v] == net.cap[v] and f[n + v] == net.cap[n + v], "source/sink arc not saturated"
    view = residual(net, flow)
    inner = [node for node in range(2, 2 * n + 2) if not flow.dead[node]]
    scc = scc_condense(view, inner)
    comp, components = scc.comp, scc.components
    removed = [False] * len(components)
    fixed: dict[int, int] = {}
    succ = view.succ
    for c in range(len(components) - 1, -1, -1):
        members = components[c]
        if flow.dead[members[0]]:
            removed[c] = True
            continue
        blocked = False
        for u in members:
            for v in succ[u]:
                d = comp[v]
                if d != -1 and d != c and not removed[d]:
                    blocked = True
                    break
            if blocked:
                break
        if blocked:
            continue
        left = {u - 2 for u in members if u < 2 + n}
        right = {u - 2 - n for u in members if u >= 2 + n}
        if left & right:
            continue
        assert sum(inst.weights[v] for v in left) == sum(inst.weights[v] for v in right)
        removed[c] = True
        for v in left:
            fixed[v] = 0
        for v in right:
            fixed[v] = 1
        for v in sorted(left | right):
            bundle.kill(v)
    return fixed, bundle


def compute_vc_pair(inst: VcInstance) -> tuple[list[int], list[int]]:
    """Half-integral optimal (primal, dual) pair, both doubled, from a max flow."""
    bundle = build_network(inst)
    augment_to_max(bundle.net, bundle.flow)
    x = primal_from_residual(bundle)
    y = flow_to_dual(bundle)
    assert all((2 * val).denominator == 1 for val in y)
    return [int(v) for v in x], [int(2 * val) for val in y]


def lp_value_doubled(inst: VcInstance, x: Sequence[int]) -> int:
    return sum(w * xv for w, xv in zip(inst.weights, x))
