"""Directed s-t networks with half-integral capacities and flows.

Every quantity is stored doubled (one unit == one half) so arithmetic stays
exact on plain ints.  ``UNBOUNDED`` (``None``) marks an infinite capacity.

Arcs are stored in pairs: forward arc ``e`` has residual id ``2*e`` and its
reverse has id ``2*e + 1``.  ``net.out[u]`` lists the residual ids leaving
``u`` in insertion order, which fixes the search order of augmenting paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

UNBOUNDED = None


class UnboundedFlowError(RuntimeError):
    """An s-t path made only of unbounded arcs exists."""


def to_doubled(value) -> int:
    """Parse a half-integer (int, Fraction, ``"3/2"``, ``"1.5"``) into doubled units."""
    if isinstance(value, str):
        value = Fraction(value.strip())
    q = Fraction(value) * 2
    if q.denominator != 1:
        raise ValueError(f"{value!r} is not a multiple of 1/2")
    return int(q)


def from_doubled(d: int) -> Fraction:
    return Fraction(d, 2)


def fmt_doubled(d: int) -> str:
    return str(d // 2) if d % 2 == 0 else f"{d}/2"


class DirectedNet:
    def __init__(self, n_nodes: int, source: int, sink: int):
        self.n = n_nodes
        self.source = source
        self.sink = sink
        self.tail: list[int] = []
        self.head: list[int] = []
        self.cap: list[Optional[int]] = []
        # target node of every residual id
        self.to: list[int] = []
        self.out: list[list[int]] = [[] for _ in range(n_nodes)]

    @property
    def num_arcs(self) -> int:
        return len(self.head)

    def add_arc(self, u: int, v: int, cap: Optional[int]) -> int:
        if cap is not None and cap < 0:
            raise ValueError("negative capacity")
        e = len(self.head)
        self.tail.append(u)
        self.head.append(v)
        self.cap.append(cap)
        self.to.append(v)
        self.to.append(u)
        self.out[u].append(2 * e)
        self.out[v].append(2 * e + 1)
        return e

    def with_own_capacities(self) -> "DirectedNet":
        """Shallow copy sharing topology but owning a private capacity list."""
        other = DirectedNet.__new__(DirectedNet)
        other.__dict__.update(self.__dict__)
        other.cap = list(self.cap)
        return other


class FlowState:
    """A flow on ``net`` plus the set of nodes currently removed from it."""

    __slots__ = ("net", "flow", "amount", "dead")

    def __init__(self, net: DirectedNet, flow=None, amount: int = 0, dead=None):
        self.net = net
        self.flow = [0] * net.num_arcs if flow is None else flow
        self.amount = amount
        self.dead = bytearray(net.n) if dead is None else dead

    def copy(self) -> "FlowState":
        return FlowState(self.net, list(self.flow), self.amount, bytearray(self.dead))

    def residual_capacity(self, a: int) -> Optional[int]:
        e = a >> 1
        if a & 1:
            return self.flow[e]
        c = self.net.cap[e]
        return None if c is None else c - self.flow[e]

    def check(self) -> None:
        """Assert capacity and conservation constraints; used heavily by tests."""
        net = self.net
        balance = [0] * net.n
        for e, f in enumerate(self.flow):
            c = net.cap[e]
            assert f >= 0, f"arc {e} carries negative flow"
            assert c is None or f <= c, f"arc {e} over capacity"
            if f and (self.dead[net.tail[e]] or self.dead[net.head[e]]):
                raise AssertionError(f"arc {e} touches a removed node but carries flow")
            balance[net.tail[e]] -= f
            balance[net.head[e]] += f
        for v in range(net.n):
            if v == net.source or v == net.sink:
                continue
            assert balance[v] == 0, f"conservation fails at node {v}"
        assert -balance[net.source] == self.amount == balance[net.sink], "amount mismatch"


@dataclass
class ResidualView:
    """Materialised residual graph: ``succ[u]`` lists targets of residual arcs."""

    succ: list[list[int]]
    alive: bytearray

    @property
    def n(self) -> int:
        return len(self.succ)


def residual(net: DirectedNet, flow: FlowState) -> ResidualView:
    to, cap, f, dead = net.to, net.cap, flow.flow, flow.dead
    succ: list[list[int]] = []
    for u in range(net.n):
        if dead[u]:
            succ.append([])
            continue
        row = []
        for a in net.out[u]:
            v = to[a]
            if dead[v]:
                continue
            e = a >> 1
            if a & 1:
                if f[e] > 0:
                    row.append(v)
            elif cap[e] is None or f[e] < cap[e]:
                row.append(v)
        succ.append(row)
    alive = bytearray(1 - d for d in dead)
    return ResidualView(succ, alive)


def reachable_mask(view: ResidualView, origin: int) -> bytearray:
    seen = bytearray(view.n)
    seen[origin] = 1
    stack = [origin]
    succ = view.succ
    while stack:
        u = stack.pop()
        for v in succ[u]:
            if not seen[v]:
                seen[v] = 1
                stack.append(v)
    return seen


def reachable_from(view: ResidualView, origin: int) -> set[int]:
    mask = reachable_mask(view, origin)
    return {v for v in range(view.n) if mask[v]}


@dataclass
class SccDecomposition:
    comp: list[int]  # component id per node, -1 outside the restriction
    components: list[list[int]]  # topological order of the condensation
    successors: list[int]  # number of distinct successor components

    def is_tail(self, c: int) -> bool:
        return self.successors[c] == 0

    @property
    def tails(self) -> list[int]:
        return [c for c in range(len(self.components)) if self.successors[c] == 0]


def scc_condense(view: ResidualView, restricted_to: Optional[Iterable[int]] = None) -> SccDecomposition:
    """Tarjan's algorithm, iterative.

    Arcs leaving ``restricted_to`` are dropped entirely, so tail status is
    relative to the induced subgraph.
    """
    n = view.n
    if restricted_to is None:
        inside = bytearray(view.alive)
    else:
        inside = bytearray(n)
        for v in restricted_to:
            inside[v] = 1
    succ = view.succ
    index = [-1] * n
    low = [0] * n
    on_stack = bytearray(n)
    comp = [-1] * n
    stack: list[int] = []
    emitted: list[list[int]] = []
    counter = 0
    for root in range(n):
        if not inside[root] or index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = 1
        while work:
            u, i = work[-1]
            row = succ[u]
            pushed = False
            while i < len(row):
                v = row[i]
                i += 1
                if not inside[v]:
                    continue
                if index[v] == -1:
                    work[-1] = (u, i)
                    index[v] = low[v] = counter
                    counter += 1
                    stack.append(v)
                    on_stack[v] = 1
                    work.append((v, 0))
                    pushed = True
                    break
                if on_stack[v] and index[v] < low[u]:
                    low[u] = index[v]
            if pushed:
                continue
            work.pop()
            if work:
                p = work[-1][0]
                if low[u] < low[p]:
                    low[p] = low[u]
            if low[u] == index[u]:
                members = []
                cid = len(emitted)
                while True:
                    w = stack.pop()
                    on_stack[w] = 0
                    comp[w] = cid
                    members.append(w)
                    if w == u:
                        break
                emitted.append(members)
    # Tarjan emits sinks first; renumber so ids follow topological order.
    total = len(emitted)
    components = emitted[::-1]
    for v in range(n):
        if comp[v] != -1:
            comp[v] = total - 1 - comp[v]
    successors = [0] * total
    mark = [-1] * total
    for c, members in enumerate(components):
        for u in members:
            for v in succ[u]:
                d = comp[v] if inside[v] else -1
                if d != -1 and d != c and mark[d] != c:
                    mark[d] = c
                    successors[c] += 1
    return SccDecomposition(comp, components, successors)


def _find_augmenting_path(net: DirectedNet, fs: FlowState) -> Optional[list[int]]:
    s, t = net.source, net.sink
    to, cap, flow, dead, out = net.to, net.cap, fs.flow, fs.dead, net.out
    if dead[s] or dead[t]:
        return None
    via = [-1] * net.n
    seen = bytearray(net.n)
    seen[s] = 1
    pos = [0] * net.n
    stack = [s]
    while stack:
        u = stack[-1]
        if u == t:
            break
        row = out[u]
        i = pos[u]
        advanced = False
        while i < len(row):
            a = row[i]
            i += 1
            v = to[a]
            if seen[v] or dead[v]:
                continue
            e = a >> 1
            if a & 1:
                if flow[e] <= 0:
                    continue
            elif cap[e] is not None and flow[e] >= cap[e]:
                continue
            pos[u] = i
            seen[v] = 1
            via[v] = a
            stack.append(v)
            advanced = True
            break
        if not advanced:
            pos[u] = i
            stack.pop()
    if not seen[t]:
        return None
    path = []
    v = t
    while v != s:
        a = via[v]
        path.append(a)
        v = to[a ^ 1]
    path.reverse()
    return path


def augment_to_max(net: DirectedNet, flow: FlowState, limit: Optional[int] = None) -> int:
    """Ford-Fulkerson with DFS augmenting paths; mutates ``flow`` in place.

    Returns the increase in amount.  With ``limit`` set, stops as soon as the
    amount exceeds it (callers treat that as "too big").
    """
    start = flow.amount
    f, cap = flow.flow, net.cap
    while limit is None or flow.amount <= limit:
        path = _find_augmenting_path(net, flow)
        if path is None:
            break
        bottleneck = None
        for a in path:
            e = a >> 1
            if a & 1:
                r = f[e]
            elif cap[e] is None:
                continue
            else:
                r = cap[e] - f[e]
            if bottleneck is None or r < bottleneck:
                bottleneck = r
        if bottleneck is None:
            raise UnboundedFlowError("s-t path of unbounded arcs")
        for a in path:
            if a & 1:
                f[a >> 1] -= bottleneck
            else:
                f[a >> 1] += bottleneck
        flow.amount += bottleneck
    return flow.amount - start


def _positive_in_arc(net, f, u, ptr) -> int:
    row = net.out[u]
    i = ptr.get(u, 0)
    while i < len(row):
        a = row[i]
        if a & 1 and f[a >> 1] > 0:
            ptr[u] = i
            return a >> 1
        i += 1
    ptr[u] = i
    return -1


def _positive_out_arc(net, f, u, ptr) -> int:
    row = net.out[u]
    i = ptr.get(u, 0)
    while i < len(row):
        a = row[i]
        if not a & 1 and f[a >> 1] > 0:
            ptr[u] = i
            return a >> 1
        i += 1
    ptr[u] = i
    return -1


def remove_node_flow(net: DirectedNet, flow: FlowState, node: int) -> int:
    """Cancel every unit of flow through ``node`` along whole s-t paths.

    Walks backwards to the source and forwards to the sink along
    positive-flow arcs; flow cycles met on the way are cancelled on the spot.
    Returns the amount removed from the s-t flow.
    """
    s, t = net.source, net.sink
    if node == s or node == t:
        raise ValueError("cannot strip the source or the sink")
    f = flow.flow
    in_ptr: dict[int, int] = {}
    out_ptr: dict[int, int] = {}
    removed = 0
    while True:
        first = _positive_in_arc(net, f, node, in_ptr)
        if first == -1:
            break
        # backward walk: arcs listed from node towards the source
        back = [first]
        where = {node: 0}
        u = net.tail[first]
        cycle = None
        while u != s:
            if u in where:
                cycle = back[where[u]:]
                break
            where[u] = len(back)
            e = _positive_in_arc(net, f, u, in_ptr)
            if e == -1:
                raise AssertionError(f"conservation broken at node {u}")
            back.append(e)
            u = net.tail[e]
        if cycle is not None:
            b = min(f[e] for e in cycle)
            for e in cycle:
                f[e] -= b
            continue
        fwd = []
        where = {node: 0}
        u = node
        while u != t:
            e = _positive_out_arc(net, f, u, out_ptr)
            if e == -1:
                raise AssertionError(f"conservation broken at node {u}")
            fwd.append(e)
            u = net.head[e]
            if u in where:
                cycle = fwd[where[u]:]
                break
            where[u] = len(fwd)
        if cycle is not None:
            b = min(f[e] for e in cycle)
            for e in cycle:
                f[e] -= b
            continue
        path = back + fwd
        b = min(f[e] for e in path)
        for e in path:
            f[e] -= b
        removed += b
    # the walk above only drains in-flow; whatever leaves node now is a cycle
    # remnant, which cannot exist once in-flow is zero under conservation
    flow.amount -= removed
    return removed
