"""Node Multiway Cut by branching on farthest minimum isolating cuts.

Vertex ``v`` is split into ``v_in`` (node ``2 + 2v``) and ``v_out``
(``3 + 2v``) joined by an arc of capacity 1, or unbounded for terminals and
for vertices merged into the current terminal.  Every vertex also owns an
arc from the source whose capacity is 0 until the vertex is merged; merging
is just flipping those two capacities, so the flow survives it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .flownet import DirectedNet, FlowState, augment_to_max, remove_node_flow, residual

SOURCE, SINK = 0, 1


class TooBigError(Exception):
    """The minimum isolating cut is larger than the budget."""


@dataclass
class MultiwayInstance:
    n: int
    edges: list
    terminals: list

    def __post_init__(self):
        seen = set()
        for u, v in self.edges:
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"bad edge {(u, v)}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        self.terminals = sorted(set(self.terminals))
        if any(not 0 <= t < self.n for t in self.terminals):
            raise ValueError("terminal out of range")

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


@dataclass
class IsolatingCutResult:
    cut: list[int]
    region: list[int]
    amount: int


@dataclass
class MultiwayStats:
    nodes: int = 0
    branches: int = 0
    max_depth: int = 0
    augmentations: int = 0
    measure_checks: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


class IsolationState:
    """Split-vertex network for one terminal, with its current max flow."""

    def __init__(self, inst: MultiwayInstance, adj, t: int, alive: bytearray):
        n = inst.n
        self.inst, self.adj, self.t = inst, adj, t
        self.terminal = bytearray(n)
        for x in inst.terminals:
            self.terminal[x] = 1
        self.merged = bytearray(n)
        self.merged[t] = 1
        self.alive = alive
        net = DirectedNet(2 * n + 2, SOURCE, SINK)
        self.split = [net.add_arc(2 + 2 * v, 3 + 2 * v, None if self.terminal[v] else 1) for v in range(n)]
        self.feed = [net.add_arc(SOURCE, 2 + 2 * v, None if v == t else 0) for v in range(n)]
        for x in inst.terminals:
            if x != t:
                net.add_arc(2 + 2 * x, SINK, None)
        for u, v in inst.edges:
            net.add_arc(3 + 2 * u, 2 + 2 * v, None)
            net.add_arc(3 + 2 * v, 2 + 2 * u, None)
        self.net = net
        self.flow = FlowState(net)
        for v in range(n):
            if not alive[v]:
                self.flow.dead[2 + 2 * v] = self.flow.dead[3 + 2 * v] = 1

    def copy(self) -> "IsolationState":
        other = IsolationState.__new__(IsolationState)
        other.inst, other.adj, other.t = self.inst, self.adj, self.t
        other.terminal = self.terminal
        other.merged = bytearray(self.merged)
        other.alive = bytearray(self.alive)
        other.split, other.feed = self.split, self.feed
        other.net = self.net.with_own_capacities()
        f = self.flow
        other.flow = FlowState(other.net, list(f.flow), f.amount, bytearray(f.dead))
        return other

    @property
    def amount(self) -> int:
        return self.flow.amount

    def touches_terminal(self) -> bool:
        """Whether the merged vertex set is adjacent to another live terminal."""
        for u in range(self.inst.n):
            if self.merged[u]:
                for v in self.adj[u]:
                    if self.alive[v] and self.terminal[v] and v != self.t:
                        return True
        return False

    def maximize(self, limit: Optional[int] = None) -> int:
        return augment_to_max(self.net, self.flow, limit)

    def merge(self, vs) -> None:
        cap = self.net.cap
        for v in vs:
            self.merged[v] = 1
            cap[self.split[v]] = None
            cap[self.feed[v]] = None

    def delete(self, v: int) -> int:
        removed = remove_node_flow(self.net, self.flow, 2 + 2 * v)
        removed += remove_node_flow(self.net, self.flow, 3 + 2 * v)
        self.flow.dead[2 + 2 * v] = self.flow.dead[3 + 2 * v] = 1
        self.alive[v] = 0
        return removed

    def sink_side(self) -> bytearray:
        """Nodes that still reach the sink in the residual graph."""
        view = residual(self.net, self.flow)
        pred: list[list[int]] = [[] for _ in range(self.net.n)]
        for u, row in enumerate(view.succ):
            for v in row:
                pred[v].append(u)
        mark = bytearray(self.net.n)
        mark[SINK] = 1
        queue = deque([SINK])
        while queue:
            u = queue.popleft()
            for p in pred[u]:
                if not mark[p]:
                    mark[p] = 1
                    queue.append(p)
        return mark

    def region_of_t(self, blocked) -> list[int]:
        seen = {self.t}
        queue = deque(v for v in range(self.inst.n) if self.merged[v] and self.alive[v])
        seen.update(queue)
        while queue:
            u = queue.popleft()
            for v in self.adj[u]:
                if self.alive[v] and v not in seen and v not in blocked:
                    seen.add(v)
                    queue.append(v)
        return sorted(seen)

    def farthest_cut(self) -> IsolatingCutResult:
        mark = self.sink_side()
        cut = [v for v in range(self.inst.n)
               if self.alive[v] and not mark[2 + 2 * v] and mark[3 + 2 * v]]
        assert len(cut) == self.amount, "cut size differs from the flow amount"
        region = self.region_of_t(set(cut))
        for v in region:
            assert not mark[2 + 2 * v] and not mark[3 + 2 * v], "region vertex on the sink side"
        return IsolatingCutResult(cut, region, self.amount)

    def neighborhood(self) -> list[int]:
        out = set()
        for u in range(self.inst.n):
            if self.merged[u] and self.alive[u]:
                out.update(v for v in self.adj[u] if self.alive[v] and not self.merged[v])
        return sorted(out)


def min_isolating_flow(inst: MultiwayInstance, t: int, k: Optional[int] = None,
                       alive: Optional[bytearray] = None) -> IsolationState:
    """Max flow from ``t`` to the other terminals; ``TooBigError`` once it passes ``k``."""
    if t not in inst.terminals:
        raise ValueError(f"{t} is not a terminal")
    alive = bytearray([1]) * inst.n if alive is None else alive
    st = IsolationState(inst, inst.adjacency(), t, alive)
    if st.touches_terminal():
        raise ValueError("terminal adjacent to another terminal")
    st.maximize(k)
    if k is not None and st.amount > k:
        raise TooBigError(st.amount)
    return st


def farthest_min_isolating_cut(st: IsolationState) -> IsolatingCutResult:
    return st.farthest_cut()


def contract_region(n: int, edges, t: int, region) -> list[tuple[int, int]]:
    """Edge list after merging ``region`` into ``t`` (graph-level helper)."""
    reg = set(region)
    out = set()
    for u, v in edges:
        u2 = t if u in reg else u
        v2 = t if v in reg else v
        if u2 != v2:
            out.add((min(u2, v2), max(u2, v2)))
    return sorted(out)


def solve_multiway(inst: MultiwayInstance, k: int,
                   stats: Optional[MultiwayStats] = None) -> tuple[Optional[list[int]], MultiwayStats]:
    """A multiway cut of at most ``k`` non-terminals, or ``None``."""
    stats = MultiwayStats() if stats is None else stats
    adj = inst.adjacency()
    terms = inst.terminals

    def next_terminal(alive: bytearray, ti: int, ell: int, cut: list[int], depth: int):
        # skip terminals that are already cut off; drop what they can still reach
        while True:
            live_terms = [x for x in terms[ti:] if alive[x]]
            if len(live_terms) <= 1:
                return list(cut)
            t = terms[ti]
            st = IsolationState(inst, adj, t, bytearray(alive))
            if st.touches_terminal():
                return None
            st.maximize(ell)
            if st.amount > ell:
                return None
            if st.amount == 0:
                for v in st.region_of_t(()):
                    alive[v] = 0
                ti += 1
                continue
            return branch(st, ti, ell, cut, depth)

    def branch(st: IsolationState, ti: int, ell: int, cut: list[int], depth: int):
        stats.nodes += 1
        stats.max_depth = max(stats.max_depth, depth)
        lam = st.amount
        if lam == 0:
            for u in st.region_of_t(()):
                st.alive[u] = 0
            return next_terminal(st.alive, ti + 1, ell, cut, depth)
        if lam > ell:
            return None
        res = st.farthest_cut()
        st.merge(res.region)
        assert st.neighborhood() == sorted(res.cut), "cut is not the neighbourhood after merging"
        v = res.cut[0]
        measure = 2 * ell - lam

        # v joins the cut
        stats.branches += 1
        left = st.copy()
        removed = left.delete(v)
        assert removed == 1 and left.maximize() == 0
        stats.measure_checks += 1
        assert 2 * (ell - 1) - left.amount < measure
        found = branch(left, ti, ell - 1, cut + [v], depth + 1)
        if found is not None:
            return found

        # v is merged into t
        stats.branches += 1
        right = st
        right.merge([v])
        if right.touches_terminal():
            return None
        delta = right.maximize(ell)
        stats.augmentations += delta
        stats.measure_checks += 1
        assert delta >= 1, "merging a cut vertex must raise the isolating cut"
        assert 2 * ell - right.amount < measure
        return branch(right, ti, ell, cut, depth + 1)

    if k < 0:
        return None, stats
    found = next_terminal(bytearray([1]) * inst.n, 0, k, [], 0)
    return (sorted(found) if found is not None else None), stats


def solve_multiway_auto(inst: MultiwayInstance) -> tuple[Optional[list[int]], MultiwayStats, int]:
    """Minimum multiway cut by trying k = 0, 1, ...; ``None`` if terminals touch."""
    others = inst.n - len(inst.terminals)
    for k in range(others + 1):
        cut, stats = solve_multiway(inst, k)
        if cut is not None:
            return cut, stats, k
    return None, MultiwayStats(), -1


def is_multiway_cut(inst: MultiwayInstance, cut) -> bool:
    gone = set(cut)
    if gone & set(inst.terminals):
        return False
    adj = inst.adjacency()
    owner = [-1] * inst.n
    for t in inst.terminals:
        if owner[t] != -1:
            return False
        owner[t] = t
        queue = deque([t])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v in gone:
                    continue
                if owner[v] == -1:
                    owner[v] = t
                    queue.append(v)
                elif owner[v] != t:
                    return False
    return True
