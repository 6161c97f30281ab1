"""Vertex Cover Above LP by branching on a max flow that is kept up to date.

Budgets and LP values are doubled integers, like everything else in the
package: a budget of ``k_d`` allows covers of weight up to ``lp + k_d / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .flownet import augment_to_max
from .vclp import (
    VcFlowBundle,
    VcInstance,
    build_network,
    compute_vc_pair,
    dual_to_flow,
    fix_tail_sccs,
    peel_integral,
    primal_from_residual,
)


class InvalidPairError(ValueError):
    pass


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0
    branches: int = 0
    augmentations: int = 0
    max_depth: int = 0

    def as_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "leaves": self.leaves,
            "branches": self.branches,
            "augmentations": self.augmentations,
            "max_depth": self.max_depth,
        }


@dataclass
class VcSolution:
    cover: list[int]
    weight: int
    lp_doubled: int
    certified: bool = True

    @property
    def gap_doubled(self) -> int:
        return 2 * self.weight - self.lp_doubled

    @property
    def lp(self) -> Fraction:
        return Fraction(self.lp_doubled, 2)


@dataclass
class BranchEvent:
    """One child created in part (III); used by tests to audit the budget."""

    parent_live: tuple[int, ...]
    parent_selected_weight: int
    vertex: int
    delta: int  # flow increase, doubled units
    depth: int


def verify_pair(inst: VcInstance, x: Sequence[int], y: Sequence[int]) -> int:
    """Check a doubled (primal, dual) pair is feasible with equal values.

    Returns the doubled LP value; raises ``InvalidPairError`` with a report.
    """
    problems = []
    if len(x) != inst.n:
        raise InvalidPairError(f"primal has {len(x)} entries, instance has {inst.n} vertices")
    if len(y) != len(inst.edges):
        raise InvalidPairError(f"dual has {len(y)} entries, instance has {len(inst.edges)} edges")
    for v, xv in enumerate(x):
        if xv < 0:
            problems.append(f"x[{v}] < 0")
    for i, (u, v) in enumerate(inst.edges):
        if x[u] + x[v] < 2:
            problems.append(f"edge ({u},{v}) uncovered: x_u + x_v = {Fraction(x[u] + x[v], 2)}")
        if y[i] < 0:
            problems.append(f"y[{u},{v}] < 0")
    load = [0] * inst.n
    for i, (u, v) in enumerate(inst.edges):
        load[u] += y[i]
        load[v] += y[i]
    for v in range(inst.n):
        if load[v] > 2 * inst.weights[v]:
            problems.append(f"dual constraint of vertex {v} violated")
    primal = sum(w * xv for w, xv in zip(inst.weights, x))
    dual = sum(y)
    if not problems and primal != dual:
        problems.append(f"primal value {Fraction(primal, 2)} != dual value {Fraction(dual, 2)}")
    if problems:
        raise InvalidPairError("; ".join(problems))
    return primal


def branch_fix_one(bundle: VcFlowBundle, v: int) -> int:
    """Put ``v`` into the cover, repair the flow and return the augmentation.

    The LP value of the subproblem grows by half the returned flow increase.
    """
    if not bundle.alive[v]:
        raise ValueError(f"vertex {v} is not live")
    bundle.kill(v)
    return augment_to_max(bundle.net, bundle.flow)


def solve_above_lp(
    inst: VcInstance,
    pair: tuple[Sequence[int], Sequence[int]],
    k: int,
    on_branch: Optional[Callable[[BranchEvent], None]] = None,
) -> tuple[Optional[VcSolution], SearchStats]:
    """Minimum-weight vertex cover of weight at most ``lp + k/2``, or ``None``."""
    x0, y0 = pair
    lp_d = verify_pair(inst, x0, y0)
    stats = SearchStats()
    root = build_network(inst)
    dual_to_flow(root, y0)

    edges = inst.edges
    order = sorted(range(len(edges)), key=lambda i: (min(edges[i]), max(edges[i])))
    weights = inst.weights
    best: list = [None]
    limit = [k]

    def search(bundle: VcFlowBundle, selected: list[int], sel_w: int, consumed: int, depth: int) -> None:
        stats.nodes += 1
        stats.max_depth = max(stats.max_depth, depth)
        # part (I): read the optimal primal and fix integral coordinates
        x = primal_from_residual(bundle)
        fixed, _ = peel_integral(bundle, x)
        # part (II): fix tail components until all-half is the unique optimum
        more, _ = fix_tail_sccs(bundle)
        fixed.update(more)
        for v, val in fixed.items():
            if val:
                selected.append(v)
                sel_w += weights[v]
        # part (III)
        alive = bundle.alive
        pick = None
        for i in order:
            u, v = edges[i]
            if alive[u] and alive[v]:
                pick = (min(u, v), max(u, v))
                break
        if pick is None:
            stats.leaves += 1
            assert 2 * sel_w == lp_d + consumed, "cover weight disagrees with budget accounting"
            if best[0] is None or consumed < best[0][1]:
                best[0] = (sorted(selected), consumed)
                limit[0] = consumed - 1
            return
        live = tuple(bundle.live_vertices()) if on_branch else ()
        expanded = 0
        for v in pick:
            child = bundle.copy()
            delta = branch_fix_one(child, v)
            assert delta > 0 and delta % 2 == 0, f"flow increase {delta} after fixing {v}"
            stats.branches += 1
            stats.augmentations += delta
            if on_branch:
                on_branch(BranchEvent(live, sel_w, v, delta, depth))
            spent = consumed + delta // 2
            if spent > limit[0]:
                continue
            expanded += 1
            search(child, selected + [v], sel_w + weights[v], spent, depth + 1)
        if not expanded:
            stats.leaves += 1

    if k >= 0:
        search(root, [], 0, 0, 0)
    if best[0] is None:
        return None, stats
    cover, consumed = best[0]
    weight = sum(weights[v] for v in cover)
    return VcSolution(cover, weight, lp_d), stats


def solve_auto(
    inst: VcInstance,
    pair: Optional[tuple[Sequence[int], Sequence[int]]] = None,
) -> tuple[VcSolution, SearchStats, int]:
    """Iterative deepening over k = 0, 1/2, 1, ...; returns the optimum and its k."""
    if pair is None:
        pair = compute_vc_pair(inst)
    k = 0
    while True:
        sol, stats = solve_above_lp(inst, pair, k)
        if sol is not None:
            return sol, stats, k
        k += 1
        if k > 2 * sum(inst.weights) + 2:
            raise AssertionError("no cover found within the trivial budget")


def is_vertex_cover(inst: VcInstance, cover) -> bool:
    chosen = set(cover)
    return all(u in chosen or v in chosen for u, v in inst.edges)
