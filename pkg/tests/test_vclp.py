import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from abovelp import oracle
from abovelp.flownet import augment_to_max
from abovelp.vclp import (
    SINK,
    SOURCE,
    InfeasibleDualError,
    VcInstance,
    build_network,
    compute_vc_pair,
    dual_to_flow,
    fix_tail_sccs,
    flow_to_dual,
    lp_value_doubled,
    peel_integral,
    primal_from_residual,
)

K3 = [(0, 1), (1, 2), (0, 2)]
C4 = [(0, 1), (1, 2), (2, 3), (3, 0)]


def _arcs(bundle):
    net = bundle.net
    return sorted((net.tail[e], net.head[e], net.cap[e]) for e in range(net.num_arcs))


def _max(inst):
    bundle = build_network(inst)
    augment_to_max(bundle.net, bundle.flow)
    return bundle


def test_network_of_single_edge():
    b = build_network(VcInstance([1, 1], [(0, 1)]))
    lu, lv, ru, rv = b.l(0), b.l(1), b.r(0), b.r(1)
    assert _arcs(b) == sorted([
        (SOURCE, lu, 2), (SOURCE, lv, 2), (lu, rv, None), (lv, ru, None), (ru, SINK, 2), (rv, SINK, 2)])


def test_network_of_isolated_vertex():
    b = build_network(VcInstance([1], []))
    assert _arcs(b) == sorted([(SOURCE, b.l(0), 2), (b.r(0), SINK, 2)])


def test_network_of_triangle_has_six_inner_arcs():
    b = build_network(VcInstance([1] * 3, K3))
    assert sum(1 for u, v, c in _arcs(b) if c is None) == 6


def test_rejects_bad_instances():
    with pytest.raises(ValueError):
        VcInstance([1], [(0, 0)])
    with pytest.raises(ValueError):
        VcInstance([-1], [])


def test_dual_to_flow_examples():
    b = build_network(VcInstance([1, 1], [(0, 1)]))
    assert dual_to_flow(b, [2]).amount == 4  # y = 1 -> amount 2, doubled
    b = build_network(VcInstance([1, 1], [(0, 1)]))
    assert dual_to_flow(b, [0]).amount == 0
    b = build_network(VcInstance([1] * 3, K3))
    fs = dual_to_flow(b, [1, 1, 1])
    assert fs.amount == 6
    assert all(fs.flow[v] == b.net.cap[v] for v in range(3))
    fs.check()


def test_dual_to_flow_rejects_overload():
    b = build_network(VcInstance([1, 1], [(0, 1)]))
    with pytest.raises(InfeasibleDualError):
        dual_to_flow(b, [3])


def test_flow_to_dual_examples():
    assert flow_to_dual(build_network(VcInstance([1, 1], [(0, 1)]))) == [0]
    assert flow_to_dual(_max(VcInstance([1, 1], [(0, 1)]))) == [1]
    b = build_network(VcInstance([1] * 3, K3))
    dual_to_flow(b, [1, 1, 1])
    assert flow_to_dual(b) == [Fraction(1, 2)] * 3


def test_primal_examples():
    assert primal_from_residual(_max(VcInstance([1, 2], [(0, 1)]))) == [2, 0]
    assert primal_from_residual(_max(VcInstance([1] * 3, K3))) == [1, 1, 1]
    assert primal_from_residual(build_network(VcInstance([1], []))) == [0]


def test_peel_examples():
    b = _max(VcInstance([1, 2], [(0, 1)]))
    fixed, _ = peel_integral(b, primal_from_residual(b))
    assert fixed == {0: 1, 1: 0} and b.live_vertices() == []
    b = _max(VcInstance([1] * 3, K3))
    fixed, _ = peel_integral(b, primal_from_residual(b))
    assert fixed == {} and b.live_vertices() == [0, 1, 2]
    b = _max(VcInstance([1, 1, 1], [(0, 1)]))
    fixed, _ = peel_integral(b, primal_from_residual(b))
    assert fixed.get(2) == 0


def test_tail_fixing_examples():
    b = build_network(VcInstance([1] * 4, C4))
    dual_to_flow(b, [1, 1, 1, 1])  # all-half optimum, not unique
    fixed, _ = fix_tail_sccs(b)
    assert sorted(fixed.values()) == [0, 0, 1, 1]
    assert fixed[0] == fixed[2] != fixed[1] == fixed[3]
    assert b.live_vertices() == []

    b = build_network(VcInstance([1] * 3, K3))
    dual_to_flow(b, [1, 1, 1])
    assert fix_tail_sccs(b)[0] == {}

    b = build_network(VcInstance([1, 1], [(0, 1)]))
    dual_to_flow(b, [2])
    fixed, _ = fix_tail_sccs(b)
    assert sorted(fixed.values()) == [0, 1]


def test_compute_pair_examples():
    assert compute_vc_pair(VcInstance([1] * 3, K3)) == ([1, 1, 1], [1, 1, 1])
    x, y = compute_vc_pair(VcInstance([1] * 4, C4))
    assert lp_value_doubled(VcInstance([1] * 4, C4), x) == sum(y) == 4


# -- properties ----------------------------------------------------------------

@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=16)) if pairs else []
    weights = draw(st.lists(st.integers(0, 4), min_size=n, max_size=n))
    return n, edges, weights


@settings(max_examples=200, deadline=None)
@given(graphs())
def test_primal_is_lp_optimal(g):
    n, edges, weights = g
    inst = VcInstance(weights, edges)
    x, y = compute_vc_pair(inst)
    lp = oracle.vc_lp(n, edges, weights)[0]
    assert Fraction(lp_value_doubled(inst, x), 2) == lp == Fraction(sum(y), 2)
    assert all(x[u] + x[v] >= 2 for u, v in edges)


@settings(max_examples=200, deadline=None)
@given(graphs())
def test_dual_round_trip(g):
    n, edges, weights = g
    inst = VcInstance(weights, edges)
    _, y = compute_vc_pair(inst)
    b = build_network(inst)
    dual_to_flow(b, y).check()
    assert [int(2 * v) for v in flow_to_dual(b)] == y


@settings(max_examples=200, deadline=None)
@given(graphs())
def test_fixing_keeps_the_lp(g):
    """Fixed weight plus the lp of the rest equals the lp of the whole graph."""
    n, edges, weights = g
    inst = VcInstance(weights, edges)
    b = _max(inst)
    fixed, _ = peel_integral(b, primal_from_residual(b))
    more, _ = fix_tail_sccs(b)
    fixed.update(more)
    live = b.live_vertices()
    index = {v: i for i, v in enumerate(live)}
    rest = oracle.vc_lp(len(live), [(index[u], index[v]) for u, v in edges if u in index and v in index],
                        [weights[v] for v in live])[0]
    taken = sum(weights[v] for v, val in fixed.items() if val)
    assert taken + rest == oracle.vc_lp(n, edges, weights)[0]
    # no edge between two vertices fixed to 0
    for u, v in edges:
        assert fixed.get(u, 1) or fixed.get(v, 1)
    # the all-half vector is the unique optimum of what remains
    assert not oracle.vc_independent_tight_sets(n, edges, weights, alive=live)


def test_seeded_random_pairs_are_valid():
    rng = random.Random(4)
    for _ in range(100):
        edges, weights = oracle.random_graph(rng, 10, 20, 5)
        inst = VcInstance(weights, edges)
        x, y = compute_vc_pair(inst)
        assert lp_value_doubled(inst, x) == sum(y)
