import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, maximum_flow

from abovelp.flownet import (
    DirectedNet,
    FlowState,
    UnboundedFlowError,
    augment_to_max,
    fmt_doubled,
    reachable_from,
    remove_node_flow,
    residual,
    scc_condense,
    to_doubled,
)
from abovelp.vclp import VcInstance, build_network, dual_to_flow

S, T, A, B, C = 0, 1, 2, 3, 4


def test_single_path():
    net = DirectedNet(3, S, T)
    net.add_arc(S, A, 1)
    net.add_arc(A, T, 1)
    fs = FlowState(net)
    assert augment_to_max(net, fs) == 1
    assert fs.amount == 1
    fs.check()


def test_second_disjoint_path():
    net = DirectedNet(4, S, T)
    sa, sb = net.add_arc(S, A, 1), net.add_arc(S, B, 1)
    at, bt = net.add_arc(A, T, 1), net.add_arc(B, T, 1)
    fs = FlowState(net)
    fs.flow[sa] = fs.flow[at] = 1
    fs.amount = 1
    assert augment_to_max(net, fs) == 1
    assert fs.amount == 2
    assert fs.flow[sb] == fs.flow[bt] == 1


def test_vclp_edge_network_max_flow():
    bundle = build_network(VcInstance([1, 2], [(0, 1)]))
    assert augment_to_max(bundle.net, bundle.flow) == 4
    bundle.flow.check()


def test_limit_stops_early():
    net = DirectedNet(4, S, T)
    for mid in (A, B):
        net.add_arc(S, mid, 1)
        net.add_arc(mid, T, 1)
    fs = FlowState(net)
    augment_to_max(net, fs, limit=0)
    assert fs.amount == 1  # first path that passes the limit


def test_unbounded_path_raises():
    net = DirectedNet(3, S, T)
    net.add_arc(S, A, None)
    net.add_arc(A, T, None)
    with pytest.raises(UnboundedFlowError):
        augment_to_max(net, FlowState(net))


def test_residual_saturated_and_partial():
    net = DirectedNet(3, S, T)
    net.add_arc(S, A, 2)
    net.add_arc(A, T, 4)
    fs = FlowState(net)
    fs.flow[:] = [2, 2]
    fs.amount = 2
    view = residual(net, fs)
    assert view.succ[S] == []
    assert sorted(view.succ[A]) == [S, T]


def test_residual_of_zero_flow_is_the_network():
    net = DirectedNet(4, S, T)
    net.add_arc(S, A, 1)
    net.add_arc(A, B, None)
    net.add_arc(B, T, 3)
    view = residual(net, FlowState(net))
    assert view.succ == [[A], [], [B], [T]]


def test_reachability():
    net = DirectedNet(5, S, T)
    assert reachable_from(residual(net, FlowState(net)), A) == {A}
    net.add_arc(A, B, 1)
    net.add_arc(B, C, 1)
    assert reachable_from(residual(net, FlowState(net)), A) == {A, B, C}


def test_residual_of_weighted_edge_at_max_flow():
    bundle = build_network(VcInstance([1, 2], [(0, 1)]))
    augment_to_max(bundle.net, bundle.flow)
    lu, lv, ru, rv = bundle.l(0), bundle.l(1), bundle.r(0), bundle.r(1)
    assert reachable_from(residual(bundle.net, bundle.flow), S) == {S, lv, ru}
    assert lu not in {S, lv, ru} and rv not in {S, lv, ru}


def test_scc_two_cycle_and_chain():
    net = DirectedNet(4, S, T)
    net.add_arc(A, B, 1)
    net.add_arc(B, A, 1)
    scc = scc_condense(residual(net, FlowState(net)), [A, B])
    assert len(scc.components) == 1 and scc.tails == [0]

    net = DirectedNet(4, S, T)
    net.add_arc(A, B, 1)
    scc = scc_condense(residual(net, FlowState(net)), [A, B])
    assert len(scc.components) == 2
    assert [scc.components[c] for c in scc.tails] == [[B]]


def test_scc_tail_of_all_half_c4():
    inst = VcInstance([1] * 4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    bundle = build_network(inst)
    augment_to_max(bundle.net, bundle.flow)
    inner = range(2, 10)
    scc = scc_condense(residual(bundle.net, bundle.flow), inner)
    sides = [{bundle.l(0), bundle.l(2), bundle.r(1), bundle.r(3)}, {bundle.l(1), bundle.l(3), bundle.r(0), bundle.r(2)}]
    assert any(set(scc.components[c]) in sides for c in scc.tails)


def test_remove_node_on_single_path():
    net = DirectedNet(3, S, T)
    net.add_arc(S, A, 1)
    net.add_arc(A, T, 1)
    fs = FlowState(net)
    augment_to_max(net, fs)
    assert remove_node_flow(net, fs, A) == 1
    assert fs.amount == 0 and fs.flow == [0, 0]


def test_remove_node_keeps_other_paths():
    net = DirectedNet(4, S, T)
    for mid in (A, B):
        net.add_arc(S, mid, 2)
        net.add_arc(mid, T, 2)
    fs = FlowState(net)
    augment_to_max(net, fs)
    assert remove_node_flow(net, fs, A) == 2
    assert fs.amount == 2 and fs.flow[2] == fs.flow[3] == 2
    fs.check()


def test_remove_both_copies_in_triangle():
    bundle = build_network(VcInstance([1, 1, 1], [(0, 1), (1, 2), (0, 2)]))
    dual_to_flow(bundle, [1, 1, 1])
    assert bundle.flow.amount == 6
    bundle.kill(0)
    assert bundle.flow.amount == 2
    bundle.flow.check()
    # the surviving edge {1, 2} has lp 1, i.e. 4 in flow units
    augment_to_max(bundle.net, bundle.flow)
    assert bundle.flow.amount == 4


def test_half_parsing():
    assert to_doubled("1/2") == 1 and to_doubled("1.5") == 3 and to_doubled(2) == 4
    with pytest.raises(ValueError):
        to_doubled("1/3")
    assert fmt_doubled(3) == "3/2" and fmt_doubled(4) == "2"


# -- properties against scipy ------------------------------------------------

@st.composite
def networks(draw):
    n = draw(st.integers(2, 8))
    arcs = draw(st.lists(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(0, 6)), max_size=20))
    return n, [(u, v, c) for u, v, c in arcs if u != v]


def _build(n, arcs):
    net = DirectedNet(n, 0, 1)
    for u, v, c in arcs:
        net.add_arc(u, v, c)
    return net


@settings(max_examples=150, deadline=None)
@given(networks())
def test_max_flow_matches_scipy(net_arcs):
    n, arcs = net_arcs
    net = _build(n, arcs)
    fs = FlowState(net)
    augment_to_max(net, fs)
    fs.check()
    dense = np.zeros((n, n), dtype=np.int32)
    for u, v, c in arcs:
        dense[u, v] += c
    want = maximum_flow(csr_matrix(dense), 0, 1).flow_value
    assert fs.amount == want
    # max-flow certificate: the sink is not reachable in the residual graph
    assert 1 not in reachable_from(residual(net, fs), 0)


@settings(max_examples=150, deadline=None)
@given(networks(), st.integers(0, 7))
def test_remove_node_keeps_a_valid_flow(net_arcs, node):
    n, arcs = net_arcs
    node = node % n
    if node in (0, 1):
        return
    net = _build(n, arcs)
    fs = FlowState(net)
    augment_to_max(net, fs)
    before = fs.amount
    removed = remove_node_flow(net, fs, node)
    fs.dead[node] = 1
    fs.check()
    assert fs.amount == before - removed
    through = sum(f for e, f in enumerate(fs.flow) if net.head[e] == node)
    assert through == 0


@settings(max_examples=150, deadline=None)
@given(networks())
def test_scc_matches_scipy(net_arcs):
    n, arcs = net_arcs
    net = _build(n, arcs)
    view = residual(net, FlowState(net))
    scc = scc_condense(view, range(n))
    dense = np.zeros((n, n), dtype=np.int8)
    for u in range(n):
        for v in view.succ[u]:
            dense[u, v] = 1
    k, labels = connected_components(csr_matrix(dense), directed=True, connection="strong")
    assert len(scc.components) == k
    for u in range(n):
        for v in range(n):
            assert (scc.comp[u] == scc.comp[v]) == (labels[u] == labels[v])
    # topological order: arcs never point to an earlier component
    for u in range(n):
        for v in view.succ[u]:
            assert scc.comp[v] >= scc.comp[u]
