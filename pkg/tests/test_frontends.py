import random

import pytest
from hypothesis import given, settings, strategies as st

from abovelp import oracle
from abovelp.bip2 import InfeasibleInstanceError
from abovelp.frontends import (
    PROBLEMS,
    Almost2Sat,
    AlmostBoolean2Csp,
    CliqueComplement,
    DirectedMinUncut,
    EdgeBipartization,
    Generalized2Sat,
    GeneralizedVertexCover,
    MinSat,
    OddCycleTransversal,
    ProblemSolution,
    SplitVertexDeletion,
    VertexCoverProblem,
    solve_problem,
    verify,
)

K3 = [(0, 1), (1, 2), (0, 2)]
CONTRADICTION = [[1, 2], [-1, 2], [1, -2], [-1, -2]]


def _rows(inst):
    return [(c.a, c.i, c.b, c.j, c.c, None if c.d is None else c.d.base) for c in inst.cons]


def test_oct_single_vertex_encoding():
    inst, _ = OddCycleTransversal(1, []).encode()
    assert _rows(inst) == [(1, 0, 1, 1, 1, 1)]  # l + r + x >= 1 with x priced at w
    assert solve_problem(OddCycleTransversal(1, [])).solution.objective == 0


def test_a2sat_clause_with_a_negated_literal():
    # (v or not u) with u = var 1, v = var 2: x_v + (1 - x_u) + z >= 1
    inst, _ = Almost2Sat(2, [[2, -1]]).encode()
    assert _rows(inst) == [(1, 1, -1, 0, 0, 1)]


def test_vc_passthrough_is_one_hard_row():
    inst, _ = VertexCoverProblem(2, [(0, 1)]).encode()
    assert _rows(inst) == [(1, 0, 1, 1, 1, None)]


def test_fixed_optima():
    res = solve_problem(OddCycleTransversal(3, K3))
    assert res.solution.objective == 1 and len(res.solution.value) == 1
    res = solve_problem(Almost2Sat(2, CONTRADICTION))
    assert res.solution.objective == 1
    res = solve_problem(OddCycleTransversal(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))
    assert res.solution.value == [] and res.gap_doubled == 0


def test_verify_oct():
    p = OddCycleTransversal(3, K3)
    assert verify(p, ProblemSolution("oct", [1], 1)).ok
    rep = verify(p, ProblemSolution("oct", [], 0))
    assert not rep.ok and "odd cycle" in rep.violations[0]


def test_verify_flags_objective_mismatch():
    p = Almost2Sat(2, CONTRADICTION)
    rep = verify(p, ProblemSolution("a2sat", [0, 0], 0))
    assert not rep.ok and "claimed objective 0" in rep.violations[0]
    rep = verify(p, ProblemSolution("a2sat", [0], 1))
    assert not rep.ok


def test_input_validation():
    with pytest.raises(ValueError):
        OddCycleTransversal(2, [(0, 0)])
    with pytest.raises(ValueError):
        Almost2Sat(2, [[1, 2, -1]])
    with pytest.raises(ValueError):
        GeneralizedVertexCover(2, [(0, 1)], None, [(0, 1, 2)])


def test_registry_lists_every_problem():
    assert set(PROBLEMS) == {"vc", "oct", "a2sat", "edge-bip", "minsat", "gvc", "g2sat", "clique-comp",
                             "ab2csp", "dir-uncut", "split-del"}


def test_unsatisfiable_hard_problem():
    with pytest.raises(InfeasibleInstanceError):
        solve_problem(Generalized2Sat(1, [[1, 1], [-1, -1]]))


# -- random problems against brute force -------------------------------------------

def _graph(rng, n, m):
    return oracle.random_graph(rng, n, m, 3)


def _make(kind, rng):
    if kind == "vc":
        n = rng.randint(1, 8)
        e, w = _graph(rng, n, 12)
        return VertexCoverProblem(n, e, w)
    if kind == "oct":
        n = rng.randint(1, 8)
        e, w = _graph(rng, n, 14)
        return OddCycleTransversal(n, e, w)
    if kind == "a2sat":
        nv = rng.randint(1, 6)
        cl = oracle.random_2cnf(rng, nv, rng.randint(1, 10))
        return Almost2Sat(nv, cl, [rng.randint(1, 3) for _ in cl])
    if kind == "edge-bip":
        n = rng.randint(2, 7)
        e, _ = _graph(rng, n, 12)
        return EdgeBipartization(n, e, [rng.randint(1, 3) for _ in e])
    if kind == "minsat":
        nv = rng.randint(1, 5)
        cl = [[rng.choice((-1, 1)) * rng.randint(1, nv) for _ in range(rng.randint(1, 3))]
              for _ in range(rng.randint(1, 6))]
        return MinSat(nv, cl, [rng.randint(1, 3) for _ in cl])
    if kind == "gvc":
        n = rng.randint(1, 7)
        e, w = _graph(rng, n, 10)
        d = []
        for _ in e:
            t = sorted((rng.randint(0, 4) for _ in range(3)), reverse=True)
            d.append(tuple(t))
        return GeneralizedVertexCover(n, e, w, d)
    if kind == "g2sat":
        nv = rng.randint(1, 6)
        cl = oracle.random_2cnf(rng, nv, rng.randint(0, 6))
        return Generalized2Sat(nv, cl, [rng.randint(0, 3) for _ in range(nv)])
    if kind == "clique-comp":
        n = rng.randint(1, 7)
        e, w = _graph(rng, n, 18)
        return CliqueComplement(n, e, w)
    if kind == "ab2csp":
        nv = rng.randint(2, 5)
        cons = []
        for _ in range(rng.randint(1, 6)):
            if rng.random() < 0.3:
                vs = (rng.randrange(nv),)
                allowed = [(b,) for b in (0, 1) if rng.random() < 0.6]
            else:
                vs = tuple(rng.sample(range(nv), 2))
                allowed = [(p, q) for p in (0, 1) for q in (0, 1) if rng.random() < 0.6]
            cons.append((vs, allowed))
        return AlmostBoolean2Csp(nv, cons, [rng.randint(1, 3) for _ in cons])
    if kind == "dir-uncut":
        n = rng.randint(2, 6)
        arcs = list({(u, v) for u, v in ((rng.randrange(n), rng.randrange(n)) for _ in range(8)) if u != v})
        arcs.sort()
        return DirectedMinUncut(n, arcs, [rng.randint(1, 3) for _ in arcs])
    if kind == "split-del":
        n = rng.randint(1, 7)
        e, w = _graph(rng, n, 14)
        return SplitVertexDeletion(n, e, w)
    raise AssertionError(kind)


@pytest.mark.parametrize("kind", sorted(PROBLEMS))
def test_problem_matches_brute_force(kind):
    rng = random.Random(sum(map(ord, kind)))
    for idx in range(40):
        p = _make(kind, rng)
        want = oracle.brute_problem(p)
        if want is None:
            with pytest.raises(InfeasibleInstanceError):
                solve_problem(p)
            continue
        res = solve_problem(p)
        assert res.solution.objective == want, f"{kind} case {idx}"
        assert verify(p, res.solution).ok
        # the encoding alone already has the right optimum
        inst, _ = p.encode()
        assert oracle.bip2_ip(inst) == want


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(sorted(PROBLEMS)))
def test_tampered_solutions_are_rejected(seed, kind):
    rng = random.Random(seed)
    p = _make(kind, rng)
    if oracle.brute_problem(p) is None:
        return
    sol = solve_problem(p).solution
    bad = ProblemSolution(sol.kind, sol.value, sol.objective + 1)
    assert not verify(p, bad).ok
