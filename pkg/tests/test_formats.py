import random

import pytest
from hypothesis import given, settings, strategies as st

from abovelp import oracle
from abovelp.bip2 import Bip2Instance
from abovelp.formats import (
    ParseError,
    format_bip2,
    format_cnf,
    format_graph,
    parse_bip2,
    parse_cnf,
    parse_graph,
)


def test_graph_with_weights_and_terminals():
    text = "c tiny\np edge 3 2\ne 1 2\ne 2 3\nw 2 5\nt 1\nt 3\n"
    assert parse_graph(text) == (3, [(0, 1), (1, 2)], [1, 5, 1], [0, 2])


@pytest.mark.parametrize("text, line, col", [
    ("p edge 2 1\ne 1 3\n", 2, 5),
    ("p edge 2 1\ne 1 1\n", 2, 5),
    ("p edge 2 2\ne 1 2\ne 2 1\n", 3, 3),
    ("p edge 2 2\ne 1 2\n", 2, 1),
    ("e 1 2\n", 1, 1),
    ("p edge 2 1\ne 1 x\n", 2, 5),
])
def test_graph_errors_carry_positions(text, line, col):
    with pytest.raises(ParseError) as err:
        parse_graph(text)
    assert (err.value.line, err.value.col) == (line, col)


def test_cnf():
    assert parse_cnf("p cnf 2 2\n1 -2 0\n2\n0\n") == (2, [[1, -2], [2]])
    with pytest.raises(ParseError):
        parse_cnf("p cnf 2 1\n1 2 3 0\n", max_len=2)
    with pytest.raises(ParseError):
        parse_cnf("p cnf 2 1\n3 0\n")


def test_bip2():
    inst = parse_bip2("# x\nbip2 2 2\nv 1 1 B\nv 2 3 N\nc 1 1 1 2 1 H\nc -1 2 0 0 0 4\n")
    assert inst.weights == [1, 3] and inst.binary == [True, False]
    assert len(inst.cons) == 2 and inst.cons[1].unary and inst.cons[1].d.base == 4
    with pytest.raises(ParseError):
        parse_bip2("bip2 1 1\nv 1 1 B\nc 1 1 1 1 1 H\n")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_round_trips(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 9)
    edges, weights = oracle.random_graph(rng, n, 12, 5)
    terms = sorted(rng.sample(range(n), rng.randint(0, n)))
    assert parse_graph(format_graph(n, edges, weights, terms)) == (n, sorted(edges), weights, terms)

    clauses = oracle.random_2cnf(rng, n, rng.randint(0, 6))
    assert parse_cnf(format_cnf(n, clauses)) == (n, clauses)

    w, rows = oracle.random_bip2_rows(rng, n, rng.randint(0, 6), hard_p=0.0)
    inst = Bip2Instance(w, [rng.random() < 0.5 for _ in range(n)])
    for row in rows:
        inst.add(*row)
    again = parse_bip2(format_bip2(inst))
    assert again.weights == inst.weights and again.binary == inst.binary
    assert format_bip2(again) == format_bip2(inst)
