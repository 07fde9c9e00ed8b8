import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from causalsep import figures
from causalsep.errors import ArityMismatch, CyclicGraph, DomainError, MissingUnobservedTerm
from causalsep.graph import build_graph
from causalsep.semantics import (
    BOOL,
    Constant,
    CopyParent,
    CopyUnobserved,
    EquateParents,
    GraphFunction,
    Rule,
    TruthTable,
    ValueDomain,
    evaluate,
    evaluate_many,
    integer_domain,
    node_value,
    properly_conditions,
    uniform,
)

from strategies import dags

XOR = Rule(lambda e, ps: ps[0] ^ ps[1], arity=2)


def _collider_world():
    g = figures.collider()
    return g, GraphFunction({0: CopyUnobserved(), 1: XOR, 2: CopyUnobserved()})


def test_collider_xor():
    g, f = _collider_world()
    assert evaluate(g, f, {0: 0, 2: 1, 1: 0}) == {0: 0, 2: 1, 1: 1}
    assert node_value(g, f, {0: 0, 2: 1, 1: 0}, 1) == 1


def test_copy_unobserved_is_identity():
    g = figures.partition_example()
    U = {w: w % 2 for w in g.nodes}
    assert evaluate(g, uniform(g, CopyUnobserved()), U) == U


def test_test_scores_integer_model():
    g = figures.test_scores()
    dom = integer_domain(4)
    add = Rule(lambda e, ps: min(ps[0] + e, 3), arity=1)
    weigh = Rule(lambda e, ps: min((6 * ps[0] + 4 * ps[1]) // 10 + e, 3), arity=2)
    f = GraphFunction(
        {
            g.id("sleep"): CopyUnobserved(),
            g.id("study"): CopyUnobserved(),
            g.id("focus"): add,
            g.id("score"): weigh,
        }
    )
    U = {g.id("sleep"): 1, g.id("study"): 1, g.id("focus"): 0, g.id("score"): 0}
    val = evaluate(g, f, U)
    assert val[g.id("focus")] == 1 and val[g.id("score")] == 1
    tab = f.tabulate(g, dom)
    assert evaluate(g, tab, U) == val


def test_chain_unrolls_to_root():
    g = figures.chain()
    f = GraphFunction([CopyUnobserved()] + [CopyParent(0)] * 3)
    for x in (0, 1):
        assert node_value(g, f, {0: x, 1: 0, 2: 1, 3: 0}, g.id("v")) == x


def test_properly_conditions():
    g, f = _collider_world()
    assert properly_conditions(g, f, {0: 0, 1: 0, 2: 1}, {})
    assert properly_conditions(g, f, {0: 0, 1: 0, 2: 1}, {1: 1})
    assert not properly_conditions(g, f, {0: 1, 1: 0, 2: 1}, {1: 1})


def test_errors():
    g, f = _collider_world()
    with pytest.raises(MissingUnobservedTerm):
        evaluate(g, f, {0: 0, 1: 0})
    with pytest.raises(ArityMismatch):
        evaluate(g, GraphFunction([CopyUnobserved(), CopyParent(0, arity=1), CopyUnobserved()]), {0: 0, 1: 0, 2: 0})
    with pytest.raises(CyclicGraph):
        evaluate(build_graph(["a", "b"], [("a", "b"), ("b", "a")]), uniform(g, CopyUnobserved()), {0: 0, 1: 0})
    with pytest.raises(DomainError):
        ValueDomain((1, 1))
    with pytest.raises(ArityMismatch):
        TruthTable(BOOL, 1, (0, 1, 0))


def test_truth_table_row_order():
    # unobserved term is the most significant digit
    t = TruthTable(BOOL, 1, (0, 0, 1, 0))
    assert t(1, [0]) == 1 and t(0, [0]) == 0 and t(1, [1]) == 0


def test_equate_parents():
    fn = EquateParents(0, 1, "same", "diff")
    assert fn(None, [1, 1]) == "same" and fn(None, [0, 1]) == "diff"


@given(dags(max_nodes=5), st.integers(0, 2**32 - 1))
def test_evaluate_many_matches_evaluate(g, seed):
    rng = np.random.default_rng(seed)
    kinds = [CopyUnobserved(), Constant(1), CopyParent(0), EquateParents(0, 1, 1, 0)]
    funcs = []
    for w in g.nodes:
        k = len(g._parents[w])
        pick = int(rng.integers(5))
        if pick < 4:
            funcs.append(kinds[pick])
        else:
            funcs.append(TruthTable(BOOL, k, tuple(int(x) for x in rng.integers(0, 2, 2 ** (k + 1)))))
    f = GraphFunction(funcs)
    U = rng.integers(0, 2, size=(20, len(g)))
    got = evaluate_many(g, f, U)
    for row, out in zip(U, got):
        val = evaluate(g, f, {w: int(x) for w, x in enumerate(row)})
        assert [val[w] for w in g.nodes] == out.tolist()


def test_evaluate_many_falls_back_for_rules():
    g, f = _collider_world()
    U = np.array(list(itertools.product((0, 1), repeat=3)))
    got = evaluate_many(g, f, U)
    assert (got[:, 1] == U[:, 0] ^ U[:, 2]).all()
