import itertools

import pytest
from hypothesis import given

from causalsep import figures
from causalsep.errors import CyclicGraph
from causalsep.graph import Path, build_graph, enumerate_paths
from causalsep.roles import (
    Direction,
    NodeRole,
    classify_interior,
    dir_after,
    is_directed_path,
    triple_role,
)

from strategies import dags


def _path(g, *names):
    return Path.of([g.id(x) for x in names])


def test_boba_mediator():
    g = figures.boba()
    roles = classify_interior(_path(g, "finals", "students", "sales"), g)
    assert roles == {g.id("students"): NodeRole.MEDIATOR}


def test_partition_example_roles():
    g = figures.partition_example()
    roles = classify_interior(_path(g, "u", "t", "q", "r", "v"), g)
    assert {g.label(k): r for k, r in roles.items()} == {
        "t": NodeRole.MEDIATOR,
        "q": NodeRole.COLLIDER,
        "r": NodeRole.CONFOUNDER,
    }


def test_collider_role():
    g = figures.collider()
    assert classify_interior(_path(g, "u", "w", "v"), g) == {g.id("w"): NodeRole.COLLIDER}


def test_direction():
    g = figures.chain()
    p = _path(g, "x", "u", "y", "v")
    assert dir_after(p, g, g.id("u")) is Direction.FORWARD
    assert dir_after(p, g, g.id("v")) is None
    g6 = figures.partition_example()
    p6 = _path(g6, "u", "t", "q", "r", "v")
    assert dir_after(p6, g6, g6.id("r")) is Direction.FORWARD
    assert dir_after(p6, g6, g6.id("q")) is Direction.BACKWARD


def test_directed_paths():
    g = figures.chain()
    assert is_directed_path(_path(g, "x", "u", "y", "v"), g)
    assert not is_directed_path(_path(g, "v", "y", "u", "x"), g)
    g6 = figures.partition_example()
    assert not is_directed_path(_path(g6, "u", "t", "q", "r", "v"), g6)


def test_cyclic_graph_rejected():
    g = build_graph(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])
    with pytest.raises(CyclicGraph):
        classify_interior(Path.of([0, 1, 2]), g)


@given(dags())
def test_roles_exclusive_and_exhaustive(g):
    E = g.edge_set
    for u, v in itertools.combinations(g.nodes, 2):
        for p in enumerate_paths(g, u, v):
            ns = p.nodes
            roles = classify_interior(p, g)
            assert list(roles) == list(ns[1:-1])
            for a, b, c in zip(ns, ns[1:], ns[2:]):
                med = ((a, b) in E and (b, c) in E) or ((c, b) in E and (b, a) in E)
                con = (b, a) in E and (b, c) in E
                col = (a, b) in E and (c, b) in E
                assert med + con + col == 1
                want = NodeRole.MEDIATOR if med else NodeRole.CONFOUNDER if con else NodeRole.COLLIDER
                assert triple_role(g, a, b, c) is want is roles[b]
