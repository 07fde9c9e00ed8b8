import itertools

import pytest
from hypothesis import given

from causalsep import figures
from causalsep.dags import all_graphs_on_skeletons
from causalsep.errors import (
    CyclicGraph,
    DuplicateNode,
    GraphTooLarge,
    InvalidPath,
    SelfLoop,
    UnknownEndpoint,
    UnknownNode,
)
from causalsep.graph import (
    Graph,
    Path,
    ancestors,
    build_graph,
    children,
    descendants,
    enumerate_paths,
    is_acyclic,
    parents,
    topological_sort,
    unblocked_ancestors,
    validate_path,
)

import oracles
from strategies import dags, digraphs


def test_minimal_graph():
    g = build_graph(["a", "b"], [("a", "b")])
    assert len(g) == 2 and g.edges == ((0, 1),)


def test_collider_graph_shape():
    g = build_graph(["u", "w", "v"], [("u", "w"), ("v", "w")])
    assert parents(g, g.id("w")) == [g.id("u"), g.id("v")]


def test_construction_errors():
    with pytest.raises(SelfLoop):
        build_graph(["a"], [("a", "a")])
    with pytest.raises(UnknownEndpoint):
        build_graph(["a", "b"], [("a", "c")])
    with pytest.raises(DuplicateNode):
        build_graph(["a", "a"], [])
    with pytest.raises(GraphTooLarge):
        build_graph([f"n{i}" for i in range(5)], [], max_nodes=4)


def test_parallel_edges_collapse():
    g = build_graph(["a", "b"], [("a", "b"), ("a", "b")])
    assert g.edges == ((0, 1),)


def test_acyclicity_examples():
    assert is_acyclic(figures.chain())
    assert not is_acyclic(build_graph(["a", "b"], [("a", "b"), ("b", "a")]))
    assert is_acyclic(figures.partition_example())
    assert len(figures.partition_example().edges) == 10


def test_topological_sort_examples():
    g = figures.chain()
    assert g.labels(topological_sort(g)) == ["x", "u", "y", "v"]
    assert topological_sort(build_graph(["a", "b"], [("a", "b"), ("b", "a")])) is None
    anc_graph = figures.unblocked_ancestry()
    assert oracles.respects_edges(anc_graph, topological_sort(anc_graph))


def test_parents_children():
    g = figures.partition_example()
    assert g.labels(parents(g, g.id("q"))) == ["t", "r"]
    assert parents(figures.chain(), 0) == []
    assert g.labels(children(g, g.id("r"))) == ["q", "v", "x"]
    with pytest.raises(UnknownNode):
        parents(g, 99)


def test_descendants_and_ancestors():
    g = figures.chain()
    assert set(g.labels(descendants(g, g.id("u")))) == {"u", "y", "v"}
    assert descendants(g, g.id("v")) == {g.id("v")}
    assert set(g.labels(ancestors(g, g.id("v")))) == {"x", "u", "y"}
    with pytest.raises(CyclicGraph):
        descendants(build_graph(["a", "b"], [("a", "b"), ("b", "a")]), 0)


def test_enumerate_paths_examples():
    g = figures.collider()
    assert [p.nodes for p in enumerate_paths(g, 0, 2)] == [(0, 1, 2)]
    assert enumerate_paths(build_graph(["a", "b"], []), 0, 1) == []
    part_graph = figures.partition_example()
    u, v = part_graph.id("u"), part_graph.id("v")
    found = [tuple(part_graph.labels(p.nodes)) for p in enumerate_paths(part_graph, u, v)]
    assert ("u", "t", "q", "r", "v") in found
    assert sorted(p.nodes for p in enumerate_paths(part_graph, u, v)) == sorted(oracles.dfs_paths(part_graph, u, v))


def test_enumerate_paths_order_is_by_length_then_edges():
    g = build_graph(["a", "b", "c", "d"], [("a", "b"), ("b", "d"), ("a", "c"), ("c", "d"), ("a", "d")])
    got = [g.labels(p.nodes) for p in enumerate_paths(g, 0, 3)]
    assert got == [["a", "d"], ["a", "b", "d"], ["a", "c", "d"]]


def test_two_cycle_gives_one_path():
    g = build_graph(["a", "b"], [("a", "b"), ("b", "a")])
    assert [p.nodes for p in enumerate_paths(g, 0, 1)] == [(0, 1)]


def test_unblocked_ancestors_examples():
    anc_graph = figures.unblocked_ancestry()
    got = unblocked_ancestors(anc_graph, anc_graph.id("u"), [anc_graph.id("t")])
    assert set(anc_graph.labels(got)) == {"u", "s", "y", "x"}
    g = figures.chain()
    assert unblocked_ancestors(g, g.id("v"), [g.id("y")]) == {g.id("v")}
    assert unblocked_ancestors(g, g.id("v"), []) == ancestors(g, g.id("v")) | {g.id("v")}


def test_path_validation():
    g = figures.chain()
    validate_path(Path.of([0, 1, 2]), g)
    with pytest.raises(InvalidPath):
        validate_path(Path.of([0, 2]), g)
    with pytest.raises(InvalidPath):
        validate_path(Path.of([0, 1, 0]), g)
    with pytest.raises(InvalidPath):
        validate_path(Path.of([0, 9]), g)
    with pytest.raises(InvalidPath):
        Path.of([1])


@given(digraphs())
def test_topological_sort_absent_exactly_on_cycles(g):
    order = topological_sort(g)
    assert (order is None) == oracles.has_cycle(g)
    if order is not None:
        assert oracles.respects_edges(g, order)


@given(dags())
def test_unblocked_ancestors_match_brute_force(g):
    for w in g.nodes:
        for r in range(len(g)):
            for Z in itertools.combinations([x for x in g.nodes if x != w], r):
                assert unblocked_ancestors(g, w, Z) == oracles.unblocked_ancestors_brute(g, w, Z)


@given(dags(max_nodes=5))
def test_ancestor_descendant_duality(g):
    for a, b in itertools.permutations(g.nodes, 2):
        assert (a in ancestors(g, b)) == (b in descendants(g, a))


@given(digraphs(min_nodes=2, max_nodes=5))
def test_paths_reverse_symmetry(g):
    a = {p.nodes for p in enumerate_paths(g, 0, 1)}
    b = {p.reversed().nodes for p in enumerate_paths(g, 1, 0)}
    assert a == b


def test_paths_match_dfs_on_all_five_node_skeletons():
    for g in all_graphs_on_skeletons(5):
        for u, v in itertools.combinations(g.nodes, 2):
            got = [p.nodes for p in enumerate_paths(g, u, v)]
            assert len(set(got)) == len(got)
            assert sorted(got) == sorted(oracles.dfs_paths(g, u, v))


def test_graph_is_hashable_value():
    a = build_graph(["a", "b"], [("a", "b")])
    b = build_graph(["a", "b"], [("a", "b")])
    assert a == b and hash(a) == hash(b)
    assert isinstance(a, Graph)
