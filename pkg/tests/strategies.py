"""Hypothesis strategies for small graphs and queries."""

from itertools import combinations

from hypothesis import strategies as st

from causalsep.dags import node_names
from causalsep.graph import Graph


@st.composite
def dags(draw, min_nodes=2, max_nodes=6):
    n = draw(st.integers(min_nodes, max_nodes))
    order = draw(st.permutations(range(n)))
    pairs = list(combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [(order[i], order[j]) for (i, j), k in zip(pairs, keep) if k]
    return Graph.from_edges(n, edges, node_names(n))


@st.composite
def digraphs(draw, min_nodes=1, max_nodes=6):
    """Arbitrary directed graphs without self loops; cycles allowed."""
    n = draw(st.integers(min_nodes, max_nodes))
    arcs = [(i, j) for i in range(n) for j in range(n) if i != j]
    keep = draw(st.lists(st.booleans(), min_size=len(arcs), max_size=len(arcs)))
    return Graph.from_edges(n, [a for a, k in zip(arcs, keep) if k], node_names(n))


@st.composite
def queries(draw, graphs=dags()):
    g = draw(graphs)
    u, v = draw(st.permutations(g.nodes))[:2]
    rest = [w for w in g.nodes if w not in (u, v)]
    Z = tuple(sorted(draw(st.sets(st.sampled_from(rest)) if rest else st.just(set()))))
    return g, u, v, Z
