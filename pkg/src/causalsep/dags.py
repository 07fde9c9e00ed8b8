"""Enumerating and sampling small DAGs."""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterator

import numpy as np

from .graph import Graph, is_acyclic

LABELS = "abcdefghijklmnopqrstuvwxyz"


def node_names(n: int) -> list[str]:
    return list(LABELS[:n]) if n <= len(LABELS) else [f"n{i}" for i in range(n)]


def all_dags(n: int) -> Iterator[Graph]:
    """Every labelled DAG on ``n`` nodes (each pair: no edge, or one of two
    orientations; cyclic choices dropped)."""
    pairs = list(combinations(range(n), 2))
    names = node_names(n)
    for choice in product((0, 1, 2), repeat=len(pairs)):
        edges = [(i, j) if c == 1 else (j, i) for (i, j), c in zip(pairs, choice) if c]
        g = Graph.from_edges(n, edges, names)
        if is_acyclic(g):
            yield g


def all_graphs_on_skeletons(n: int) -> Iterator[Graph]:
    """One graph per undirected simple graph on ``n`` nodes, every edge
    oriented from lower to higher id."""
    pairs = list(combinations(range(n), 2))
    names = node_names(n)
    for mask in range(1 << len(pairs)):
        edges = [pairs[k] for k in range(len(pairs)) if mask >> k & 1]
        yield Graph.from_edges(n, edges, names)


def random_dag(n: int, rng: np.random.Generator, density: float = 0.5) -> Graph:
    """Random DAG: random node order, each forward pair joined with
    probability ``density``."""
    order = rng.permutation(n)
    edges = [
        (int(order[i]), int(order[j]))
        for i, j in combinations(range(n), 2)
        if rng.random() < density
    ]
    return Graph.from_edges(n, edges, node_names(n))


def random_digraph(n: int, rng: np.random.Generator, density: float = 0.4) -> Graph:
    """Random directed graph, cycles and two-cycles allowed."""
    edges = [
        (i, j) for i in range(n) for j in range(n) if i != j and rng.random() < density
    ]
    return Graph.from_edges(n, edges, node_names(n))
