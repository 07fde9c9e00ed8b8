"""Immutable directed graphs, paths, and the graph algorithms built on them.

Nodes are dense integer ids ``0..n-1`` with a parallel table of string labels.
Everything here is a pure function of its arguments; :class:`Graph` values are
frozen, and derived indexes (parents, children, adjacency) are computed lazily
and memoized on the instance.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import (
    CyclicGraph,
    DuplicateNode,
    GraphTooLarge,
    InvalidPath,
    SameEndpoints,
    SelfLoop,
    UnknownEndpoint,
    UnknownNode,
)

NodeId = int
Edge = tuple[NodeId, NodeId]

DEFAULT_MAX_NODES = 64


@dataclass(frozen=True)
class Graph:
    """A finite directed graph with labelled nodes.

    ``nodes`` is always ``(0, 1, ..., n-1)``; ``edges`` keeps the canonical
    (input) order with duplicates removed. Use :func:`build_graph` or
    :meth:`from_edges` rather than the constructor.
    """

    nodes: tuple[NodeId, ...]
    edges: tuple[Edge, ...]
    names: tuple[str, ...] = field(default=())

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Edge],
        names: Sequence[str] | None = None,
        max_nodes: int = DEFAULT_MAX_NODES,
    ) -> "Graph":
        """Build a graph on ids ``0..n-1``; labels default to ``str(id)``."""
        if n > max_nodes:
            raise GraphTooLarge(f"{n} nodes exceeds the limit of {max_nodes}")
        if names is None:
            names = [str(i) for i in range(n)]
        if len(names) != n:
            raise ValueError("one name per node is required")
        if len(set(names)) != n:
            dup = next(x for x in names if list(names).count(x) > 1)
            raise DuplicateNode(dup)
        seen: dict[Edge, None] = {}
        for s, t in edges:
            for end in (s, t):
                if not 0 <= end < n:
                    raise UnknownEndpoint(str(end))
            if s == t:
                raise SelfLoop(names[s])
            seen.setdefault((s, t), None)
        return cls(tuple(range(n)), tuple(seen), tuple(names))

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v < len(self.nodes)

    def __repr__(self) -> str:
        arcs = ", ".join(f"{self.names[s]}->{self.names[t]}" for s, t in self.edges)
        return f"Graph([{', '.join(self.names)}]; {arcs})"

    # -- labels ---------------------------------------------------------------
    @cached_property
    def _index(self) -> dict[str, NodeId]:
        return {name: i for i, name in enumerate(self.names)}

    def id(self, name: str) -> NodeId:
        """Node id for a label."""
        try:
            return self._index[name]
        except KeyError:
            raise UnknownNode(name) from None

    def label(self, v: NodeId) -> str:
        self.check_node(v)
        return self.names[v]

    def labels(self, vs: Iterable[NodeId]) -> list[str]:
        return [self.label(v) for v in vs]

    def check_node(self, v: NodeId) -> None:
        if type(v) is int and 0 <= v < len(self.nodes):
            return
        if v not in self:
            raise UnknownNode(str(v))

    # -- derived indexes --------------------------------------------------------
    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def _parents(self) -> tuple[tuple[NodeId, ...], ...]:
        pa: list[list[NodeId]] = [[] for _ in self.nodes]
        for s, t in self.edges:
            pa[t].append(s)
        return tuple(tuple(sorted(p)) for p in pa)

    @cached_property
    def _children(self) -> tuple[tuple[NodeId, ...], ...]:
        ch: list[list[NodeId]] = [[] for _ in self.nodes]
        for s, t in self.edges:
            ch[s].append(t)
        return tuple(tuple(sorted(c)) for c in ch)

    @cached_property
    def _incident(self) -> tuple[tuple[int, ...], ...]:
        # edge indices touching each node, in canonical edge order
        inc: list[list[int]] = [[] for _ in self.nodes]
        for k, (s, t) in enumerate(self.edges):
            inc[s].append(k)
            inc[t].append(k)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def _memo(self) -> dict:
        return {}

    @cached_property
    def _topo(self) -> tuple[NodeId, ...] | None:
        return _kahn(self)

    def has_edge(self, s: NodeId, t: NodeId) -> bool:
        return (s, t) in self.edge_set

    def adjacent(self, a: NodeId, b: NodeId) -> bool:
        return (a, b) in self.edge_set or (b, a) in self.edge_set


@dataclass(frozen=True)
class Path:
    """An undirected path ``start, *interior, end`` through a graph."""

    start: NodeId
    end: NodeId
    interior: tuple[NodeId, ...] = ()

    @classmethod
    def of(cls, nodes: Sequence[NodeId]) -> "Path":
        if len(nodes) < 2:
            raise InvalidPath("a path needs at least two nodes")
        return cls(nodes[0], nodes[-1], tuple(nodes[1:-1]))

    @property
    def nodes(self) -> tuple[NodeId, ...]:
        return (self.start, *self.interior, self.end)

    def __iter__(self) -> Iterator[NodeId]:
        return iter(self.nodes)

    def __len__(self) -> int:
        return len(self.interior) + 2

    def __contains__(self, v: object) -> bool:
        return v == self.start or v == self.end or v in self.interior

    def reversed(self) -> "Path":
        return Path(self.end, self.start, tuple(reversed(self.interior)))

    def show(self, g: Graph) -> str:
        """Render with edge orientations, e.g. ``x <- c -> y``."""
        ns = self.nodes
        out = [g.label(ns[0])]
        for a, b in zip(ns, ns[1:]):
            out.append("->" if g.has_edge(a, b) else "<-")
            out.append(g.label(b))
        return " ".join(out)


def build_graph(
    node_labels: Sequence[str],
    edge_pairs: Iterable[tuple[str, str]],
    max_nodes: int = DEFAULT_MAX_NODES,
) -> Graph:
    """Build a graph from string labels; ids follow first-appearance order.

    >>> g = build_graph(["u", "w", "v"], [("u", "w"), ("v", "w")])
    >>> parents(g, g.id("w"))
    [0, 2]
    """
    index: dict[str, int] = {}
    for name in node_labels:
        if name in index:
            raise DuplicateNode(name)
        index[name] = len(index)
    if len(index) > max_nodes:
        raise GraphTooLarge(f"{len(index)} nodes exceeds the limit of {max_nodes}")
    edges = []
    for s, t in edge_pairs:
        for end in (s, t):
            if end not in index:
                raise UnknownEndpoint(end)
        if s == t:
            raise SelfLoop(s)
        edges.append((index[s], index[t]))
    return Graph.from_edges(len(index), edges, list(index), max_nodes=max_nodes)


def validate_path(p: Path, g: Graph) -> None:
    """Raise :class:`InvalidPath` unless ``p`` is an acyclic path in ``g``."""
    ns = p.nodes
    for v in ns:
        if v not in g:
            raise InvalidPath(f"node {v} is not in the graph")
    if len(set(ns)) != len(ns):
        raise InvalidPath("path repeats a node")
    for a, b in zip(ns, ns[1:]):
        if not g.adjacent(a, b):
            raise InvalidPath(f"{g.label(a)} and {g.label(b)} are not adjacent")


def is_path_in_graph(p: Path, g: Graph) -> bool:
    try:
        validate_path(p, g)
    except InvalidPath:
        return False
    return True


# -- acyclicity and ordering ------------------------------------------------------


def _kahn(g: Graph) -> tuple[NodeId, ...] | None:
    indegree = [len(p) for p in g._parents]
    # smallest ready id first, so the sort is deterministic
    ready = sorted(v for v in g.nodes if indegree[v] == 0)
    order: list[NodeId] = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for c in g._children[v]:
            indegree[c] -= 1
            if indegree[c] == 0:
                ready.append(c)
                ready.sort()
    if len(order) != len(g.nodes):
        return None
    return tuple(order)


def topological_sort(g: Graph) -> list[NodeId] | None:
    """Indegree-counting topological sort; ``None`` when ``g`` has a cycle."""
    order = g._topo
    return None if order is None else list(order)


def is_acyclic(g: Graph) -> bool:
    return g._topo is not None


def require_acyclic(g: Graph) -> tuple[NodeId, ...]:
    order = g._topo
    if order is None:
        raise CyclicGraph(repr(g))
    return order


# -- neighbourhoods ---------------------------------------------------------------


def parents(g: Graph, v: NodeId) -> list[NodeId]:
    """Parents of ``v`` in ascending id order (the canonical parent order)."""
    g.check_node(v)
    return list(g._parents[v])


def children(g: Graph, v: NodeId) -> list[NodeId]:
    g.check_node(v)
    return list(g._children[v])


def descendants(g: Graph, v: NodeId) -> frozenset[NodeId]:
    """All nodes reachable from ``v`` by a directed path, including ``v``."""
    g.check_node(v)
    require_acyclic(g)
    return _reach(g._children, v)


def ancestors(g: Graph, v: NodeId) -> frozenset[NodeId]:
    """Proper ancestors of ``v`` (``v`` itself excluded)."""
    g.check_node(v)
    require_acyclic(g)
    return _reach(g._parents, v) - {v}


def _reach(adj: tuple[tuple[NodeId, ...], ...], v: NodeId) -> frozenset[NodeId]:
    seen = {v}
    todo = [v]
    while todo:
        x = todo.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return frozenset(seen)


def unblocked_ancestors(g: Graph, w: NodeId, Z: Iterable[NodeId]) -> frozenset[NodeId]:
    """``w`` plus every node outside ``Z`` with a directed path into ``w`` that
    avoids ``Z`` everywhere except possibly at ``w`` itself."""
    Z = frozenset(Z)
    key = ("unblocked", w, Z)
    hit = g._memo.get(key)
    if hit is not None:
        return hit
    g.check_node(w)
    for z in Z:
        g.check_node(z)
    require_acyclic(g)
    seen = {w}
    todo = [w]
    while todo:
        x = todo.pop()
        for p in g._parents[x]:
            if p not in Z and p not in seen:
                seen.add(p)
                todo.append(p)
    g._memo[key] = out = frozenset(seen)
    return out


def unblocked_directed_path(
    g: Graph, a: NodeId, w: NodeId, Z: Iterable[NodeId]
) -> list[NodeId] | None:
    """Shortest directed path ``a -> ... -> w`` whose nodes other than ``w``
    avoid ``Z``; ``[w]`` when ``a == w``; ``None`` if there is none."""
    Z = frozenset(Z)
    if a == w:
        return [w]
    if a in Z:
        return None
    prev = {a: a}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for c in g._children[x]:
            if c in prev:
                continue
            prev[c] = x
            if c == w:
                out = [w]
                while out[-1] != a:
                    out.append(prev[out[-1]])
                return out[::-1]
            if c not in Z:
                queue.append(c)
    return None


# -- path enumeration ---------------------------------------------------------------


def enumerate_paths(g: Graph, u: NodeId, v: NodeId) -> list[Path]:
    """All acyclic undirected paths from ``u`` to ``v``.

    Paths are grown from ``u`` one edge at a time. Round ``k`` extends every
    path of ``k`` edges by each incident edge, taken in canonical edge order,
    whose far endpoint is not already on the path. The output is therefore
    ordered by length, then by the edge sequence used to build each path.
    """
    g.check_node(u)
    g.check_node(v)
    if u == v:
        raise SameEndpoints(g.label(u))
    return [Path.of(p) for p in _paths_from(g, u, v)]


def _paths_from(g: Graph, u: NodeId, v: NodeId) -> list[tuple[NodeId, ...]]:
    edges = g.edges
    incident = g._incident
    found: list[tuple[NodeId, ...]] = []
    layer = [(u,)]
    for _ in range(len(g.nodes) - 1):
        grown = []
        for p in layer:
            tip = p[-1]
            taken = set()
            for k in incident[tip]:
                s, t = edges[k]
                nxt = t if s == tip else s
                # a->b and b->a give the same undirected step
                if nxt in p or nxt in taken:
                    continue
                taken.add(nxt)
                q = p + (nxt,)
                if nxt == v:
                    found.append(q)
                else:
                    grown.append(q)
        if not grown:
            break
        layer = grown
    return found
