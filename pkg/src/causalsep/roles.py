"""Roles of interior path nodes and path direction bookkeeping."""

from __future__ import annotations

from enum import Enum

from .graph import Graph, NodeId, Path, require_acyclic, validate_path


class NodeRole(Enum):
    MEDIATOR = "mediator"
    CONFOUNDER = "confounder"
    COLLIDER = "collider"


class Direction(Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


def triple_role(g: Graph, a: NodeId, b: NodeId, c: NodeId) -> NodeRole:
    """Role of ``b`` between its path neighbours ``a`` and ``c``.

    Assumes ``a-b`` and ``b-c`` are edges of an acyclic ``g``.
    """
    into_from_a = (a, b) in g.edge_set
    into_from_c = (c, b) in g.edge_set
    if into_from_a and into_from_c:
        return NodeRole.COLLIDER
    if not into_from_a and not into_from_c:
        return NodeRole.CONFOUNDER
    return NodeRole.MEDIATOR


def classify_interior(p: Path, g: Graph) -> dict[NodeId, NodeRole]:
    """Map each interior node of ``p`` to its role, in path order.

    >>> from causalsep.graph import build_graph, Path
    >>> g = build_graph(["a", "b", "c"], [("a", "b"), ("b", "c")])
    >>> classify_interior(Path.of([0, 1, 2]), g)
    {1: <NodeRole.MEDIATOR: 'mediator'>}
    """
    validate_path(p, g)
    require_acyclic(g)
    ns = p.nodes
    return {ns[i]: triple_role(g, ns[i - 1], ns[i], ns[i + 1]) for i in range(1, len(ns) - 1)}


def colliders(p: Path, g: Graph) -> list[NodeId]:
    return [w for w, r in classify_interior(p, g).items() if r is NodeRole.COLLIDER]


def dir_after(p: Path, g: Graph, w: NodeId) -> Direction | None:
    """Orientation of the path edge leaving ``w``; ``None`` when ``w`` is the
    end of ``p`` or not on it."""
    validate_path(p, g)
    ns = p.nodes
    if w not in ns or w == ns[-1]:
        return None
    nxt = ns[ns.index(w) + 1]
    return Direction.FORWARD if (w, nxt) in g.edge_set else Direction.BACKWARD


def is_directed_path(p: Path, g: Graph) -> bool:
    validate_path(p, g)
    ns = p.nodes
    return all((a, b) in g.edge_set for a, b in zip(ns, ns[1:]))


def is_directed_node_list(g: Graph, nodes) -> bool:
    """Like :func:`is_directed_path` but for a raw node sequence (length >= 1)."""
    return all((a, b) in g.edge_set for a, b in zip(nodes, nodes[1:]))
