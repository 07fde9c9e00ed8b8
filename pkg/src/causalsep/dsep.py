"""Path blocking, d-separation, and clean d-connected paths.

``d_separated`` answers with a linear-time reachability sweep;
``d_separated_by_paths`` is the enumeration-based reference that checks every
path.  Tests assert the two agree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import (
    BudgetExhausted,
    DSeparated,
    EndpointConditioned,
    InvalidCleanConnection,
    InvalidPath,
    SameEndpoints,
)
from .graph import (
    Graph,
    NodeId,
    Path,
    _paths_from,
    _reach,
    require_acyclic,
    validate_path,
)
from .roles import NodeRole, triple_role

DEFAULT_BUDGET = 1_000_000

# collider -> (interior nodes of its descendant path, conditioned terminal)
DescendantMap = dict[NodeId, tuple[tuple[NodeId, ...], NodeId]]


@dataclass(frozen=True)
class CleanConnection:
    path: Path
    dmap: Mapping[NodeId, tuple[tuple[NodeId, ...], NodeId]] = field(default_factory=dict)

    def descendant_chain(self, c: NodeId) -> tuple[NodeId, ...]:
        """``c`` followed by its descendant path, ending at the terminal."""
        interior, terminal = self.dmap[c]
        if not interior and terminal == c:
            return (c,)
        return (c, *interior, terminal)

    def show(self, g: Graph) -> dict:
        return {
            "path": g.labels(self.path.nodes),
            "descendants": {
                g.label(c): {"via": g.labels(i), "terminal": g.label(t)}
                for c, (i, t) in sorted(self.dmap.items())
            },
        }


def _check_query(g: Graph, u: NodeId, v: NodeId, Z: frozenset[NodeId]) -> None:
    g.check_node(u)
    g.check_node(v)
    for z in Z:
        g.check_node(z)
    if u == v:
        raise SameEndpoints(g.label(u))
    for end in (u, v):
        if end in Z:
            raise EndpointConditioned(g.label(end))
    require_acyclic(g)


def _blocked(g: Graph, ns: tuple[NodeId, ...], Z: frozenset[NodeId], desc) -> bool:
    for i in range(1, len(ns) - 1):
        w = ns[i]
        if triple_role(g, ns[i - 1], w, ns[i + 1]) is NodeRole.COLLIDER:
            if desc(w).isdisjoint(Z):
                return True
        elif w in Z:
            return True
    return False


def _desc_fn(g: Graph):
    cache: dict[NodeId, frozenset[NodeId]] = {}

    def desc(w):
        if w not in cache:
            cache[w] = _reach(g._children, w)
        return cache[w]

    return desc


def is_blocked(p: Path, g: Graph, Z: Iterable[NodeId]) -> bool:
    """True iff a mediator or confounder of ``p`` is in ``Z``, or some collider
    of ``p`` has no descendant (itself included) in ``Z``."""
    validate_path(p, g)
    require_acyclic(g)
    return _blocked(g, p.nodes, frozenset(Z), _desc_fn(g))


def is_d_connected(p: Path, g: Graph, Z: Iterable[NodeId]) -> bool:
    return not is_blocked(p, g, Z)


def d_separated(g: Graph, u: NodeId, v: NodeId, Z: Iterable[NodeId] = ()) -> bool:
    """True iff every path between ``u`` and ``v`` is blocked by ``Z``.

    >>> from causalsep.graph import build_graph
    >>> g = build_graph(["courseload", "caffeine", "GPA"],
    ...                 [("courseload", "caffeine"), ("courseload", "GPA")])
    >>> d_separated(g, g.id("caffeine"), g.id("GPA"), {g.id("courseload")})
    True
    """
    Z = frozenset(Z)
    _check_query(g, u, v, Z)
    return v not in _active_reach(g, u, Z)


def _active_reach(g: Graph, u: NodeId, Z: frozenset[NodeId]) -> set[NodeId]:
    # Bayes-ball style sweep over (node, arrived-from-child?) states
    lit = set(Z)
    for z in Z:
        lit |= _reach(g._parents, z)
    seen: set[tuple[NodeId, bool]] = set()
    todo = [(u, True)]
    out: set[NodeId] = set()
    while todo:
        y, up = todo.pop()
        if (y, up) in seen:
            continue
        seen.add((y, up))
        if y not in Z:
            out.add(y)
        if up:
            if y not in Z:
                todo.extend((p, True) for p in g._parents[y])
                todo.extend((c, False) for c in g._children[y])
        else:
            if y not in Z:
                todo.extend((c, False) for c in g._children[y])
            if y in lit:
                todo.extend((p, True) for p in g._parents[y])
    return out


def d_separated_by_paths(g: Graph, u: NodeId, v: NodeId, Z: Iterable[NodeId] = ()) -> bool:
    """Reference check: enumerate every path and test each for blocking."""
    return find_d_connected_path(g, u, v, Z) is None


def _connected_paths(g: Graph, u: NodeId, v: NodeId, Z: frozenset[NodeId]) -> Iterator[tuple]:
    desc = _desc_fn(g)
    for ns in _paths_from(g, u, v):
        if not _blocked(g, ns, Z, desc):
            yield ns


def find_d_connected_path(
    g: Graph, u: NodeId, v: NodeId, Z: Iterable[NodeId] = ()
) -> Path | None:
    """First unblocked path in enumeration order, or ``None`` if separated."""
    Z = frozenset(Z)
    _check_query(g, u, v, Z)
    for ns in _connected_paths(g, u, v, Z):
        return Path.of(ns)
    return None


# -- clean connections -----------------------------------------------------------


def _descendant_routes(g: Graph, c: NodeId, Z: frozenset[NodeId], avoid: frozenset[NodeId]):
    """Directed routes ``c -> ... -> d`` with ``d`` in ``Z``, interior outside
    ``Z``, nothing but ``c`` on ``avoid``; shortest first, then by child id."""
    routes = []
    stack = [(c,)]
    while stack:
        nxt_stack = []
        for r in stack:
            for ch in g._children[r[-1]]:
                if ch in avoid or ch in r:
                    continue
                if ch in Z:
                    routes.append(r + (ch,))
                else:
                    nxt_stack.append(r + (ch,))
        stack = nxt_stack
    return routes


def find_clean_connection(
    g: Graph,
    u: NodeId,
    v: NodeId,
    Z: Iterable[NodeId] = (),
    budget: int = DEFAULT_BUDGET,
) -> CleanConnection | None:
    """A d-connected path plus pairwise-disjoint collider descendant routes.

    Paths are tried in enumeration order; for each, descendant routes are
    chosen by backtracking.  ``budget`` bounds the number of backtracking
    steps, after which :class:`BudgetExhausted` is raised.
    """
    Z = frozenset(Z)
    _check_query(g, u, v, Z)
    steps = 0
    for ns in _connected_paths(g, u, v, Z):
        on_path = frozenset(ns)
        open_colliders = []
        dmap: DescendantMap = {}
        for i in range(1, len(ns) - 1):
            c = ns[i]
            if triple_role(g, ns[i - 1], c, ns[i + 1]) is NodeRole.COLLIDER:
                if c in Z:
                    dmap[c] = ((), c)
                else:
                    open_colliders.append(c)
        options = [_descendant_routes(g, c, Z, on_path) for c in open_colliders]
        chosen: list[tuple[NodeId, ...]] = []

        def assign(k: int, used: frozenset[NodeId]) -> bool:
            nonlocal steps
            if k == len(open_colliders):
                return True
            for route in options[k]:
                steps += 1
                if steps > budget:
                    raise BudgetExhausted(f"clean-path search exceeded {budget} steps")
                # the collider itself is on the path, so only the tail can clash
                if used.isdisjoint(route[1:]):
                    chosen.append(route)
                    if assign(k + 1, used | frozenset(route[1:])):
                        return True
                    chosen.pop()
            return False

        if assign(0, frozenset()):
            for c, route in zip(open_colliders, chosen):
                dmap[c] = (tuple(route[1:-1]), route[-1])
            return CleanConnection(Path.of(ns), dict(sorted(dmap.items())))
    return None


def clean_connection_problems(
    g: Graph, u: NodeId, v: NodeId, Z: Iterable[NodeId], cc: CleanConnection
) -> list[str]:
    """Every violated clause of the clean-path definition (empty when valid)."""
    Z = frozenset(Z)
    bad: list[str] = []
    p = cc.path
    try:
        validate_path(p, g)
    except InvalidPath as e:
        return [f"invalid path: {e}"]
    if p.start != u or p.end != v:
        bad.append("path endpoints differ from the query")
    ns = p.nodes
    on_path = set(ns)
    cols = {
        ns[i]
        for i in range(1, len(ns) - 1)
        if triple_role(g, ns[i - 1], ns[i], ns[i + 1]) is NodeRole.COLLIDER
    }
    for i in range(1, len(ns) - 1):
        if ns[i] not in cols and ns[i] in Z:
            bad.append(f"noncollider {g.label(ns[i])} is conditioned")
    if set(cc.dmap) != cols:
        bad.append("descendant map does not cover exactly the colliders")
    chains = []
    for c, (interior, terminal) in cc.dmap.items():
        name = g.label(c) if c in g else str(c)
        if not interior and terminal == c:
            if c not in Z:
                bad.append(f"collider {name} maps to itself but is not conditioned")
            chains.append({c})
            continue
        chain = (c, *interior, terminal)
        if terminal not in Z:
            bad.append(f"terminal for {name} is not conditioned")
        if len(set(chain)) != len(chain):
            bad.append(f"descendant route of {name} repeats a node")
        if not all((a, b) in g.edge_set for a, b in zip(chain, chain[1:])):
            bad.append(f"descendant route of {name} is not directed")
        if any(w in Z for w in chain[:-1]):
            bad.append(f"descendant route of {name} passes through the conditioning set")
        if any(w in on_path for w in chain[1:]):
            bad.append(f"descendant route of {name} touches the main path")
        chains.append(set(chain))
    for i in range(len(chains)):
        for j in range(i + 1, len(chains)):
            if chains[i] & chains[j]:
                bad.append("descendant routes overlap")
    if not bad and _blocked(g, ns, Z, _desc_fn(g)):
        bad.append("path is blocked")
    return bad


def validate_clean_connection(
    g: Graph, u: NodeId, v: NodeId, Z: Iterable[NodeId], cc: CleanConnection
) -> None:
    problems = clean_connection_problems(g, u, v, Z, cc)
    if problems:
        raise InvalidCleanConnection("; ".join(problems))


def require_connection(g: Graph, u: NodeId, v: NodeId, Z: Iterable[NodeId]) -> CleanConnection:
    cc = find_clean_connection(g, u, v, Z)
    if cc is None:
        raise DSeparated(f"{g.label(u)} and {g.label(v)} are d-separated")
    return cc
