"""Forward construction: from a clean d-connected path to a concrete world and
witness sequence that changes ``v``.

The nodes are split into six roles relative to the path: sources, transmitters,
colliders, descendant-route nodes, leftover conditioned nodes, and the rest.
Each role gets a fixed node function so that, whenever all sources share a value,
every noncollider on the path carries that value and every conditioned node sits
at its conditioning value.  Flipping the sources one at a time, in path order,
then walks ``u`` and ``v`` from one value to the other.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from typing import Any, Mapping

from ..dsep import CleanConnection, clean_connection_problems
from ..errors import AlphaBetaEqual, InvalidCleanConnection
from ..graph import Graph, NodeId
from ..semantics import (
    BOOL,
    Constant,
    CopyParent,
    CopyUnobserved,
    EquateParents,
    GraphFunction,
    NodeFunction,
    ValueDomain,
)
from .witness import WitnessSequence


@dataclass(frozen=True)
class RolePartition:
    """Six-way split of the nodes plus the parent bindings each role uses.

    ``transmit`` maps transmitters to the index (in their parent list) of the
    path neighbour feeding them; ``relay`` does the same for nodes on collider
    descendant routes; ``equate`` maps each collider to ``(i, j, x, y)``.
    """

    sources: tuple
    transmitters: frozenset
    colliders: frozenset
    descendants: frozenset
    conditioned_rest: frozenset
    rest: frozenset
    transmit: Mapping[NodeId, int] = field(default_factory=dict)
    equate: Mapping[NodeId, tuple] = field(default_factory=dict)
    relay: Mapping[NodeId, int] = field(default_factory=dict)

    @property
    def sets(self) -> tuple[frozenset, ...]:
        return (
            frozenset(self.sources),
            self.transmitters,
            self.colliders,
            self.descendants,
            self.conditioned_rest,
            self.rest,
        )

    def show(self, g: Graph) -> dict:
        return {f"S{k + 1}": sorted(g.labels(s)) for k, s in enumerate(self.sets)}


def build_partition(
    g: Graph,
    cc: CleanConnection,
    Z,
    AZ: Mapping[NodeId, Any],
    domain: ValueDomain = BOOL,
) -> RolePartition:
    """Role partition for a clean connection between its path endpoints."""
    Z = frozenset(Z)
    ns = cc.path.nodes
    problems = clean_connection_problems(g, ns[0], ns[-1], Z, cc)
    if problems:
        raise InvalidCleanConnection("; ".join(problems))
    if set(AZ) != Z:
        raise InvalidCleanConnection("conditioning values must cover exactly the conditioning set")
    sources, transmitters, colliders = [], set(), set()
    transmit, equate, relay = {}, {}, {}
    for k, w in enumerate(ns):
        pa = g._parents[w]
        feeders = [ns[j] for j in (k - 1, k + 1) if 0 <= j < len(ns) and ns[j] in pa]
        if not feeders:
            sources.append(w)
        elif len(feeders) == 1:
            transmitters.add(w)
            transmit[w] = pa.index(feeders[0])
        else:
            colliders.add(w)
            terminal = cc.dmap[w][1]
            x = AZ[terminal]
            equate[w] = (pa.index(feeders[0]), pa.index(feeders[1]), x, domain.other_than(x))
    descendants = set()
    for c in sorted(cc.dmap):
        chain = cc.descendant_chain(c)
        for prev, node in zip(chain, chain[1:]):
            descendants.add(node)
            relay[node] = g._parents[node].index(prev)
    taken = set(ns) | descendants
    conditioned_rest = Z - taken
    rest = frozenset(g.nodes) - taken - conditioned_rest
    return RolePartition(
        tuple(sources),
        frozenset(transmitters),
        frozenset(colliders),
        frozenset(descendants),
        frozenset(conditioned_rest),
        rest,
        transmit,
        equate,
        relay,
    )


def build_g_path(
    g: Graph,
    part: RolePartition,
    AZ: Mapping[NodeId, Any],
    default: NodeFunction | None = None,
    domain: ValueDomain = BOOL,
) -> GraphFunction:
    """The world that makes the partition's path carry a single value."""
    if default is None:
        default = Constant(domain.elements[0])
    sources = set(part.sources)
    funcs: list[NodeFunction] = []
    for w in g.nodes:
        k = len(g._parents[w])
        if w in sources:
            fn = CopyUnobserved(arity=k)
        elif w in part.transmit:
            fn = CopyParent(part.transmit[w], arity=k)
        elif w in part.equate:
            i, j, x, y = part.equate[w]
            fn = EquateParents(i, j, x, y, arity=k, eq=domain.eq)
        elif w in part.relay:
            fn = CopyParent(part.relay[w], arity=k)
        elif w in AZ:
            fn = Constant(AZ[w], arity=k)
        else:
            fn = default
        funcs.append(fn)
    return GraphFunction(funcs)


def build_witness_sequence(
    g: Graph,
    part: RolePartition,
    alpha,
    beta,
    U_base: Mapping[NodeId, Any] | None = None,
    eq=operator.eq,
) -> WitnessSequence:
    """Start with every source at ``alpha`` and flip them to ``beta`` one at a
    time, in path order."""
    if eq(alpha, beta):
        raise AlphaBetaEqual(f"alpha and beta are both {alpha!r}")
    U = {w: alpha for w in g.nodes} if U_base is None else dict(U_base)
    for s in part.sources:
        U[s] = alpha
    seq = [dict(U)]
    for s in part.sources:
        U[s] = beta
        seq.append(dict(U))
    return WitnessSequence(alpha, beta, tuple(seq))
