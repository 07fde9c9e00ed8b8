"""Witness sequences for the perturb-and-repair separation property and their
checker."""

from __future__ import annotations

import operator
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable, Mapping

from ..errors import EndpointConditioned, MissingUnobservedTerm, SameEndpoints
from ..graph import Graph, NodeId, require_acyclic, unblocked_ancestors
from ..semantics import GraphFunction, _evaluate


@dataclass(frozen=True)
class WitnessSequence:
    """Values ``alpha``, ``beta`` and the assignments ``U_0 .. U_ell``."""

    alpha: Any
    beta: Any
    sequence: tuple

    def __post_init__(self):
        object.__setattr__(self, "sequence", tuple(dict(U) for U in self.sequence))

    @property
    def ell(self) -> int:
        return len(self.sequence) - 1

    def __len__(self) -> int:
        return len(self.sequence)


class Condition(Enum):
    INITIALIZATION = "Initialization"
    CATALYST_UPDATE = "CatalystUpdate"
    REPARATIVE_PROPAGATION = "ReparativePropagation"
    TERMINATION = "Termination"
    RESTORED_CONDITIONING = "RestoredConditioning"


@dataclass(frozen=True)
class WitnessVerdict:
    valid: bool
    failed_condition: Condition | None = None
    v_changed: bool = False

    def __bool__(self) -> bool:
        return self.valid and self.v_changed


def changed_nodes(U: Mapping, V: Mapping, eq=operator.eq) -> frozenset:
    """Nodes whose unobserved term differs between two total assignments."""
    return frozenset(n for n in U if not eq(U[n], V[n]))


def _check_endpoints(g: Graph, u: NodeId, v: NodeId, Z: Iterable[NodeId]) -> None:
    g.check_node(u)
    g.check_node(v)
    if u == v:
        raise SameEndpoints(g.label(u))
    for z in Z:
        g.check_node(z)
        if z in (u, v):
            raise EndpointConditioned(g.label(z))


class AncestorIndex:
    """Unblocked-ancestor sets of ``u`` and of each conditioned node, plus the
    set each window of changes is allowed to touch next."""

    def __init__(self, g: Graph, u: NodeId, Z: Iterable[NodeId]):
        self.Z = tuple(sorted(Z))
        self.of_u = unblocked_ancestors(g, u, self.Z)
        self.of_z = {z: unblocked_ancestors(g, z, self.Z) for z in self.Z}

    def contributors(self, changed: Iterable[NodeId]) -> list[NodeId]:
        changed = frozenset(changed)
        return [z for z in self.Z if not self.of_z[z].isdisjoint(changed)]

    def repair_scope(self, changed: Iterable[NodeId]) -> frozenset:
        out: frozenset = frozenset()
        for z in self.contributors(changed):
            out |= self.of_z[z]
        return out


def check_witness(
    g: Graph,
    f: GraphFunction,
    u: NodeId,
    v: NodeId,
    AZ: Mapping[NodeId, Any],
    w: WitnessSequence,
    eq=operator.eq,
) -> WitnessVerdict:
    """Check the five witness conditions in turn and report the first failure.

    ``v_changed`` compares ``v`` under the first and last assignments, and is
    reported whenever the sequence is non-empty.
    """
    _check_endpoints(g, u, v, AZ)
    order = require_acyclic(g)
    seq = w.sequence
    if not seq:
        return WitnessVerdict(False, Condition.TERMINATION)
    f.check(g)
    for U in seq:
        for x in g.nodes:
            if x not in U:
                raise MissingUnobservedTerm(g.label(x))
    vals = [_evaluate(order, g._parents, f.per_node, U) for U in seq]
    v_changed = not eq(vals[0][v], vals[-1][v])

    def fail(c: Condition) -> WitnessVerdict:
        return WitnessVerdict(False, c, v_changed)

    if not 1 <= w.ell <= len(g) + 1:
        return fail(Condition.TERMINATION)

    def conditioned(val) -> bool:
        return all(eq(val[z], AZ[z]) for z in AZ)

    if not (eq(vals[0][u], w.alpha) and conditioned(vals[0])):
        return fail(Condition.INITIALIZATION)
    idx = AncestorIndex(g, u, AZ)
    if not eq(vals[1][u], w.beta) or not changed_nodes(seq[0], seq[1], eq) <= idx.of_u:
        return fail(Condition.CATALYST_UPDATE)
    for i in range(2, len(seq)):
        scope = idx.repair_scope(changed_nodes(seq[i - 2], seq[i - 1], eq))
        if not changed_nodes(seq[i - 1], seq[i], eq) <= scope:
            return fail(Condition.REPARATIVE_PROPAGATION)
    if not (eq(vals[-1][u], w.beta) and conditioned(vals[-1])):
        return fail(Condition.RESTORED_CONDITIONING)
    return WitnessVerdict(True, None, v_changed)


def changed_conditioned_nodes(
    g: Graph,
    Z: Iterable[NodeId],
    AZ: Mapping[NodeId, Any],
    w: WitnessSequence,
    eq=operator.eq,
) -> list[NodeId]:
    """Conditioned nodes touched by each repair-triggering window.

    For every window ``(U_i, U_{i+1})`` that is followed by at least one more
    assignment, list (in ascending id order) the conditioned nodes whose
    unblocked ancestors meet the nodes changed in that window, and concatenate
    the lists.
    """
    Z = frozenset(Z) | frozenset(AZ)
    order = [z for z in sorted(Z)]
    anc = {z: unblocked_ancestors(g, z, Z) for z in order}
    seq = w.sequence
    out: list[NodeId] = []
    for i in range(len(seq) - 2):
        changed = changed_nodes(seq[i], seq[i + 1], eq)
        out.extend(z for z in order if not anc[z].isdisjoint(changed))
    return out
