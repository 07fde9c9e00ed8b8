"""Experiment oracles that can refute a hypothesized causal graph.

A world is anything that lets us read a node's value and overwrite some
unobserved terms.  Both oracles only ever touch nodes the hypothesis says are
safe to touch; if the hypothesis is right, the measured value of ``v`` cannot
move, so seeing it move refutes the hypothesis.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping, Protocol

from .dsep import d_separated
from .errors import (
    IllegalIntervention,
    InconclusiveRun,
    PreconditionViolated,
)
from .graph import Graph, NodeId, ancestors, unblocked_ancestors
from .semantics import GraphFunction, evaluate


class World(Protocol):
    """Handle onto a system under experiment, addressed by node label."""

    def measure(self, node: str) -> Any: ...

    def intervene(self, delta: Mapping[str, Any]) -> None: ...


class SimulatedWorld:
    """A world driven by a known graph function and unobserved terms."""

    def __init__(self, g: Graph, f: GraphFunction, U: Mapping[NodeId, Any]):
        f.check(g)
        self.g, self.f = g, f
        self.U = dict(U)
        self._values = evaluate(g, f, self.U)
        self.log: list[dict] = []

    def measure(self, node: str) -> Any:
        return self._values[self.g.id(node)]

    def intervene(self, delta: Mapping[str, Any]) -> None:
        ids = {self.g.id(k): val for k, val in delta.items()}
        self.U.update(ids)
        self._values = evaluate(self.g, self.f, self.U)
        self.log.append(dict(delta))


class Outcome(Enum):
    FALSIFIED = "Falsified"
    CONSISTENT = "Consistent"


@dataclass(frozen=True)
class FalsificationVerdict:
    outcome: Outcome
    trace: list = field(default_factory=list)

    @property
    def falsified(self) -> bool:
        return self.outcome is Outcome.FALSIFIED


def _labelled(g: Graph, delta: Mapping[NodeId, Any]) -> dict[str, Any]:
    return {g.label(k): val for k, val in sorted(delta.items())}


def _check_scope(g: Graph, delta: Mapping[NodeId, Any], allowed, what: str) -> None:
    for k in delta:
        g.check_node(k)
        if k not in allowed:
            raise IllegalIntervention(f"{what} touches {g.label(k)}, outside its permitted set")


def _measure(world: World, g: Graph, nodes) -> dict[str, Any]:
    return {g.label(w): world.measure(g.label(w)) for w in nodes}


def falsify_unconditional(
    world: World,
    g: Graph,
    u: NodeId,
    v: NodeId,
    intervention: Mapping[NodeId, Any],
    eq=operator.eq,
) -> FalsificationVerdict:
    """Move unobserved terms of ``u`` and its ancestors and watch ``v``.

    Under a correct hypothesis that separates ``u`` and ``v`` with nothing
    conditioned, ``v`` stays put.
    """
    if not d_separated(g, u, v, ()):
        raise PreconditionViolated(
            f"{g.label(u)} and {g.label(v)} are d-connected in the hypothesis"
        )
    _check_scope(g, intervention, ancestors(g, u) | {u}, "intervention")
    trace = [("measure", _measure(world, g, [v]))]
    before = trace[-1][1][g.label(v)]
    delta = _labelled(g, intervention)
    world.intervene(delta)
    trace.append(("intervene", delta))
    trace.append(("measure", _measure(world, g, [v])))
    after = trace[-1][1][g.label(v)]
    outcome = Outcome.CONSISTENT if eq(before, after) else Outcome.FALSIFIED
    return FalsificationVerdict(outcome, trace)


def falsify_single_condition(
    world: World,
    g: Graph,
    u: NodeId,
    v: NodeId,
    z: NodeId,
    catalyst: Mapping[NodeId, Any],
    repair: Mapping[NodeId, Any],
    eq=operator.eq,
) -> FalsificationVerdict:
    """Perturb ``u``'s side, put ``z`` back, and watch ``v``.

    The catalyst may touch ``u`` and its ancestors reachable without passing
    ``z``; it must move ``z``.  The repair may touch ``z`` and its ancestors; it
    must restore ``z`` and leave ``u`` alone.  When either side condition fails
    the run proves nothing and :class:`InconclusiveRun` is raised.
    """
    if not d_separated(g, u, v, (z,)):
        raise PreconditionViolated(
            f"{g.label(u)} and {g.label(v)} are d-connected given {g.label(z)} in the hypothesis"
        )
    _check_scope(g, catalyst, unblocked_ancestors(g, u, (z,)), "catalyst")
    _check_scope(g, repair, ancestors(g, z) | {z}, "repair")
    watch = [u, v, z]
    lu, lv, lz = (g.label(w) for w in watch)
    trace = [("measure", _measure(world, g, watch))]
    start = trace[-1][1]
    world.intervene(_labelled(g, catalyst))
    trace.append(("catalyst", _labelled(g, catalyst)))
    trace.append(("measure", _measure(world, g, watch)))
    perturbed = trace[-1][1]
    if eq(perturbed[lz], start[lz]):
        raise InconclusiveRun(f"catalyst left {lz} unchanged", trace)
    world.intervene(_labelled(g, repair))
    trace.append(("repair", _labelled(g, repair)))
    trace.append(("measure", _measure(world, g, watch)))
    repaired = trace[-1][1]
    if not eq(repaired[lz], start[lz]):
        raise InconclusiveRun(f"repair did not restore {lz}", trace)
    if not eq(repaired[lu], perturbed[lu]):
        raise InconclusiveRun(f"repair changed {lu}", trace)
    outcome = Outcome.CONSISTENT if eq(repaired[lv], start[lv]) else Outcome.FALSIFIED
    return FalsificationVerdict(outcome, trace)

