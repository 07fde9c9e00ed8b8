"""Deterministic functional semantics of a causal graph.

Every node carries a node function taking its unobserved term and the values of
its parents (in ascending parent id order) to a value.  A graph function is one
node function per node; paired with an assignment of unobserved terms it fixes
the value of every node, computed in topological order.
"""

from __future__ import annotations

import itertools
import operator
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import ArityMismatch, DomainError, MissingUnobservedTerm
from .graph import Graph, NodeId, require_acyclic

Value = Hashable
Assignments = dict  # NodeId -> Value, at most one binding per node


@dataclass(frozen=True)
class ValueDomain:
    """A finite ordered set of values with a decidable equality."""

    elements: tuple
    name: str = ""
    eq: Callable[[Any, Any], bool] = field(default=operator.eq, compare=False)

    def __post_init__(self):
        elems = tuple(self.elements)
        object.__setattr__(self, "elements", elems)
        distinct = []
        for x in elems:
            if not any(self.eq(x, y) for y in distinct):
                distinct.append(x)
        if len(distinct) < 2:
            raise DomainError("a value domain needs at least two distinct elements")
        if len(distinct) != len(elems):
            raise DomainError("domain elements must be pairwise distinct")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return any(self.eq(x, y) for y in self.elements)

    def index(self, x) -> int:
        for i, y in enumerate(self.elements):
            if self.eq(x, y):
                return i
        raise DomainError(f"{x!r} is not in the domain")

    def other_than(self, x):
        """First element, in domain order, that differs from ``x``."""
        return next(y for y in self.elements if not self.eq(x, y))


BOOL = ValueDomain((0, 1), name="bool")


def integer_domain(size: int) -> ValueDomain:
    return ValueDomain(tuple(range(size)), name=f"int{size}")


# -- node functions -----------------------------------------------------------------


class NodeFunction:
    """Map from (unobserved value, parent values) to a value.

    ``arity`` is the expected parent count, or ``None`` when the function
    accepts any number of parents.  Subclasses must provide it.
    """

    arity: int | None

    def __call__(self, unobserved, parent_values: Sequence) -> Any:
        raise NotImplementedError


def _nth_default(default, values: Sequence, i: int):
    return values[i] if 0 <= i < len(values) else default


@dataclass(frozen=True)
class CopyUnobserved(NodeFunction):
    arity: int | None = None

    def __call__(self, unobserved, parent_values):
        return unobserved


@dataclass(frozen=True)
class CopyParent(NodeFunction):
    """Value of parent ``index``; falls back to the unobserved term if absent."""

    index: int
    arity: int | None = None

    def __call__(self, unobserved, parent_values):
        return _nth_default(unobserved, parent_values, self.index)


@dataclass(frozen=True)
class EquateParents(NodeFunction):
    """``if_equal`` when parents ``i`` and ``j`` agree, ``otherwise`` if not."""

    i: int
    j: int
    if_equal: Any
    otherwise: Any
    arity: int | None = None
    eq: Callable[[Any, Any], bool] = field(default=operator.eq, compare=False)

    def __call__(self, unobserved, parent_values):
        a = _nth_default(unobserved, parent_values, self.i)
        b = _nth_default(unobserved, parent_values, self.j)
        return self.if_equal if self.eq(a, b) else self.otherwise


@dataclass(frozen=True)
class Constant(NodeFunction):
    value: Any
    arity: int | None = None

    def __call__(self, unobserved, parent_values):
        return self.value


@dataclass(frozen=True)
class Rule(NodeFunction):
    """Wrap an arbitrary callable ``fn(unobserved, parent_values)``."""

    fn: Callable[[Any, Sequence], Any]
    arity: int | None = None

    def __call__(self, unobserved, parent_values):
        return self.fn(unobserved, parent_values)


@dataclass(frozen=True)
class TruthTable(NodeFunction):
    """Total table over ``domain ** (arity + 1)``.

    Rows are indexed in mixed radix with the unobserved term as the most
    significant digit, followed by the parents in canonical order.
    """

    domain: ValueDomain
    arity: int
    table: tuple

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(self.table))
        if len(self.table) != len(self.domain) ** (self.arity + 1):
            raise ArityMismatch(
                f"table of length {len(self.table)} does not fit arity {self.arity}"
            )
        for x in self.table:
            if x not in self.domain:
                raise DomainError(f"table value {x!r} is not in the domain")

    def row(self, unobserved, parent_values) -> int:
        d = len(self.domain)
        k = self.domain.index(unobserved)
        for x in parent_values:
            k = k * d + self.domain.index(x)
        return k

    def __call__(self, unobserved, parent_values):
        if len(parent_values) != self.arity:
            raise ArityMismatch(f"expected {self.arity} parent values, got {len(parent_values)}")
        return self.table[self.row(unobserved, parent_values)]

    @classmethod
    def tabulate(cls, fn: NodeFunction, arity: int, domain: ValueDomain) -> "TruthTable":
        """Freeze any node function into a table for a given arity."""
        rows = [
            fn(xs[0], list(xs[1:]))
            for xs in itertools.product(domain.elements, repeat=arity + 1)
        ]
        return cls(domain, arity, tuple(rows))


# -- graph functions -------------------------------------------------------------------


@dataclass(frozen=True)
class GraphFunction:
    """One node function per node id."""

    per_node: tuple

    def __init__(self, per_node: Mapping[NodeId, NodeFunction] | Sequence[NodeFunction]):
        if isinstance(per_node, Mapping):
            n = len(per_node)
            missing = [i for i in range(n) if i not in per_node]
            if missing:
                raise ValueError(f"no node function for node {missing[0]}")
            per_node = [per_node[i] for i in range(n)]
        object.__setattr__(self, "per_node", tuple(per_node))

    def __getitem__(self, v: NodeId) -> NodeFunction:
        return self.per_node[v]

    def __len__(self) -> int:
        return len(self.per_node)

    def check(self, g: Graph) -> None:
        if len(self.per_node) != len(g):
            raise ArityMismatch(f"{len(self.per_node)} node functions for {len(g)} nodes")
        for v in g.nodes:
            a = self.per_node[v].arity
            if a is not None and a != len(g._parents[v]):
                raise ArityMismatch(g.label(v))

    def tabulate(self, g: Graph, domain: ValueDomain) -> "GraphFunction":
        return GraphFunction(
            [TruthTable.tabulate(self.per_node[v], len(g._parents[v]), domain) for v in g.nodes]
        )


def uniform(g: Graph, fn: NodeFunction) -> GraphFunction:
    return GraphFunction([fn] * len(g))


def evaluate(g: Graph, f: GraphFunction, U: Mapping[NodeId, Any]) -> dict:
    """Value of every node under ``f`` and unobserved terms ``U``."""
    order = require_acyclic(g)
    f.check(g)
    for v in g.nodes:
        if v not in U:
            raise MissingUnobservedTerm(g.label(v))
    return _evaluate(order, g._parents, f.per_node, U)


def _evaluate(order, parents, funcs, U) -> dict:
    val = {}
    for v in order:
        val[v] = funcs[v](U[v], [val[p] for p in parents[v]])
    return val


def node_value(g: Graph, f: GraphFunction, U: Mapping[NodeId, Any], v: NodeId):
    g.check_node(v)
    return evaluate(g, f, U)[v]


def properly_conditions(
    g: Graph, f: GraphFunction, U: Mapping[NodeId, Any], AZ: Mapping[NodeId, Any], eq=operator.eq
) -> bool:
    """True iff every conditioned node evaluates to its conditioning value."""
    for z in AZ:
        g.check_node(z)
    if not AZ:
        return True
    val = evaluate(g, f, U)
    return all(eq(val[z], AZ[z]) for z in AZ)


def constant_assignment(nodes: Iterable[NodeId], value) -> dict:
    return {v: value for v in nodes}


def evaluate_many(g: Graph, f: GraphFunction, U, domain: ValueDomain = BOOL):
    """Evaluate a batch of unobserved-term assignments at once.

    ``U`` is an integer array of shape ``(batch, n)`` holding domain indices;
    the result has the same shape.  The constructed node functions (copies,
    parent comparisons, constants) and truth tables run vectorized; anything
    else falls back to a per-row call.
    """
    order = require_acyclic(g)
    f.check(g)
    U = np.asarray(U)
    el = domain.elements
    out = np.empty_like(U)
    for w in order:
        fn = f[w]
        pa = g._parents[w]
        if isinstance(fn, CopyUnobserved):
            out[:, w] = U[:, w]
        elif isinstance(fn, CopyParent):
            out[:, w] = out[:, pa[fn.index]] if fn.index < len(pa) else U[:, w]
        elif isinstance(fn, EquateParents) and max(fn.i, fn.j) < len(pa):
            same = out[:, pa[fn.i]] == out[:, pa[fn.j]]
            out[:, w] = np.where(same, domain.index(fn.if_equal), domain.index(fn.otherwise))
        elif isinstance(fn, Constant):
            out[:, w] = domain.index(fn.value)
        elif isinstance(fn, TruthTable) and fn.domain == domain:
            row = U[:, w].copy()
            for p in pa:
                row = row * len(domain) + out[:, p]
            tab = np.array([domain.index(x) for x in fn.table])
            out[:, w] = tab[row]
        else:
            out[:, w] = [
                domain.index(fn(el[U[k, w]], [el[out[k, p]] for p in pa])) for k in range(len(U))
            ]
    return out
