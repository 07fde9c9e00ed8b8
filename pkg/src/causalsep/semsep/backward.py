"""Backward construction: read a d-connected path off a witness that changes
``v``.

The value change at ``v`` is traced up a chain of changed parents to a node
``a`` whose unobserved term moved.  If ``a`` also feeds ``u`` without passing
through a conditioned node, the two directed routes out of ``a`` already form a
d-connected path.  Otherwise ``a`` was moved by a repair, and every repair is
owed to a conditioned node disturbed by the window before it.  Following that
chain of blame back to the first window yields a path from ``u`` into each
conditioned node involved, and gluing these pieces together at the
conditioned nodes (which become colliders) gives the result.
"""

from __future__ import annotations

import operator
from typing import Any, Mapping, Sequence

from ..dsep import _blocked, _desc_fn
from ..errors import NotAWitness
from ..graph import Graph, NodeId, Path, unblocked_directed_path
from ..semantics import GraphFunction, evaluate
from .witness import AncestorIndex, WitnessSequence, changed_nodes, check_witness


def join_at_common_ancestor(
    g: Graph, left: NodeId, right: NodeId, apex: NodeId, Z
) -> list[NodeId]:
    """Path ``left <- .. <- x -> .. -> right`` built from unblocked directed
    routes ``apex -> left`` and ``apex -> right``.

    ``x`` is the first node of the left route, read from ``left``, that also
    lies on the right route, so the result never repeats a node.
    """
    to_left = unblocked_directed_path(g, apex, left, Z)
    to_right = unblocked_directed_path(g, apex, right, Z)
    if to_left is None or to_right is None:
        raise AssertionError("apex is not an unblocked ancestor of both ends")
    back = to_left[::-1]
    on_right = {w: k for k, w in enumerate(to_right)}
    for k, w in enumerate(back):
        if w in on_right:
            return back[: k + 1] + to_right[on_right[w] + 1 :]
    raise AssertionError("directed routes from one apex must meet")


def splice(first: Sequence[NodeId], second: Sequence[NodeId]) -> list[NodeId]:
    """Join ``first`` (ending where ``second`` starts) without repeating nodes:
    cut at the first node of ``first`` that also lies on ``second``."""
    pos = {w: k for k, w in enumerate(second)}
    for k, w in enumerate(first):
        if w in pos:
            return list(first[:k]) + list(second[pos[w] :])
    raise AssertionError("paths to splice must share a node")


class _Extractor:
    def __init__(self, g, u, v, AZ, seq, eq):
        self.g, self.u, self.v = g, u, v
        self.Z = frozenset(AZ)
        self.idx = AncestorIndex(g, u, self.Z)
        self.seq = seq
        self.changed = [None] + [
            changed_nodes(seq[i - 1], seq[i], eq) for i in range(1, len(seq))
        ]

    def into(self, z: NodeId, j: int) -> list[NodeId]:
        """Path from ``u`` to ``z`` ending with an edge into ``z`` whose
        interior is d-connected given the conditioning set, for a conditioned
        node ``z`` disturbed by the changes of step ``j``."""
        moved = self.changed[j] & self.idx.of_z[z]
        candidates = sorted(moved - {z})
        if not candidates:
            # only z's own term moved, which a repair may do only on behalf of z
            return self.into(z, j - 1)
        b = candidates[0]
        if b in self.idx.of_u:
            return join_at_common_ancestor(self.g, self.u, z, b, self.Z)
        blamed = self.idx.contributors(self.changed[j - 1])
        if z in blamed:
            return self.into(z, j - 1)
        z2 = next(x for x in blamed if b in self.idx.of_z[x])
        return splice(self.into(z2, j - 1), join_at_common_ancestor(self.g, z2, z, b, self.Z))


def _changed_source(g: Graph, f: GraphFunction, U0, UL, v: NodeId, eq) -> NodeId:
    """Walk up from ``v`` through parents whose values differ until reaching a
    node whose own unobserved term differs."""
    before, after = evaluate(g, f, U0), evaluate(g, f, UL)
    cur = v
    while eq(U0[cur], UL[cur]):
        cur = next(p for p in g._parents[cur] if not eq(before[p], after[p]))
    return cur


def extract_d_connected_path(
    g: Graph,
    u: NodeId,
    v: NodeId,
    Z,
    AZ: Mapping[NodeId, Any],
    f: GraphFunction,
    w: WitnessSequence,
    eq=operator.eq,
) -> Path:
    """A path between ``u`` and ``v`` that is d-connected given ``Z``, built
    from a valid witness under which ``v`` changes."""
    verdict = check_witness(g, f, u, v, AZ, w, eq=eq)
    if not verdict.valid:
        raise NotAWitness(f"condition {verdict.failed_condition.value} fails")
    if not verdict.v_changed:
        raise NotAWitness("the value of v does not change")
    if frozenset(Z) != frozenset(AZ):
        raise NotAWitness("conditioning values must cover exactly the conditioning set")
    seq = w.sequence
    ex = _Extractor(g, u, v, AZ, seq, eq)
    a = _changed_source(g, f, seq[0], seq[-1], v, eq)
    if a in ex.idx.of_u:
        nodes = join_at_common_ancestor(g, u, v, a, ex.Z)
    else:
        i = next(k for k in range(1, len(seq)) if a in ex.changed[k])
        z = next(x for x in ex.idx.contributors(ex.changed[i - 1]) if a in ex.idx.of_z[x])
        nodes = splice(ex.into(z, i - 1), join_at_common_ancestor(g, z, v, a, ex.Z))
    if _blocked(g, tuple(nodes), ex.Z, _desc_fn(g)):
        raise AssertionError(f"extracted path {g.labels(nodes)} is blocked")
    return Path.of(nodes)
