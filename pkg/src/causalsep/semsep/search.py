"""Exhaustive search for separation witnesses over finite domains.

The search enumerates every graph function as a tuple of truth tables and asks,
for each one, whether some legal perturb-and-repair sequence changes ``v``.

Everything that does not depend on the graph function is computed once per
query.  Unobserved-term assignments are encoded as integers (one base-``d``
digit per node, node 0 most significant).  For every window ``(prev, cur)`` of
consecutive assignments we know which nodes the next assignment may change, and
from that the set of assignments reachable as the final one within the
remaining length bound.  Per graph function the check is then a handful of
boolean matrix products, done for a whole batch of functions at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import NamedTuple

import numpy as np

from ..errors import BudgetExhausted, GraphTooLarge
from ..graph import Graph, NodeId, require_acyclic, unblocked_ancestors
from ..semantics import BOOL, GraphFunction, TruthTable, ValueDomain
from .witness import WitnessSequence, _check_endpoints, check_witness

DEFAULT_BUDGET = 1 << 22
DEFAULT_BATCH = 2048
MAX_STATES = 1 << 7


class Witness(NamedTuple):
    f: GraphFunction
    az: dict
    sequence: WitnessSequence


class SearchResult(NamedTuple):
    separated: bool
    witness: Witness | None


@dataclass(frozen=True)
class _Space:
    """Function-independent structure of one query."""

    g: Graph
    u: NodeId
    v: NodeId
    Z: tuple
    d: int
    digits: np.ndarray  # (N, n) digit of each node in each state
    starts: np.ndarray  # (S, 2) legal (U0, U1) pairs
    reach: tuple  # reach[k][p, c] = finals reachable from window (p, c) in <= k steps
    step: np.ndarray  # step[p, c, c'] = c' may follow the window (p, c)

    @property
    def states(self) -> int:
        return self.digits.shape[0]


@lru_cache(maxsize=256)
def _space(g: Graph, u: NodeId, v: NodeId, Z: tuple, d: int) -> _Space:
    n = len(g)
    N = d**n
    if N > MAX_STATES:
        raise GraphTooLarge(f"{N} unobserved-term assignments is too many to enumerate")
    place = d ** np.arange(n - 1, -1, -1)
    digits = (np.arange(N)[:, None] // place[None, :]) % d
    diff = digits[:, None, :] != digits[None, :, :]  # (N, N, n)

    def mask(nodes) -> np.ndarray:
        m = np.zeros(n, dtype=bool)
        m[list(nodes)] = True
        return m

    anc_u = mask(unblocked_ancestors(g, u, Z))
    anc_z = np.array([mask(unblocked_ancestors(g, z, Z)) for z in Z], dtype=bool).reshape(len(Z), n)
    # nodes the step after window (p, c) may touch
    hit = (diff[:, :, None, :] & anc_z[None, None, :, :]).any(-1)  # (N, N, |Z|)
    scope = (hit[..., None] & anc_z[None, None, :, :]).any(2)  # (N, N, n)
    step = ~(diff[None, :, :, :] & ~scope[:, :, None, :]).any(-1)  # (p, c, c')
    starts = np.argwhere(~(diff & ~anc_u).any(-1))

    eye = np.eye(N, dtype=bool)
    reach = [np.broadcast_to(eye[None, :, :], (N, N, N)).copy()]
    for _ in range(n):
        prev = reach[-1].astype(np.float32)
        nxt = np.empty((N, N, N), dtype=bool)
        for c in range(N):
            nxt[:, c, :] = (step[:, c, :].astype(np.float32) @ prev[c]) > 0
        nxt |= eye[None, :, :]
        reach.append(nxt)
    return _Space(g, u, v, Z, d, digits, starts, tuple(reach), step)


def function_space_size(g: Graph, domain: ValueDomain = BOOL) -> int:
    """Number of graph functions with total tables over ``domain``."""
    d = len(domain)
    total = 1
    for v in g.nodes:
        total *= d ** (d ** (len(g._parents[v]) + 1))
    return total


def _radices(g: Graph, d: int) -> list[int]:
    return [d ** (d ** (len(g._parents[v]) + 1)) for v in g.nodes]


def _decode(g: Graph, d: int, start: int, count: int) -> list[np.ndarray]:
    """Truth tables (as digit arrays) of functions ``start .. start+count-1``.

    Mixed radix with node 0 varying fastest.
    """
    k = np.arange(count, dtype=np.int64)
    out = []
    place = 1
    for v, radix in zip(g.nodes, _radices(g, d)):
        if radix > 1 << 62:
            raise GraphTooLarge(f"too many node functions at {g.label(v)} to enumerate")
        q0, r0 = divmod(start, place)
        gap = place - r0
        if gap > count:
            inc = np.zeros(count, dtype=np.int64)
        elif place > count:
            inc = (k >= gap).astype(np.int64)
        else:
            inc = (r0 + k) // place
        idx = (q0 % radix + inc) % radix
        rows = d ** (len(g._parents[v]) + 1)
        pw = d ** np.arange(rows, dtype=np.int64)
        out.append((idx[:, None] // pw[None, :]) % d)
        place *= radix
    return out


def _values(sp: _Space, tables: list[np.ndarray]) -> np.ndarray:
    """Node values (as digits) for every function in the batch and every state."""
    g, d = sp.g, sp.d
    B = tables[0].shape[0]
    N, n = sp.digits.shape
    vals = np.empty((B, N, n), dtype=np.int64)
    bidx = np.arange(B)[:, None]
    for w in require_acyclic(g):
        row = np.broadcast_to(sp.digits[None, :, w], (B, N)).copy()
        for p in g._parents[w]:
            row = row * d + vals[:, :, p]
        vals[:, :, w] = tables[w][bidx, row]
    return vals


def _az_choices(sp: _Space) -> list[tuple]:
    return list(product(range(sp.d), repeat=len(sp.Z)))


def _hits(sp: _Space, vals: np.ndarray, az: tuple) -> np.ndarray:
    """(B, starts) mask: a witness exists from this start under this AZ."""
    d = sp.d
    B = vals.shape[0]
    if sp.Z:
        cond = (vals[:, :, list(sp.Z)] == np.array(az)[None, None, :]).all(-1)
    else:
        cond = np.ones(vals.shape[:2], dtype=bool)
    uval = vals[:, :, sp.u]
    vval = vals[:, :, sp.v]
    p, c = sp.starts[:, 0], sp.starts[:, 1]
    R = sp.reach[-1][p, c, :].astype(np.float32)  # (S, N)
    found = np.zeros((d, d, B, len(p)), dtype=bool)
    for a in range(d):
        for b in range(d):
            target = (cond & (uval == a) & (vval != b)).astype(np.float32)
            found[a, b] = (target @ R.T) > 0
    pick = uval[:, c] * d + vval[:, p]  # (B, S)
    flat = found.reshape(d * d, B, len(p))
    out = np.take_along_axis(flat, pick[None], 0)[0]
    return out & cond[:, p]


def _targets(sp: _Space, vals_f: np.ndarray, az: tuple, p: int, c: int) -> np.ndarray:
    if sp.Z:
        cond = (vals_f[:, list(sp.Z)] == np.array(az)[None, :]).all(-1)
    else:
        cond = np.ones(vals_f.shape[0], dtype=bool)
    return cond & (vals_f[:, sp.u] == vals_f[c, sp.u]) & (vals_f[:, sp.v] != vals_f[p, sp.v])


def _trace(sp: _Space, vals_f: np.ndarray, az: tuple, p: int, c: int, rng=None) -> list[int]:
    """A state sequence from the window ``(p, c)`` ending at a target.

    Without ``rng`` the shortest sequence (smallest states first) is returned;
    with one, each step picks uniformly among moves that can still succeed.
    """
    tgt = _targets(sp, vals_f, az, p, c)
    n = len(sp.g)
    if rng is None:
        # breadth-first over windows
        frontier = [(p, c, (p, c))]
        seen = {(p, c)}
        for _ in range(n + 1):
            nxt = []
            for a, b, path in frontier:
                if tgt[b]:
                    return list(path)
                for b2 in np.flatnonzero(sp.step[a, b]):
                    b2 = int(b2)
                    if (b, b2) not in seen:
                        seen.add((b, b2))
                        nxt.append((b, b2, path + (b2,)))
            frontier = nxt
        raise AssertionError("no target reachable despite a recorded hit")
    path = [p, c]
    for k in range(n, -1, -1):
        a, b = path[-2], path[-1]
        moves = []
        if tgt[b]:
            moves.append(None)
        if k > 0:
            ok = sp.step[a, b] & (sp.reach[k - 1][b][:, tgt].any(-1))
            moves.extend(int(x) for x in np.flatnonzero(ok))
        if not moves:
            raise AssertionError("random trace fell off the reachable set")
        m = moves[int(rng.integers(len(moves)))]
        if m is None:
            return path
        path.append(m)
    raise AssertionError("random trace exceeded the length bound")


def _witness(sp: _Space, domain: ValueDomain, tables, b: int, az: tuple, states: list[int]) -> Witness:
    g = sp.g
    el = domain.elements
    funcs = [
        TruthTable(domain, len(g._parents[w]), tuple(el[int(x)] for x in tables[w][b]))
        for w in g.nodes
    ]
    f = GraphFunction(funcs)
    seq = [{w: el[int(sp.digits[s, w])] for w in g.nodes} for s in states]
    vals = _values(sp, [t[b : b + 1] for t in tables])[0]
    alpha = el[int(vals[states[0], sp.u])]
    beta = el[int(vals[states[1], sp.u])]
    AZ = {z: el[x] for z, x in zip(sp.Z, az)}
    w = WitnessSequence(alpha, beta, tuple(seq))
    verdict = check_witness(g, f, sp.u, sp.v, AZ, w, eq=domain.eq)
    if not (verdict.valid and verdict.v_changed):
        raise AssertionError(f"search produced a rejected witness: {verdict}")
    return Witness(f, AZ, w)


def _prepare(g, u, v, Z, domain) -> _Space:
    Z = tuple(sorted(set(Z)))
    _check_endpoints(g, u, v, Z)
    require_acyclic(g)
    return _space(g, u, v, Z, len(domain))


def _scan(sp: _Space, tables, rng=None):
    """First (batch row, az, state sequence) with a witness, or ``None``."""
    vals = _values(sp, tables)
    for az in _az_choices(sp):
        hits = _hits(sp, vals, az)
        rows = np.flatnonzero(hits.any(1))
        if rows.size:
            b = int(rows[0] if rng is None else rng.choice(rows))
            cols = np.flatnonzero(hits[b])
            s = int(cols[0] if rng is None else rng.choice(cols))
            p, c = (int(x) for x in sp.starts[s])
            return b, az, _trace(sp, vals[b], az, p, c, rng)
    return None


def semantic_separation_search(
    g: Graph,
    u: NodeId,
    v: NodeId,
    Z=(),
    domain: ValueDomain = BOOL,
    budget: int = DEFAULT_BUDGET,
    f_range: tuple[int, int] | None = None,
    batch: int = DEFAULT_BATCH,
) -> SearchResult:
    """Decide separation of ``u`` and ``v`` given ``Z`` by exhaustive search.

    Every graph function with index in ``f_range`` (default: all of them) is
    tried against every conditioning assignment and every legal sequence.  The
    result says ``separated=True`` only once the whole range has been covered
    without finding a witness; if more than ``budget`` functions would be
    needed, :class:`BudgetExhausted` is raised instead.

    The range can be split into pieces and searched independently; a witness
    exists in the whole range iff it exists in one of the pieces.
    """
    sp = _prepare(g, u, v, Z, domain)
    total = function_space_size(g, domain)
    lo, hi = (0, total) if f_range is None else f_range
    lo, hi = max(lo, 0), min(hi, total)
    done = 0
    start = lo
    while start < hi:
        if done >= budget:
            raise BudgetExhausted(
                f"checked {done} of {hi - lo} graph functions without a verdict"
            )
        count = min(batch, hi - start, budget - done)
        tables = _decode(g, sp.d, start, count)
        found = _scan(sp, tables)
        if found is not None:
            b, az, states = found
            return SearchResult(False, _witness(sp, domain, tables, b, az, states))
        start += count
        done += count
    return SearchResult(True, None)


def random_witness(
    g: Graph,
    u: NodeId,
    v: NodeId,
    Z,
    rng: np.random.Generator,
    domain: ValueDomain = BOOL,
    tries: int = 256,
) -> Witness | None:
    """A witness for one of ``tries`` randomly drawn graph functions, if any.

    The sequence is drawn by a random walk over legal continuations, so
    witnesses of every admissible length turn up.
    """
    sp = _prepare(g, u, v, Z, domain)
    d = sp.d
    tables = [
        rng.integers(0, d, size=(tries, d ** (len(g._parents[w]) + 1)))
        for w in g.nodes
    ]
    found = _scan(sp, tables, rng)
    if found is None:
        return None
    b, az, states = found
    return _witness(sp, domain, tables, b, az, states)
