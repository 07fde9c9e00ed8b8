"""Desk-scale verification harnesses.

Each harness sweeps small graphs, runs one side of the separation theory
against the other, and returns a report of counts plus the first few failures.
They back both the command line's ``verify-equivalence`` and the acceptance
tests.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from .dags import all_dags, random_dag
from .dsep import clean_connection_problems, d_separated, find_clean_connection, is_d_connected
from .errors import BudgetExhausted
from .graph import Graph, NodeId, Path, ancestors, require_acyclic, unblocked_ancestors
from .roles import NodeRole, triple_role
from .semantics import BOOL, ValueDomain, evaluate_many
from .semsep.backward import extract_d_connected_path
from .semsep.forward import build_g_path, build_partition, build_witness_sequence
from .semsep.search import (
    _decode,
    _values,
    function_space_size,
    random_witness,
    semantic_separation_search,
)
from .semsep.witness import check_witness

MAX_FAILURES = 20


@dataclass
class Report:
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def bump(self, key: str, k: int = 1) -> None:
        self.counts[key] = self.counts.get(key, 0) + k

    def fail(self, key: str, detail, k: int = 1) -> None:
        self.bump(key, k)
        if len(self.failures) < MAX_FAILURES:
            self.failures.append((key, detail))

    def __getitem__(self, key: str) -> int:
        return self.counts.get(key, 0)

    def lines(self) -> list[str]:
        return [f"{k}: {v}" for k, v in self.counts.items()]


def queries(g: Graph) -> tuple[tuple[NodeId, NodeId, tuple], ...]:
    """Every ordered pair of distinct nodes with every conditioning set drawn
    from the remaining nodes."""
    return _queries(len(g))


@lru_cache(maxsize=None)
def _queries(n: int) -> tuple:
    out = []
    for u, v in itertools.permutations(range(n), 2):
        rest = [w for w in range(n) if w not in (u, v)]
        for r in range(len(rest) + 1):
            out.extend((u, v, Z) for Z in itertools.combinations(rest, r))
    return tuple(out)


def _describe(g: Graph, u, v, Z) -> str:
    return f"{g!r} u={g.label(u)} v={g.label(v)} Z={g.labels(Z)}"


# -- search against the graph criterion -----------------------------------------------------


def verify_equivalence(
    max_nodes: int,
    min_nodes: int = 2,
    domain: ValueDomain = BOOL,
    budget: int = 1 << 22,
    graphs: Callable[[int], Iterator[Graph]] = all_dags,
) -> Report:
    """Compare d-separation with exhaustive semantic search on every DAG with
    ``min_nodes..max_nodes`` nodes, every pair and every conditioning set."""
    rep = Report()
    for k in ("graphs", "instances", "separated", "connected", "agree", "mismatches", "budget-exhausted"):
        rep.counts[k] = 0
    for n in range(min_nodes, max_nodes + 1):
        for g in graphs(n):
            rep.bump("graphs")
            for u, v, Z in queries(g):
                rep.bump("instances")
                dsep = d_separated(g, u, v, Z)
                rep.bump("separated" if dsep else "connected")
                try:
                    res = semantic_separation_search(g, u, v, Z, domain, budget=budget)
                except BudgetExhausted:
                    rep.fail("budget-exhausted", _describe(g, u, v, Z))
                    continue
                if res.separated == dsep:
                    rep.bump("agree")
                else:
                    rep.fail("mismatches", _describe(g, u, v, Z))
    return rep


# -- forward construction, extraction, source-fixed properties ----------------------------------


def default_path_check(g: Graph, p: Path, u, v, Z) -> bool:
    return p.start == u and p.end == v and is_d_connected(p, g, Z)


def verify_construction(
    max_nodes: int,
    fraction: float = 1.0,
    seed: int = 0,
    samples: int = 100,
    min_nodes: int = 2,
    domain: ValueDomain = BOOL,
    path_check: Callable = default_path_check,
    graphs: Callable[[int], Iterator[Graph]] = all_dags,
    extract: bool = True,
) -> Report:
    """Build the path world and witness for every d-connected query and every
    conditioning assignment; check the witness, extract a path back from it,
    and test the source-fixed properties on ``samples`` random assignments.

    With ``fraction < 1`` each query is kept independently with that
    probability.  ``extract=False`` and ``samples=0`` reduce the run to the
    witness check alone.
    """
    # separate streams so the sampled queries do not depend on ``samples``
    pick, rng = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2))
    el = domain.elements
    d = len(domain)
    rep = Report()
    for k in ("graphs", "queries", "connected", "cases", "witness-failures",
              "extraction-failures", "source-fixed-failures", "clean-failures"):
        rep.counts[k] = 0
    for n in range(min_nodes, max_nodes + 1):
        for g in graphs(n):
            rep.bump("graphs")
            qs = queries(g)
            if fraction < 1:
                keep = pick.random(len(qs)) < fraction
                qs = [q for q, k in zip(qs, keep) if k]
            rep.bump("queries", len(qs))
            for u, v, Z in qs:
                if d_separated(g, u, v, Z):
                    continue
                rep.bump("connected")
                where = _describe(g, u, v, Z)
                cc = find_clean_connection(g, u, v, Z)
                problems = clean_connection_problems(g, u, v, Z, cc)
                if problems:
                    rep.fail("clean-failures", (where, problems))
                    continue
                path = cc.path.nodes
                noncolliders = [
                    w for k, w in enumerate(path)
                    if k in (0, len(path) - 1)
                    or triple_role(g, path[k - 1], w, path[k + 1]) is not NodeRole.COLLIDER
                ]
                for values in itertools.product(range(d), repeat=len(Z)):
                    AZ = {z: el[x] for z, x in zip(Z, values)}
                    rep.bump("cases")
                    part = build_partition(g, cc, Z, AZ, domain)
                    f = build_g_path(g, part, AZ, domain=domain)
                    w = build_witness_sequence(g, part, el[0], el[1], eq=domain.eq)
                    verdict = check_witness(g, f, u, v, AZ, w, eq=domain.eq)
                    if not (verdict.valid and verdict.v_changed):
                        rep.fail("witness-failures", (where, AZ, verdict))
                        continue
                    if extract:
                        try:
                            p = extract_d_connected_path(g, u, v, Z, AZ, f, w, eq=domain.eq)
                            ok = path_check(g, p, u, v, Z)
                        except AssertionError as e:
                            ok, p = False, str(e)
                        if not ok:
                            rep.fail("extraction-failures", (where, AZ, p))
                    if samples:
                        U = rng.integers(0, d, size=(samples, n))
                        alpha = rng.integers(0, d, size=samples)
                        U[:, list(part.sources)] = alpha[:, None]
                        vals = evaluate_many(g, f, U, domain)
                        good = (vals[:, noncolliders] == alpha[:, None]).all(1)
                        if Z:
                            good &= (vals[:, list(Z)] == np.array(values)[None, :]).all(1)
                        if not good.all():
                            rep.fail("source-fixed-failures", (where, AZ, U[~good][0].tolist()))
    return rep


def verify_random_witnesses(
    count: int,
    seed: int = 0,
    max_nodes: int = 5,
    min_nodes: int = 3,
    domain: ValueDomain = BOOL,
    path_check: Callable = default_path_check,
) -> Report:
    """Sample random graphs and queries, search random graph functions for
    witnesses, and extract a d-connected path from each one found."""
    rng = np.random.default_rng(seed)
    rep = Report()
    for k in ("witnesses", "attempts", "extraction-failures", "separated-but-witnessed"):
        rep.counts[k] = 0
    lengths: dict[int, int] = {}
    while rep["witnesses"] < count:
        n = int(rng.integers(min_nodes, max_nodes + 1))
        g = random_dag(n, rng, density=float(rng.uniform(0.3, 0.8)))
        u, v = (int(x) for x in rng.choice(n, size=2, replace=False))
        rest = [w for w in g.nodes if w not in (u, v)]
        Z = tuple(sorted(w for w in rest if rng.random() < 0.4))
        rep.bump("attempts")
        wit = random_witness(g, u, v, Z, rng, domain, tries=64)
        if wit is None:
            continue
        rep.bump("witnesses")
        lengths[wit.sequence.ell] = lengths.get(wit.sequence.ell, 0) + 1
        where = _describe(g, u, v, Z)
        if d_separated(g, u, v, Z):
            rep.fail("separated-but-witnessed", where)
            continue
        try:
            p = extract_d_connected_path(g, u, v, Z, wit.az, wit.f, wit.sequence, eq=domain.eq)
            ok = path_check(g, p, u, v, Z)
        except AssertionError as e:
            ok, p = False, str(e)
        if not ok:
            rep.fail("extraction-failures", (where, p))
    for ell in sorted(lengths):
        rep.counts[f"length-{ell}"] = lengths[ell]
    return rep


# -- experiment oracles ------------------------------------------------------------------------


def _legal_deltas(nodes, d: int) -> Iterator[dict]:
    """Every partial assignment over ``nodes`` (the empty one included)."""
    nodes = sorted(nodes)
    for choice in itertools.product(range(d + 1), repeat=len(nodes)):
        yield {w: c - 1 for w, c in zip(nodes, choice) if c}


def _world_batches(g: Graph, d: int, limit: int, rng, batch: int = 4096):
    """Truth tables for every graph function, or ``limit`` random ones when the
    space is larger; yields ``(tables, exhaustive)`` batches."""
    total = function_space_size(g, BOOL)
    if total <= limit:
        for start in range(0, total, batch):
            yield _decode(g, d, start, min(batch, total - start)), True
        return
    left = limit
    while left > 0:
        k = min(batch, left)
        yield [rng.integers(0, d, size=(k, d ** (len(g._parents[w]) + 1))) for w in g.nodes], False
        left -= k


def verify_oracle_soundness(
    max_nodes: int = 4,
    world_limit: int = 1 << 16,
    seed: int = 0,
    spot_checks: int = 200,
) -> Report:
    """Hunt for a compatible world and legal run on which an oracle reports
    falsification.

    For every DAG, every pair the unconditional oracle accepts and every
    (pair, z) the single-condition oracle accepts, every graph function (or
    ``world_limit`` random ones when there are more), every starting
    assignment and every legal intervention is evaluated in bulk with the
    oracles' decision rule.  A random subset of runs is also replayed through
    the oracle functions themselves and must agree with the bulk verdict.
    """
    from .oracle import (
        Outcome,
        SimulatedWorld,
        falsify_single_condition,
        falsify_unconditional,
    )
    from .errors import InconclusiveRun
    from .semantics import GraphFunction, TruthTable

    rng = np.random.default_rng(seed)
    rep = Report()
    for k in ("graphs", "oracle-queries", "worlds", "runs", "falsified",
              "spot-checks", "spot-disagreements", "sampled-graphs"):
        rep.counts[k] = 0
    d = 2
    for n in range(2, max_nodes + 1):
        for g in all_dags(n):
            rep.bump("graphs")
            N = d**n
            sp_digits = _state_digits(n, d)
            unc = [(u, v) for u, v in itertools.permutations(g.nodes, 2) if d_separated(g, u, v, ())]
            single = [
                (u, v, z)
                for u, v in itertools.permutations(g.nodes, 2)
                for z in g.nodes
                if z not in (u, v) and d_separated(g, u, v, (z,))
            ]
            if not unc and not single:
                continue
            rep.bump("oracle-queries", len(unc) + len(single))
            plans = []
            for u, v in unc:
                scope = ancestors(g, u) | {u}
                s0, s1 = _moves(sp_digits, scope)
                deltas = [(delta, None) for delta in _legal_deltas(scope, d)]
                plans.append(("unconditional", u, v, None, (s0, s1, None), deltas))
            for u, v, z in single:
                cat = unblocked_ancestors(g, u, (z,))
                rep_scope = ancestors(g, z) | {z}
                s0, s1 = _moves(sp_digits, cat)
                r1, r2 = _moves(sp_digits, rep_scope)
                # chain each catalyst move with every repair move out of s1
                start = np.searchsorted(r1, s1)
                count = np.searchsorted(r1, s1, side="right") - start
                at = np.repeat(start, count) + _ranges(count)
                triple = (np.repeat(s0, count), np.repeat(s1, count), r2[at])
                deltas = [(c, r) for c in _legal_deltas(cat, d) for r in _legal_deltas(rep_scope, d)]
                plans.append(("single", u, v, z, triple, deltas))
            if function_space_size(g, BOOL) > world_limit:
                rep.bump("sampled-graphs")
            for tables, _ in _world_batches(g, d, world_limit, rng):
                B = tables[0].shape[0]
                rep.bump("worlds", B)
                vals = _values(_Digits(g, d, sp_digits), tables)  # (B, N, n)
                for kind, u, v, z, (s0, s1, s2), _ in plans:
                    if kind == "unconditional":
                        legal = np.ones((B, len(s0)), dtype=bool)
                        changed = vals[:, s1, v] != vals[:, s0, v]
                    else:
                        z0, z1, z2 = vals[:, s0, z], vals[:, s1, z], vals[:, s2, z]
                        legal = (z1 != z0) & (z2 == z0) & (vals[:, s2, u] == vals[:, s1, u])
                        changed = vals[:, s2, v] != vals[:, s0, v]
                    rep.bump("runs", int(legal.sum()))
                    bad = legal & changed
                    if bad.any():
                        b, t = (int(x) for x in np.argwhere(bad)[0])
                        cond = () if z is None else (z,)
                        rep.fail("falsified", (kind, _describe(g, u, v, cond), b, int(s0[t])))
            if spot_checks:
                for _ in range(spot_checks):
                    kind, u, v, z, _, deltas = plans[int(rng.integers(len(plans)))]
                    c, r = deltas[int(rng.integers(len(deltas)))]
                    tabs = [rng.integers(0, d, size=(1, d ** (len(g._parents[w]) + 1))) for w in g.nodes]
                    f = GraphFunction(
                        [TruthTable(BOOL, len(g._parents[w]), tuple(int(x) for x in tabs[w][0])) for w in g.nodes]
                    )
                    s0 = int(rng.integers(N))
                    U = {w: int(sp_digits[s0, w]) for w in g.nodes}
                    world = SimulatedWorld(g, f, U)
                    vals = _values(_Digits(g, d, sp_digits), tabs)[0]
                    s1 = int(_apply(sp_digits, c, d)[s0])
                    rep.bump("spot-checks")
                    try:
                        if kind == "unconditional":
                            got = falsify_unconditional(world, g, u, v, c).outcome
                            want = Outcome.FALSIFIED if vals[s1, v] != vals[s0, v] else Outcome.CONSISTENT
                        else:
                            got = falsify_single_condition(world, g, u, v, z, c, r).outcome
                            s2 = int(_apply(sp_digits, r, d)[s1])
                            want = Outcome.FALSIFIED if vals[s2, v] != vals[s0, v] else Outcome.CONSISTENT
                    except InconclusiveRun:
                        got = "inconclusive"
                        s2 = int(_apply(sp_digits, r, d)[s1])
                        ok = (vals[s1, z] != vals[s0, z]) and vals[s2, z] == vals[s0, z] and vals[s2, u] == vals[s1, u]
                        want = "inconclusive" if not ok else "conclusive"
                    if got == Outcome.FALSIFIED:
                        rep.fail("falsified", ("spot", _describe(g, u, v, () if z is None else (z,))))
                    if got != want:
                        rep.fail("spot-disagreements", (kind, _describe(g, u, v, () if z is None else (z,))))
    return rep


@dataclass(frozen=True)
class _Digits:
    """Minimal stand-in for the search space when only values are needed."""

    g: Graph
    d: int
    digits: np.ndarray


def _state_digits(n: int, d: int) -> np.ndarray:
    place = d ** np.arange(n - 1, -1, -1)
    return (np.arange(d**n)[:, None] // place[None, :]) % d


def _moves(digits: np.ndarray, scope) -> tuple[np.ndarray, np.ndarray]:
    """Every (state, next state) pair where the next state differs from the
    first somewhere, and only on ``scope``; sorted by first state.

    Overwriting any subset of ``scope`` reaches exactly these states, so
    checking the pairs covers every legal intervention at once."""
    outside = np.ones(digits.shape[1], dtype=bool)
    outside[list(scope)] = False
    same = (digits[:, None, outside] == digits[None, :, outside]).all(axis=2)
    np.fill_diagonal(same, False)
    return np.nonzero(same)


def _ranges(counts: np.ndarray) -> np.ndarray:
    """Concatenation of arange(c) for each c in ``counts``."""
    ends = np.cumsum(counts)
    return np.arange(ends[-1] if len(ends) else 0) - np.repeat(ends - counts, counts)


def _apply(digits: np.ndarray, delta: dict, d: int) -> np.ndarray:
    """Index of the state reached from each state by overwriting ``delta``."""
    out = digits.copy()
    for w, x in delta.items():
        out[:, w] = x
    n = digits.shape[1]
    place = d ** np.arange(n - 1, -1, -1)
    return out @ place


def verify_oracle_detection(max_nodes: int = 4, recheck_hopeless: bool = False) -> Report:
    """For each pair of hypothesis and true graph where the truth connects the
    query but the hypothesis separates it, look for a run, legal under the
    hypothesis, in which the oracle reports falsification.

    Worlds come from the path construction on the true graph, for every
    d-connected query it has and every conditioning value; runs range over
    every starting assignment and every legal boolean intervention.  Pairs the
    path worlds miss get a second chance against every XOR world on the true
    graph.  Pairs that no compatible world could ever expose (see
    :func:`_hopeless`) are counted apart and skipped; ``recheck_hopeless``
    runs each of them against every world on the true graph instead, which
    is only affordable up to three nodes.
    """
    rep = Report()
    for k in ("pairs", "detected", "detected-linear", "undetected",
              "undetected-structural", "undetected-other", "hopeless-but-detected"):
        rep.counts[k] = 0
    d = 2
    for n in range(2, max_nodes + 1):
        dags = list(all_dags(n))
        digits = _state_digits(n, d)
        world_cache: dict = {}
        linear_cache: dict = {}
        full_cache: dict = {}
        for kind in ("unconditional", "single"):
            for u, v in itertools.permutations(range(n), 2):
                zs = [None] if kind == "unconditional" else [z for z in range(n) if z not in (u, v)]
                for z in zs:
                    Z = () if z is None else (z,)
                    # hypotheses that separate, grouped by what they let us touch
                    classes: dict[tuple, int] = {}
                    for h in dags:
                        if not d_separated(h, u, v, Z):
                            continue
                        if z is None:
                            key = (frozenset(ancestors(h, u) | {u}), frozenset())
                        else:
                            key = (frozenset(unblocked_ancestors(h, u, Z)), frozenset(ancestors(h, z) | {z}))
                        classes[key] = classes.get(key, 0) + 1
                    for t in dags:
                        if d_separated(t, u, v, Z):
                            continue
                        reach_v = unblocked_ancestors(t, v, Z)
                        for (cat, rep_scope), mult in classes.items():
                            rep.bump("pairs", mult)
                            if _hopeless(t, Z, cat, rep_scope, reach_v):
                                rep.bump("undetected", mult)
                                rep.bump("undetected-structural", mult)
                                if recheck_hopeless:
                                    if t not in full_cache:
                                        full_cache[t] = _all_worlds(t, digits, d)
                                    if _detect(full_cache[t], digits, d, u, v, z, cat, rep_scope):
                                        rep.fail("hopeless-but-detected", (kind, _describe(t, u, v, Z)), mult)
                                continue
                            if t not in world_cache:
                                world_cache[t] = _path_worlds(t, digits, d)
                            if _detect(world_cache[t], digits, d, u, v, z, cat, rep_scope):
                                rep.bump("detected", mult)
                                continue
                            if t not in linear_cache:
                                linear_cache[t] = _linear_worlds(t, digits)
                            if _detect(linear_cache[t], digits, d, u, v, z, cat, rep_scope):
                                rep.bump("detected-linear", mult)
                                continue
                            rep.bump("undetected", mult)
                            rep.fail("undetected-other", (kind, _describe(t, u, v, Z), sorted(cat), sorted(rep_scope)), mult)
    return rep


def _hopeless(t: Graph, Z, cat, rep_scope, reach_v) -> bool:
    """True when no world compatible with ``t`` admits a falsifying run.

    ``reach_v`` is the set of unblocked ancestors of ``v`` in ``t`` given
    ``Z``.  At the end of a conclusive run every conditioned node is back at
    its starting value, so ``v`` can only differ if some touched node outside
    ``Z`` reaches it around ``Z``.  With a conditioned node, a catalyst that
    cannot reach it makes every run inconclusive.
    """
    if ((cat | rep_scope) - set(Z)).isdisjoint(reach_v):
        return True
    return bool(Z) and cat.isdisjoint(ancestors(t, Z[0]) | {Z[0]})


def _path_worlds(t: Graph, digits, d) -> np.ndarray:
    """Values (worlds, states, nodes) of the path construction on ``t`` for
    every d-connected query and every conditioning assignment."""
    out = []
    for a, b, Z in queries(t):
        if a > b or d_separated(t, a, b, Z):
            continue
        cc = find_clean_connection(t, a, b, Z)
        for values in itertools.product(range(d), repeat=len(Z)):
            AZ = dict(zip(Z, values))
            part = build_partition(t, cc, Z, AZ)
            out.append(evaluate_many(t, build_g_path(t, part, AZ), digits))
    return np.stack(out)


def _all_worlds(t: Graph, digits, d, limit: int = 1 << 20) -> np.ndarray:
    if function_space_size(t, BOOL) > limit:
        raise ValueError(f"{t!r} has too many graph functions to enumerate")
    batches = [tables for tables, _ in _world_batches(t, d, limit, None)]
    return np.concatenate([_values(_Digits(t, d, digits), tables) for tables in batches])


def _linear_worlds(t: Graph, digits) -> np.ndarray:
    """Values (worlds, states, nodes) of every boolean world in which each
    node is the XOR of some subset of its unobserved term and its parents."""
    n = len(t)
    order = require_acyclic(t)
    widths = [len(t._parents[w]) + 1 for w in t.nodes]
    total = 1 << sum(widths)
    idx = np.arange(total)
    vals = np.zeros((total, digits.shape[0], n), dtype=np.int64)
    offset = {}
    acc = 0
    for w in t.nodes:
        offset[w] = acc
        acc += widths[w]
    for w in order:
        bit = lambda k: ((idx >> (offset[w] + k)) & 1)[:, None]
        x = bit(0) * digits[None, :, w]
        for k, p in enumerate(t._parents[w], start=1):
            x = x ^ (bit(k) * vals[:, :, p])
        vals[:, :, w] = x
    return vals


def _detect(worlds, digits, d, u, v, z, cat, rep_scope) -> bool:
    for c in _legal_deltas(cat, d):
        s1 = _apply(digits, c, d)
        if z is None:
            if (worlds[:, s1, v] != worlds[:, :, v]).any():
                return True
            continue
        for r in _legal_deltas(rep_scope, d):
            s2 = _apply(digits, r, d)[s1]
            ok = (
                (worlds[:, s1, z] != worlds[:, :, z])
                & (worlds[:, s2, z] == worlds[:, :, z])
                & (worlds[:, s2, u] == worlds[:, s1, u])
                & (worlds[:, s2, v] != worlds[:, :, v])
            )
            if ok.any():
                return True
    return False
