"""JSON interchange for graphs, worlds, assignments and witnesses.

All readers accept ``str`` or ``bytes`` and raise :class:`MalformedJSON` for
syntax errors (with line and column) or :class:`SchemaError` naming the
offending field.  Graph-level problems (unknown endpoints, duplicates, self
loops) surface as the usual graph errors.
"""

from __future__ import annotations

import itertools
import json
from typing import Any, Mapping

from .errors import MalformedJSON, SchemaError
from .graph import Graph, NodeId, build_graph
from .semantics import BOOL, GraphFunction, TruthTable, ValueDomain
from .semsep.witness import WitnessSequence

DOMAINS = {"bool": BOOL}


def _load(data) -> Any:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as e:
            raise MalformedJSON(f"not UTF-8 at byte {e.start}") from None
    try:
        return json.loads(data)
    except json.JSONDecodeError as e:
        raise MalformedJSON(f"line {e.lineno} column {e.colno}: {e.msg}") from None


def _expect(cond: bool, where: str, what: str) -> None:
    if not cond:
        raise SchemaError(f"{where}: {what}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


# -- graphs ---------------------------------------------------------------------------


def graph_from_obj(obj) -> Graph:
    _expect(isinstance(obj, dict), "$", "expected an object")
    _expect("nodes" in obj, "$", 'missing field "nodes"')
    _expect("edges" in obj, "$", 'missing field "edges"')
    extra = set(obj) - {"nodes", "edges"}
    _expect(not extra, "$", f"unexpected field {sorted(extra)[0]!r}" if extra else "")
    nodes, edges = obj["nodes"], obj["edges"]
    _expect(isinstance(nodes, list), "nodes", "expected a list")
    for k, name in enumerate(nodes):
        _expect(isinstance(name, str), f"nodes[{k}]", "expected a string")
    _expect(isinstance(edges, list), "edges", "expected a list")
    pairs = []
    for k, e in enumerate(edges):
        _expect(
            isinstance(e, list) and len(e) == 2 and all(isinstance(x, str) for x in e),
            f"edges[{k}]",
            "expected a pair of node names",
        )
        pairs.append((e[0], e[1]))
    return build_graph(nodes, pairs)


def parse_graph(data) -> Graph:
    """Read the graph format ``{"nodes": [...], "edges": [[s, t], ...]}``."""
    return graph_from_obj(_load(data))


def graph_to_obj(g: Graph) -> dict:
    return {"nodes": list(g.names), "edges": [[g.names[s], g.names[t]] for s, t in g.edges]}


def serialize_graph(g: Graph) -> str:
    return dumps(graph_to_obj(g))


# -- assignments -------------------------------------------------------------------------


def _value(x, domain: ValueDomain, where: str):
    _expect(not isinstance(x, bool) and x in domain, where, f"{x!r} is not in the domain")
    return x


def assignments_from_obj(obj, g: Graph, domain: ValueDomain = BOOL, where: str = "$") -> dict:
    _expect(isinstance(obj, dict), where, "expected an object mapping node names to values")
    return {g.id(k): _value(x, domain, f"{where}.{k}") for k, x in obj.items()}


def parse_assignments(data, g: Graph, domain: ValueDomain = BOOL) -> dict:
    return assignments_from_obj(_load(data), g, domain)


def assignments_to_obj(g: Graph, A: Mapping[NodeId, Any]) -> dict:
    return {g.label(k): A[k] for k in sorted(A)}


# -- worlds ------------------------------------------------------------------------------


def _world_entries(obj) -> tuple[ValueDomain, dict]:
    _expect(isinstance(obj, dict), "$", "expected an object")
    _expect(obj.get("domain") in DOMAINS, "domain", f"unsupported domain {obj.get('domain')!r}")
    fns = obj.get("functions")
    _expect(isinstance(fns, dict), "functions", "expected an object")
    for name, spec in fns.items():
        where = f"functions.{name}"
        _expect(isinstance(spec, dict), where, "expected an object")
        _expect(isinstance(spec.get("parents"), list), f"{where}.parents", "expected a list")
        _expect(isinstance(spec.get("table"), list), f"{where}.table", "expected a list")
        for k, p in enumerate(spec["parents"]):
            _expect(isinstance(p, str), f"{where}.parents[{k}]", "expected a node name")
    return DOMAINS[obj["domain"]], fns


def _reordered_table(domain, given: list[str], canonical: list[str], table, where) -> tuple:
    """Rows re-indexed from the file's parent order to canonical order."""
    d = len(domain)
    arity = len(canonical)
    _expect(len(table) == d ** (arity + 1), where, f"expected {d ** (arity + 1)} entries")
    vals = tuple(_value(x, domain, f"{where}[{k}]") for k, x in enumerate(table))
    if given == canonical:
        return vals
    pos = [given.index(p) for p in canonical]
    out = []
    for digits in itertools.product(range(d), repeat=arity + 1):
        src = [0] * (arity + 1)
        src[0] = digits[0]
        for k, p in enumerate(pos):
            src[p + 1] = digits[k + 1]
        idx = 0
        for x in src:
            idx = idx * d + x
        out.append(vals[idx])
    return tuple(out)


def world_from_obj(obj, g: Graph) -> GraphFunction:
    domain, fns = _world_entries(obj)
    missing = [n for n in g.names if n not in fns]
    _expect(not missing, "functions", f"no function for node {missing[0]!r}" if missing else "")
    extra = [n for n in fns if n not in g.names]
    _expect(not extra, "functions", f"{extra[0]!r} is not a node of the graph" if extra else "")
    funcs = []
    for w in g.nodes:
        name = g.names[w]
        spec = fns[name]
        canonical = [g.names[p] for p in g._parents[w]]
        _expect(
            sorted(spec["parents"]) == sorted(canonical) and len(set(spec["parents"])) == len(canonical),
            f"functions.{name}.parents",
            f"expected the parents {canonical}",
        )
        table = _reordered_table(domain, spec["parents"], canonical, spec["table"], f"functions.{name}.table")
        funcs.append(TruthTable(domain, len(canonical), table))
    return GraphFunction(funcs)


def parse_world(data, g: Graph) -> GraphFunction:
    """Read ``{"domain": "bool", "functions": {name: {"parents", "table"}}}``."""
    return world_from_obj(_load(data), g)


def world_graph_from_obj(obj) -> Graph:
    """The graph a world file describes on its own: one node per function,
    an edge from each listed parent."""
    _, fns = _world_entries(obj)
    names = list(fns)
    for name, spec in fns.items():
        for p in spec["parents"]:
            _expect(p in fns, f"functions.{name}.parents", f"{p!r} has no function")
    return build_graph(names, [(p, name) for name, spec in fns.items() for p in spec["parents"]])


def world_to_obj(g: Graph, f: GraphFunction, domain: ValueDomain = BOOL) -> dict:
    name = next(k for k, dom in DOMAINS.items() if dom == domain)
    tab = f.tabulate(g, domain)
    return {
        "domain": name,
        "functions": {
            g.names[w]: {
                "parents": [g.names[p] for p in g._parents[w]],
                "table": list(tab[w].table),
            }
            for w in g.nodes
        },
    }


# -- witnesses -------------------------------------------------------------------------------


def witness_to_obj(g: Graph, w: WitnessSequence, AZ: Mapping[NodeId, Any]) -> dict:
    return {
        "alpha": w.alpha,
        "beta": w.beta,
        "sequence": [assignments_to_obj(g, U) for U in w.sequence],
        "az": assignments_to_obj(g, AZ),
    }


def witness_from_obj(obj, g: Graph, domain: ValueDomain = BOOL) -> tuple[WitnessSequence, dict]:
    _expect(isinstance(obj, dict), "$", "expected an object")
    for key in ("alpha", "beta", "sequence", "az"):
        _expect(key in obj, "$", f"missing field {key!r}")
    alpha = _value(obj["alpha"], domain, "alpha")
    beta = _value(obj["beta"], domain, "beta")
    _expect(isinstance(obj["sequence"], list), "sequence", "expected a list")
    seq = [
        assignments_from_obj(U, g, domain, f"sequence[{k}]") for k, U in enumerate(obj["sequence"])
    ]
    AZ = assignments_from_obj(obj["az"], g, domain, "az")
    return WitnessSequence(alpha, beta, tuple(seq)), AZ


def parse_witness(data, g: Graph, domain: ValueDomain = BOOL):
    """Read a witness file; returns ``(sequence, AZ, world or None)``."""
    obj = _load(data)
    w, AZ = witness_from_obj(obj, g, domain)
    f = world_from_obj(obj["world"], g) if "world" in obj else None
    return w, AZ, f
