"""Command line interface.

Exit codes: 0 success (or Consistent), 2 Falsified, 3 Inconclusive, 1 for a
library error (reported by name), 64 usage error, 65 malformed input file,
66 unreadable input file.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import io
from .dsep import d_separated, find_clean_connection, find_d_connected_path, is_d_connected
from .errors import CausalSepError, DSeparated, FormatError, InconclusiveRun
from .graph import Graph, enumerate_paths
from .oracle import SimulatedWorld, falsify_single_condition, falsify_unconditional
from .semantics import BOOL
from .semsep import (
    build_g_path,
    build_partition,
    build_witness_sequence,
    check_witness,
)

EX_USAGE, EX_DATAERR, EX_NOINPUT = 64, 65, 66
EXIT_FALSIFIED, EXIT_INCONCLUSIVE = 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _names(text: str | None) -> list[str]:
    if not text:
        return []
    return [x.strip() for x in text.split(",") if x.strip()]


def _graph(args) -> Graph:
    return io.parse_graph(_read(args.graph))


def _query(g: Graph, args):
    return g.id(args.u), g.id(args.v), tuple(sorted(g.id(x) for x in _names(args.cond)))


def _emit(obj) -> None:
    sys.stdout.write(io.dumps(obj))


# -- commands ---------------------------------------------------------------------------------


def cmd_check(args) -> int:
    g = _graph(args)
    u, v, Z = _query(g, args)
    if d_separated(g, u, v, Z):
        result = {"verdict": "d-separated", "path": None}
    else:
        p = find_d_connected_path(g, u, v, Z)
        result = {"verdict": "d-connected", "path": g.labels(p.nodes), "shape": p.show(g)}
    if args.json:
        _emit(result)
    else:
        print(result["verdict"])
        if result["path"]:
            print("path:", result["shape"])
    return 0


def cmd_paths(args) -> int:
    g = _graph(args)
    u, v, Z = _query(g, args)
    out = [
        {"path": g.labels(p.nodes), "d_connected": is_d_connected(p, g, Z)}
        for p in enumerate_paths(g, u, v)
    ]
    _emit({"paths": out})
    return 0


def cmd_witness_path(args) -> int:
    g = _graph(args)
    u, v, Z = _query(g, args)
    p = find_d_connected_path(g, u, v, Z)
    _emit({"separated": p is None, "path": None if p is None else g.labels(p.nodes)})
    return 0


def cmd_clean_path(args) -> int:
    g = _graph(args)
    u, v, Z = _query(g, args)
    cc = find_clean_connection(g, u, v, Z)
    if cc is None:
        _emit({"separated": True})
    else:
        _emit({"separated": False, **cc.show(g)})
    return 0


def _az(g: Graph, Z, text: str | None) -> dict:
    AZ = {z: BOOL.elements[0] for z in Z}
    for item in _names(text):
        name, _, val = item.partition("=")
        z = g.id(name.strip())
        if z not in AZ:
            raise UsageError(f"--az: {name} is not in the conditioning set")
        try:
            AZ[z] = int(val)
        except ValueError:
            raise UsageError(f"--az: bad value {val!r}") from None
        if AZ[z] not in BOOL:
            raise UsageError(f"--az: {val!r} is not a boolean value")
    return AZ


def cmd_witness(args) -> int:
    g = _graph(args)
    u, v, Z = _query(g, args)
    AZ = _az(g, Z, args.az)
    cc = find_clean_connection(g, u, v, Z)
    if cc is None:
        raise DSeparated(f"{args.u} and {args.v} are d-separated; no witness exists")
    part = build_partition(g, cc, Z, AZ)
    f = build_g_path(g, part, AZ)
    w = build_witness_sequence(g, part, args.alpha, args.beta)
    obj = io.witness_to_obj(g, w, AZ)
    obj["world"] = io.world_to_obj(g, f)
    obj["path"] = g.labels(cc.path.nodes)
    _emit(obj)
    return 0


def cmd_check_witness(args) -> int:
    g = _graph(args)
    u, v = g.id(args.u), g.id(args.v)
    w, AZ, f = io.parse_witness(_read(args.witness), g)
    if args.world:
        f = io.parse_world(_read(args.world), g)
    if f is None:
        raise UsageError("check-witness: no world given (--world or a \"world\" field)")
    verdict = check_witness(g, f, u, v, AZ, w)
    _emit(
        {
            "valid": verdict.valid,
            "failed_condition": None if verdict.failed_condition is None else verdict.failed_condition.value,
            "v_changed": verdict.v_changed,
        }
    )
    return 0


def cmd_verify(args) -> int:
    from .verify import verify_construction, verify_equivalence

    if args.mode == "search":
        rep = verify_equivalence(args.max_nodes, budget=args.budget)
        bad = rep["mismatches"] + rep["budget-exhausted"]
    else:
        rep = verify_construction(args.max_nodes, fraction=args.fraction, seed=args.seed)
        bad = sum(v for k, v in rep.counts.items() if k.endswith("failures"))
    for line in rep.lines():
        print(line)
    for key, detail in rep.failures:
        print(f"{key}: {detail}", file=sys.stderr)
    return 0 if bad == 0 else 1


def cmd_falsify(args) -> int:
    world_obj = io._load(_read(args.world))
    truth = io.world_graph_from_obj(world_obj)
    f = io.world_from_obj(world_obj, truth)
    U0 = io.parse_assignments(_read(args.init_u), truth)
    world = SimulatedWorld(truth, f, U0)
    g = _graph(args)
    u, v = g.id(args.u), g.id(args.v)
    catalyst = io.parse_assignments(_read(args.catalyst), g)
    try:
        if args.z is None:
            if args.repair:
                raise UsageError("falsify: --repair needs --z")
            verdict = falsify_unconditional(world, g, u, v, catalyst)
        else:
            repair = io.parse_assignments(_read(args.repair), g) if args.repair else {}
            verdict = falsify_single_condition(world, g, u, v, g.id(args.z), catalyst, repair)
    except InconclusiveRun as e:
        _emit({"verdict": "Inconclusive", "reason": str(e), "trace": _trace(e.trace)})
        return EXIT_INCONCLUSIVE
    _emit({"verdict": verdict.outcome.value, "trace": _trace(verdict.trace)})
    return EXIT_FALSIFIED if verdict.falsified else 0


def _trace(trace) -> list:
    return [{"action": a, "values": vals} for a, vals in trace]


# -- parser -------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="causalsep", description="Causal separation queries, witnesses and oracles.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def query(sp, cond=True):
        sp.add_argument("--graph", required=True, help="graph JSON file")
        sp.add_argument("--u", required=True)
        sp.add_argument("--v", required=True)
        if cond:
            sp.add_argument("--cond", default="", help="comma-separated conditioning set")

    sp = sub.add_parser("check", help="decide d-separation")
    query(sp)
    sp.add_argument("--json", action="store_true", help="machine-readable output")
    sp.set_defaults(run=cmd_check)

    sp = sub.add_parser("paths", help="list every path and whether it is d-connected")
    query(sp)
    sp.set_defaults(run=cmd_paths)

    sp = sub.add_parser("witness-path", help="first d-connected path, if any")
    query(sp)
    sp.set_defaults(run=cmd_witness_path)

    sp = sub.add_parser("clean-path", help="d-connected path with disjoint descendant routes")
    query(sp)
    sp.set_defaults(run=cmd_clean_path)

    sp = sub.add_parser("witness", help="construct a world and witness sequence")
    query(sp)
    sp.add_argument("--az", default="", help="conditioning values, e.g. w=1,z=0 (default 0)")
    sp.add_argument("--alpha", type=int, default=0, choices=[0, 1])
    sp.add_argument("--beta", type=int, default=1, choices=[0, 1])
    sp.set_defaults(run=cmd_witness)

    sp = sub.add_parser("check-witness", help="validate a witness file")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--witness", required=True)
    sp.add_argument("--world", help="world JSON (defaults to the witness file's world)")
    sp.add_argument("--u", required=True)
    sp.add_argument("--v", required=True)
    sp.set_defaults(run=cmd_check_witness)

    sp = sub.add_parser("verify-equivalence", help="exhaustive small-graph verification")
    sp.add_argument("--max-nodes", type=int, required=True)
    sp.add_argument("--mode", choices=["search", "construct"], default="search")
    sp.add_argument("--fraction", type=float, default=1.0, help="construct mode: query sample rate")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=1 << 22, help="search mode: functions per query")
    sp.set_defaults(run=cmd_verify)

    sp = sub.add_parser("falsify", help="run an experiment oracle against a simulated world")
    sp.add_argument("--world", required=True, help="true world JSON")
    sp.add_argument("--init-u", required=True, help="initial unobserved terms JSON")
    query(sp, cond=False)
    sp.add_argument("--z")
    sp.add_argument("--catalyst", required=True, help="intervention JSON")
    sp.add_argument("--repair", help="repair JSON (with --z)")
    sp.set_defaults(run=cmd_falsify)
    return p


def run(argv: Sequence[str]) -> int:
    try:
        args = build_parser().parse_args(list(argv))
        return args.run(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EX_USAGE
    except OSError as e:
        print(f"error: cannot read {e.filename}: {e.strerror}", file=sys.stderr)
        return EX_NOINPUT
    except FormatError as e:
        print(f"error: {e.name}: {e}", file=sys.stderr)
        return EX_DATAERR
    except CausalSepError as e:
        print(f"error: {e.name}: {e}", file=sys.stderr)
        return 1


def main(argv: Sequence[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)
