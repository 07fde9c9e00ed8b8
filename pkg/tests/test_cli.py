"""Golden-file tests for every command, run in-process.

Set ``CAUSALSEP_REGEN=1`` to rewrite the golden files after an intended
output change, then review the diff.
"""

import json
import os
from pathlib import Path

import pytest

from causalsep import figures, io
from causalsep.cli import run
from causalsep.dsep import d_separated

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"
REGEN = os.environ.get("CAUSALSEP_REGEN") == "1"


def _cases():
    out = []
    for name, (_, u, v, cond) in figures.FIGURES.items():
        graph = f"figures/{name}.json"
        q = ["--graph", graph, "--u", u, "--v", v]
        c = ["--cond", ",".join(cond)]
        out += [
            (f"{name}-check", ["check", *q, *c]),
            (f"{name}-check-empty", ["check", *q]),
            (f"{name}-check-json", ["check", "--json", *q, *c]),
            (f"{name}-paths", ["paths", *q, *c]),
            (f"{name}-witness-path", ["witness-path", *q, *c]),
            (f"{name}-clean-path", ["clean-path", *q, *c]),
            (f"{name}-witness", ["witness", *q, *c]),
        ]
    fz = ["--graph", "falsify/hypothesis.json", "--init-u", "falsify/start.json",
          "--u", "caffeine", "--v", "GPA", "--z", "courseload"]
    out += [
        ("falsify-hidden", ["falsify", "--world", "falsify/world_hidden.json", *fz,
                            "--catalyst", "falsify/catalyst.json", "--repair", "falsify/repair.json"]),
        ("falsify-faithful", ["falsify", "--world", "falsify/world_faithful.json", *fz,
                              "--catalyst", "falsify/catalyst.json", "--repair", "falsify/repair.json"]),
        ("falsify-inconclusive", ["falsify", "--world", "falsify/world_hidden.json", *fz,
                                  "--catalyst", "falsify/noop.json", "--repair", "falsify/repair.json"]),
        ("falsify-repair-moves-u", ["falsify", "--world", "falsify/world_hidden.json", *fz,
                                    "--catalyst", "falsify/catalyst.json", "--repair", "falsify/repair_u.json"]),
        ("falsify-illegal", ["falsify", "--world", "falsify/world_hidden.json", *fz,
                             "--catalyst", "falsify/repair.json"]),
        ("verify-3", ["verify-equivalence", "--max-nodes", "3"]),
        ("verify-construct-3", ["verify-equivalence", "--max-nodes", "3", "--mode", "construct"]),
        ("usage-no-command", []),
        ("usage-missing-flag", ["check", "--graph", "figures/chain.json", "--u", "u"]),
        ("usage-bad-az", ["witness", "--graph", "figures/collider.json", "--u", "u", "--v", "v",
                          "--cond", "w", "--az", "w=7"]),
        ("missing-file", ["check", "--graph", "figures/nope.json", "--u", "a", "--v", "b"]),
        ("bad-truncated", ["check", "--graph", "bad/truncated.json", "--u", "a", "--v", "b"]),
        ("bad-no-edges", ["check", "--graph", "bad/no_edges.json", "--u", "a", "--v", "b"]),
        ("bad-edge-shape", ["check", "--graph", "bad/bad_edge.json", "--u", "a", "--v", "b"]),
        ("bad-unknown-endpoint", ["check", "--graph", "bad/unknown_endpoint.json", "--u", "a", "--v", "b"]),
        ("bad-duplicate", ["check", "--graph", "bad/duplicate.json", "--u", "a", "--v", "b"]),
        ("bad-cyclic", ["check", "--graph", "bad/cyclic.json", "--u", "a", "--v", "b"]),
        ("unknown-node", ["check", "--graph", "figures/chain.json", "--u", "u", "--v", "zz"]),
        ("endpoint-conditioned", ["check", "--graph", "figures/chain.json", "--u", "u", "--v", "v", "--cond", "u"]),
    ]
    return out


CASES = _cases()


def _run(argv, capsys, monkeypatch):
    monkeypatch.chdir(DATA)
    code = run(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


@pytest.mark.parametrize("name, argv", CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv, capsys, monkeypatch):
    code, out, err = _run(argv, capsys, monkeypatch)
    text = f"{out}--- stderr ---\n{err}--- exit {code} ---\n"
    path = GOLDEN / f"{name}.txt"
    if REGEN:
        path.write_text(text)
    assert path.read_text() == text


@pytest.mark.parametrize("name", list(figures.FIGURES))
def test_check_agrees_with_library(name, capsys, monkeypatch):
    fn, u, v, cond = figures.FIGURES[name]
    g = fn()
    for Z in ([], cond):
        argv = ["check", "--json", "--graph", f"figures/{name}.json", "--u", u, "--v", v, "--cond", ",".join(Z)]
        code, out, _ = _run(argv, capsys, monkeypatch)
        want = d_separated(g, g.id(u), g.id(v), [g.id(x) for x in Z])
        assert code == 0
        assert (json.loads(out)["verdict"] == "d-separated") is want


@pytest.mark.parametrize("name", list(figures.FIGURES))
def test_witness_round_trip_through_check_witness(name, capsys, monkeypatch, tmp_path):
    fn, u, v, cond = figures.FIGURES[name]
    g = fn()
    if d_separated(g, g.id(u), g.id(v), [g.id(x) for x in cond]):
        pytest.skip("separated: no witness to emit")
    q = ["--graph", f"figures/{name}.json", "--u", u, "--v", v]
    code, out, _ = _run(["witness", *q, "--cond", ",".join(cond)], capsys, monkeypatch)
    assert code == 0
    obj = json.loads(out)
    w, AZ, f = io.parse_witness(out, g)
    back = io.witness_to_obj(g, w, AZ)
    back["world"] = io.world_to_obj(g, f)
    back["path"] = obj["path"]
    assert io.dumps(back) == out
    target = tmp_path / "w.json"
    target.write_text(out)
    code, out, _ = _run(["check-witness", *q, "--witness", str(target)], capsys, monkeypatch)
    assert code == 0
    assert json.loads(out) == {"valid": True, "failed_condition": None, "v_changed": True}


def test_check_witness_with_separate_world(capsys, monkeypatch, tmp_path):
    q = ["--graph", "figures/collider.json", "--u", "u", "--v", "v"]
    code, out, _ = _run(["witness", *q, "--cond", "w", "--az", "w=1"], capsys, monkeypatch)
    obj = json.loads(out)
    (tmp_path / "world.json").write_text(io.dumps(obj.pop("world")))
    (tmp_path / "w.json").write_text(io.dumps(obj))
    argv = ["check-witness", *q, "--witness", str(tmp_path / "w.json"), "--world", str(tmp_path / "world.json")]
    code, out, _ = _run(argv, capsys, monkeypatch)
    assert code == 0 and json.loads(out)["valid"]
    code, _, err = _run(["check-witness", *q, "--witness", str(tmp_path / "w.json")], capsys, monkeypatch)
    assert code == 64 and "no world" in err


def test_graph_files_round_trip():
    for path in sorted((DATA / "figures").glob("*.json")):
        text = path.read_text()
        assert io.serialize_graph(io.parse_graph(text)) == text
