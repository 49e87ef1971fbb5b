import subprocess
import sys

import pytest

from tnctree.cli import EXIT_CAP, EXIT_INPUT, main

TRIANGLE = """\
tn v1
v a
v b
v c
e 2 a b = ab
e 4 b c = bc
e 8 a c = ac
"""

CHAIN = """\
tn v1
v a
v b
e 2 a b
e 3 b = out
t a inline 1 2
t b inline 1 2 3 4 5 6
"""


@pytest.fixture
def files(tmp_path):
    (tmp_path / "tri.tn").write_text(TRIANGLE)
    (tmp_path / "chain.tn").write_text(CHAIN)
    (tmp_path / "tri.tree").write_text("root((a,c),b)\n")
    (tmp_path / "star.tree").write_text("(a,b,c)\n")
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def fields(text):
    return dict(ln.split("=", 1) for ln in text.splitlines() if "=" in ln)


def test_plan_brute(capsys, files):
    code, out, _ = run(capsys, "plan", files / "tri.tn", "--method", "brute", "-o", files / "best.tree")
    assert code == 0
    assert fields(out)["sequential_time"] == "129"
    assert (files / "best.tree").read_text() == "root((a,c),b)\n"


def test_plan_json(capsys, files):
    import json

    code, out, _ = run(capsys, "plan", files / "tri.tn", "--objective", "vertcon", "--json")
    d = json.loads(out)
    assert code == 0 and d["vertcon"] == 6.0 and d["tree"].startswith("root")


def test_plan_cap(capsys, files):
    code, _, err = run(capsys, "plan", files / "tri.tn", "--method", "brute", "--cap", "2")
    assert code == EXIT_CAP and err.startswith("error:")


def test_cost_roots_unrooted_tree(capsys, files):
    code, out, _ = run(capsys, "cost", files / "tri.tn", files / "star.tree")
    # cheapest rooting of the star splits off b
    assert code == 0 and fields(out)["sequential_time"] == "129"


def test_cost_with_order(capsys, files):
    (files / "lin.tree").write_text("root(((a,b),c))\n")
    code, out, _ = run(capsys, "cost", files / "tri.tn", files / "lin.tree", "--order", "a,b;a,b,c")
    assert code == 0
    code, _, err = run(capsys, "cost", files / "tri.tn", files / "lin.tree", "--order", "b,c")
    assert code == EXIT_INPUT and "not a contraction" in err


def test_convert_tree_td_bd(capsys, files):
    code, out, err = run(capsys, "convert", "--from", "tree", "--to", "td", files / "tri.tn", files / "star.tree")
    assert code == 0 and out.startswith("s td") and "vertcon=" in err
    (files / "tri.td").write_text(out)
    code, out, err = run(capsys, "convert", "--from", "tree", "--to", "bd", files / "tri.tn", files / "star.tree")
    assert code == 0 and "width=" in err
    (files / "tri.bd").write_text(out)
    code, out, err = run(capsys, "convert", "--from", "bd", "--to", "tree", files / "tri.tn", files / "tri.bd")
    assert code == 0 and "bound=" in err
    code, out, err = run(capsys, "convert", "--from", "td", "--to", "tree", files / "tri.tn", files / "tri.td")
    assert code == 0 and "treewidth=" in err
    code, out, _ = run(capsys, "convert", "--from", "td", "--to", "td", files / "tri.tn", files / "tri.td")
    assert code == 0 and out == (files / "tri.td").read_text()
    code, out, err = run(capsys, "convert", "--from", "td", "--to", "bd", files / "tri.tn", files / "tri.td")
    assert code == 0 and "width=" in err


def test_convert_rejects_bad_td(capsys, files):
    (files / "bad.td").write_text("s td 1 1 3\nb 1 1\n")
    code, _, err = run(capsys, "convert", "--from", "td", "--to", "tree", files / "tri.tn", files / "bad.td")
    assert code == EXIT_INPUT and err.startswith("error:")


def test_contract_modes(capsys, files):
    (files / "chain.tree").write_text("root=env((a,b))\n")
    code, out, _ = run(capsys, "contract", files / "chain.tn", files / "chain.tree", "--oracle")
    f = fields(out)
    assert code == 0 and f["value_axes"] == "out"
    assert float(f["oracle_relative_error"]) < 1e-12
    # a = [1, 2], b = [[1, 2, 3], [4, 5, 6]] gives [9, 12, 15]
    assert f["value"].split() == ["9+0j", "12+0j", "15+0j"]
    code, out, _ = run(capsys, "contract", files / "chain.tn", files / "chain.tree", "--parallel", "2")
    assert code == 0 and "makespan" in fields(out)
    (files / "one.tree").write_text("root=env(a,b)\n")
    code, out, _ = run(capsys, "contract", files / "chain.tn", files / "one.tree", "--sliced", "e0", "--oracle")
    f = fields(out)
    assert code == 0 and f["assignments"] == "2" and float(f["oracle_relative_error"]) < 1e-12


def test_contract_needs_tensors(capsys, files):
    code, _, err = run(capsys, "contract", files / "tri.tn", files / "tri.tree")
    assert code == EXIT_INPUT and "no tensors" in err


def test_random_then_validate(capsys, files):
    code, _, _ = run(capsys, "random", "--kind", "grid", "--n", "3", "--seed", "1", "-o", files / "g.tn")
    assert code == 0
    code, out, _ = run(capsys, "validate", files / "g.tn")
    assert code == 0 and out.startswith("network ok: 9 vertices, 12 edges")
    code, out, _ = run(capsys, "plan", files / "g.tn", "-o", files / "g.tree")
    code, out, _ = run(capsys, "validate", files / "g.tn", files / "g.tree")
    assert code == 0 and "tree ok" in out
    code, out, _ = run(capsys, "contract", files / "g.tn", files / "g.tree", "--oracle")
    assert code == 0 and float(fields(out)["oracle_relative_error"]) < 1e-9


def test_schroedinger(capsys):
    code, out, _ = run(capsys, "schroedinger", "--qubits", "3", "--gates", "4", "--seed", "2", "--x", "1", "--y", "5")
    f = fields(out)
    assert code == 0 and f["x"] == "1" and f["y"] == "5"
    assert complex(f["value"]) == pytest.approx(complex(f["statevector_amplitude"]), abs=1e-9)


@pytest.mark.parametrize(
    "args, msg",
    [
        (["validate", "missing.tn"], "error:"),
        (["validate", "tri.tn", "bad.tree"], "leaf mismatch"),
    ],
)
def test_input_errors(capsys, files, args, msg):
    (files / "bad.tree").write_text("(a,b)\n")
    argv = [files / a if a.endswith((".tn", ".tree")) else a for a in args]
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT and msg in err


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "tnctree.cli", "validate", str(files / "tri.tn")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("network ok: 3 vertices, 3 edges, 0 open legs")


def test_brute_over_default_cap(capsys, files):
    run(capsys, "random", "--kind", "ring", "--n", "11", "-o", files / "r11.tn")
    code, _, err = run(capsys, "plan", files / "r11.tn", "--method", "brute")
    assert code == EXIT_CAP and "cap" in err


@pytest.mark.parametrize("x, y, want", [(3, 3, 1), (3, 5, 0)])
def test_empty_circuit_overlap(capsys, x, y, want):
    code, out, _ = run(capsys, "schroedinger", "--qubits", "3", "--x", x, "--y", y)
    assert code == 0 and complex(fields(out)["value"]) == want


def test_random_star_and_determinism(capsys, files):
    for name in ("s1.tn", "s2.tn"):
        run(capsys, "random", "--kind", "star", "--n", "6", "--seed", "4", "-o", files / name)
    assert (files / "s1.tn").read_text() == (files / "s2.tn").read_text()
    code, out, _ = run(capsys, "validate", files / "s1.tn")
    assert out.startswith("network ok: 7 vertices, 6 edges")


def test_sliced_ring_matches_unsliced(capsys, files):
    run(capsys, "random", "--kind", "ring", "--n", "3", "--seed", "9", "-o", files / "r3.tn")
    (files / "r3.tree").write_text("root((v0,v1),v2)\n")
    _, plain, _ = run(capsys, "contract", files / "r3.tn", files / "r3.tree")
    edge = "e2"  # the v2-v0 wire
    _, sliced, _ = run(capsys, "contract", files / "r3.tn", files / "r3.tree", "--sliced", edge)
    assert complex(fields(sliced)["value"]) == pytest.approx(complex(fields(plain)["value"]), rel=1e-9)
