import json

import pytest

from coxtwist.cli import main
from coxtwist.diagram import parse_diagram
from coxtwist.fixtures import fixture_path, load_fixture
from coxtwist.twist import canonical_form, elementary_move, apply_twist

from conftest import diagram


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_e14(capsys):
    code, out, _ = run(capsys, "analyze", fixture_path("E14"))
    assert code == 0
    doc = json.loads(out)
    assert len(doc["maximal_twist_rigid"]) == 6
    assert sorted(map(len, doc["minimal_separations"])) == [2, 3]
    assert [b["type"] for b in doc["standard_separation"]["blocks"]] == ["II"]


def test_analyze_is_byte_identical(capsys):
    _, a, _ = run(capsys, "analyze", fixture_path("TRIPOD"))
    _, b, _ = run(capsys, "analyze", fixture_path("TRIPOD"))
    assert a == b


def test_analyze_dot_and_plot(capsys, tmp_path):
    dot = tmp_path / "d.dot"
    png = tmp_path / "d.png"
    code, out, _ = run(capsys, "analyze", fixture_path("TRIPOD"), "--dot", str(dot),
                       "--plot", str(png))
    assert code == 0 and json.loads(out)["schema"] == 1
    assert dot.read_text().startswith("graph coxeter {")
    assert png.stat().st_size > 0
    code, out, _ = run(capsys, "analyze", fixture_path("TRIPOD"), "--dot", "-")
    assert out.startswith("graph coxeter {")


def test_parse_errors(capsys, tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text("")
    code, _, err = run(capsys, "analyze", str(empty))
    assert code == 2 and err.startswith("error:")
    bad = tmp_path / "bad.json"
    bad.write_text('{"generators": ["a", "b"], "orders": [["a", "b", 1]]}')
    assert run(capsys, "analyze", str(bad))[0] == 2
    code, _, err = run(capsys, "analyze", str(tmp_path / "missing.json"))
    assert code == 1 and "cannot read" in err


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["analyze"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1


def test_twist_e10(capsys, tmp_path):
    out = tmp_path / "t.json"
    code, _, err = run(capsys, "twist", fixture_path("E10"), "--u", "a1,a2,a3,a4",
                       "--side", "y1,y2,y3", "--out", str(out))
    assert code == 0 and "warning" not in err
    text = out.read_text()
    T = parse_diagram(text)
    assert T == load_fixture("E10_TWISTED").diagram
    note = json.loads(text)["note"]
    assert "a1->a2" in note and "a2->a1" in note
    M = elementary_move(T, T.mask(["a1", "a2", "a3", "a4"]), T.mask(["y1'", "y2'", "y3'"]))
    back = apply_twist(T, M).diagram
    assert canonical_form(back) == canonical_form(load_fixture("E10").diagram)


def test_twist_trivial_warns(capsys, tmp_json):
    D = load_fixture("TRIPOD").diagram
    code, out, err = run(capsys, "twist", tmp_json(D), "--u", "a1", "--side", "x")
    assert code == 0 and "warning" in err
    assert canonical_form(parse_diagram(out)) == canonical_form(D)


def test_twist_rejects_non_separating(capsys, tmp_json):
    D = diagram("a b c", [("a", "b", 3), ("b", "c", 3)])
    code, _, err = run(capsys, "twist", tmp_json(D), "--u", "a", "--side", "c")
    assert code == 1 and "U does not separate S" in err
    code, _, err = run(capsys, "twist", tmp_json(D), "--u", "zz", "--side", "c")
    assert code == 1


def test_equiv_with_witness(capsys):
    code, out, err = run(capsys, "equiv", fixture_path("E10"), fixture_path("E10_TWISTED"),
                         "--depth", "1")
    assert code == 0 and "depth 1" in err
    doc = json.loads(out)
    assert doc["verdict"] == "YES" and len(doc["witness"]["path"]) == 1
    code, out, _ = run(capsys, "equiv", fixture_path("TRIPOD"), fixture_path("TRIPOD"),
                       "--depth", "0")
    assert json.loads(out)["verdict"] == "YES"


def test_equiv_unknown_is_success(capsys):
    code, out, _ = run(capsys, "equiv", fixture_path("E14"), fixture_path("TRIPOD"))
    assert code == 0 and json.loads(out)["verdict"] == "UNKNOWN"


def test_orbit_and_capacity(capsys):
    code, out, _ = run(capsys, "orbit", fixture_path("E10"), "--depth", "2")
    assert code == 0 and json.loads(out)["count"] == 2
    code, _, err = run(capsys, "orbit", fixture_path("E10"), "--max-states", "1")
    assert code == 3 and "exceeded" in err


def test_compat(capsys):
    code, out, _ = run(capsys, "compat", fixture_path("TRIPOD"), fixture_path("TRIPOD"),
                       "--depth", "0")
    doc = json.loads(out)
    assert code == 0 and doc["verdict"] == "YES"
    assert len(doc["witness"]["type1"]) == 3


def test_untangle(capsys):
    code, out, _ = run(capsys, "untangle", fixture_path("A_i"), "--from", "a1,b1", "--to", "a3,b3")
    path = json.loads(out)["path"]
    assert code == 0 and len(path["links"]) == 4
    assert sorted(path["induced"].values()) == ["a3", "b3"]
    code, out, _ = run(capsys, "untangle", fixture_path("MOBIUS"), "--loops", "a1,b1")
    doc = json.loads(out)
    assert doc["order"] == 2
    assert {"a1": "b1", "b1": "a1"} in [p["map"] for p in doc["permutations"]]


def test_untangle_no_path(capsys, tmp_json):
    D = diagram("a b", [])
    code, out, err = run(capsys, "untangle", tmp_json(D), "--from", "a", "--to", "b")
    assert code == 0 and "no path" in err and json.loads(out)["path"] is None
    code, _, _ = run(capsys, "untangle", tmp_json(D), "--from", "a")
    assert code == 1


def test_oracle_verify(capsys, tmp_json):
    code, out, _ = run(capsys, "oracle-verify", fixture_path("A_i"))
    assert code == 0 and out and all(line.startswith("pass") for line in out.splitlines())
    H3 = diagram("a b c", [("a", "b", 5), ("b", "c", 3), ("a", "c", 2)])
    code, out, _ = run(capsys, "oracle-verify", tmp_json(H3))
    assert code == 0 and "skipped: unsupported family" in out


def test_stdin_input(capsys, monkeypatch):
    import io
    with open(fixture_path("TRIPOD")) as fh:
        monkeypatch.setattr("sys.stdin", io.StringIO(fh.read()))
    code, out, _ = run(capsys, "analyze", "-")
    assert code == 0 and json.loads(out)["diagram"]["rank"] == 4


def test_console_script():
    import shutil
    import subprocess
    exe = shutil.which("coxtwist")
    if exe is None:
        pytest.skip("package not installed")
    proc = subprocess.run([exe, "analyze", fixture_path("TRIPOD")], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["schema"] == 1
