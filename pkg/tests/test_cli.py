import json
import shutil
import subprocess

import pytest

from finsplit.cli import Workspace, main
from finsplit.errors import DanglingReference, ParseError, ValidationError


def write(path, obj):
    path.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return path


@pytest.fixture
def fx(tmp_path):
    write(tmp_path / "S2.json", {"name": "S2", "points": ["a", "b"], "opens": [[], ["a"], ["a", "b"]]})
    write(tmp_path / "D2.json", {"name": "D2", "points": ["0", "1"], "opens": [[], ["0"], ["1"], ["0", "1"]]})
    write(tmp_path / "f.json", {"domain": "S2", "codomain": "D2", "map": {"a": "0", "b": "1"}})
    write(tmp_path / "h.json", {"domain": "D2", "codomain": "S2", "map": {"0": "a", "1": "b"}})
    write(tmp_path / "swap.json", {"domain": "D2", "codomain": "D2", "map": {"0": "1", "1": "0"}})
    write(tmp_path / "F.json", {"domain": "S2", "codomain": "D2", "map": {"a": ["0"], "b": ["0", "1"]}})
    write(tmp_path / "G.json", {"domain": "S2", "codomain": "D2", "map": {"a": ["0"], "b": ["1"]}})
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv] + ["--format", "record"])
    out, err = capsys.readouterr()
    text = out if out.strip() else err
    return code, json.loads(text.strip().splitlines()[-1])


def test_evsets(fx, capsys):
    code, rep = run(capsys, "evsets", "--fn", fx / "f.json", "--point", "b")
    assert code == 0
    assert rep == {"point": "b", "sets": [["0", "1"]], "minimal": [["0", "1"]],
                   "continuous_at": False, "split_at": True}
    code, rep = run(capsys, "evsets", "--fn", fx / "f.json")
    assert [r["point"] for r in rep["points"]] == ["a", "b"]


def test_star(fx, capsys):
    code, rep = run(capsys, "star", "--fn", fx / "f.json")
    assert code == 0 and rep == {"star": {"a": ["0"], "b": ["0", "1"]}}
    code, rep = run(capsys, "star", "--fn", fx / "h.json")
    assert code == 2 and rep["error"] == "NotHausdorff"


def test_space_commands(fx, capsys):
    code, rep = run(capsys, "closure", fx / "S2.json", "--set", "a")
    assert code == 0 and rep == {"set": ["a"], "closure": ["a", "b"], "interior": ["a"], "boundary": ["b"]}
    code, rep = run(capsys, "separation", fx / "S2.json")
    assert rep == {"t0": True, "hausdorff": False, "regular": False}
    code, rep = run(capsys, "validate", fx / "S2.json")
    assert code == 0 and rep["valid"] and rep["opens"] == 3
    code, rep = run(capsys, "closure", fx / "S2.json", "--set", "q")
    assert code == 2


def test_multimap_commands(fx, capsys):
    code, rep = run(capsys, "usc", "--mm", fx / "F.json")
    assert code == 0 and rep == {"usc": True}
    code, rep = run(capsys, "usc", "--mm", fx / "G.json")
    assert code == 1 and rep == {"usc": False, "point": "b", "open": ["1"]}
    code, rep = run(capsys, "usco", "--mm", fx / "F.json")
    assert code == 0 and rep["ok"]
    code, rep = run(capsys, "usco", "--mm", fx / "F.json", "--minimal")
    assert code == 1 and rep["smaller_usco"] == {"a": ["0"], "b": ["0"]}
    code, rep = run(capsys, "prems", "--mm", fx / "F.json")
    assert code == 0 and rep == {"pre_multi_split": True, "selections": 2, "certified_by_values": True}
    code, rep = run(capsys, "graphclosure", "--fn", fx / "f.json")
    assert set(rep["closure"]) == {"(a,0)", "(b,0)", "(b,1)"} and not rep["closed"]
    code, rep = run(capsys, "graphclosure")
    assert code == 2


def test_msc_and_splithomeo(fx, capsys):
    code, rep = run(capsys, "msc", "--fn", fx / "f.json")
    assert code == 0 and rep["minimal_certificates"] == {"a": [["0"]], "b": [["0", "1"]]}
    code, rep = run(capsys, "splithomeo", "--fn", fx / "h.json")
    assert code == 0 and rep["split_homeomorphism"]


def test_reglue_round_trip(fx, capsys):
    out = fx / "datum"
    code, rep = run(capsys, "reglue-build", "--fn", fx / "swap.json", "--out", out, "--stem", "sw")
    assert code == 0 and rep["Z"] == ["(0,1)", "(1,0)"]
    code, rep = run(capsys, "reglue-verify", out / "sw.json")
    assert code == 0 and rep["ok"] and rep["derived"] == {"0": "1", "1": "0"}
    code, rep = run(capsys, "validate", out / "sw.json")
    assert code == 0 and rep["valid"]
    code, rep = run(capsys, "reglue-compose", out / "sw.json", out / "sw.json")
    assert code == 0 and rep == {"Z": 4, "derived": {"0": "0", "1": "1"}, "valid": True}


def test_reglue_invalid(fx, capsys):
    out = fx / "datum"
    run(capsys, "reglue-build", "--fn", fx / "swap.json", "--out", out, "--stem", "sw")
    bad = json.loads((out / "sw_pXinv.json").read_text())
    bad["map"] = {"0": "(0,1)", "1": "(0,1)"}
    write(out / "sw_pXinv.json", bad)
    code, rep = run(capsys, "reglue-verify", out / "sw.json")
    assert code == 1 and not rep["ok"] and not rep["right_inverse"]
    code, rep = run(capsys, "validate", out / "sw.json")
    assert code == 1 and not rep["valid"]


def test_gallery(capsys):
    code, rep = run(capsys, "gallery", "f_weird", "--n", "5", "--depth", "100")
    assert code == 0 and rep["summary"]["star_size"] == 6
    code, rep = run(capsys, "gallery", "f_weird_eval", "--q", "1/2")
    assert rep == {"q": "1/2", "value": ["1/2", "0/1"]}
    code, rep = run(capsys, "gallery", "comb_space", "--depth", "50")
    assert code == 0 and rep["verdict"] == "consistent at depth"
    code, rep = run(capsys, "gallery", "circle", "--n", "10")
    assert rep == {"Z": 20, "X": 18, "Y": 18, "bijective": True, "valid": True}
    code, rep = run(capsys, "gallery", "circle", "--n", "3")
    assert code == 2 and rep["error"] == "BadSize"
    code, rep = run(capsys, "gallery", "f_weird_eval", "--q", "3/2")
    assert code == 2 and rep["error"] == "OutOfRange"


def test_suite_command(capsys):
    code, rep = run(capsys, "suite", "--property", "P_graph", "--trials", "5")
    assert code == 0 and rep["failed"] == [] and rep["properties"] == 1
    code, rep = run(capsys, "suite", "--property", "P_nope")
    assert code == 2 and rep["error"] == "UnknownProperty"


def test_load_errors(tmp_path, fx):
    ws = Workspace()
    with pytest.raises(ParseError):
        ws.load(write(tmp_path / "junk.json", "{not json"))
    bad = write(tmp_path / "bad.json", {"points": ["x", "y", "z"], "opens": [[], ["x"], ["y"], ["x", "y", "z"]]})
    with pytest.raises(ValidationError, match="union"):
        ws.load(bad, "space")
    dangling = write(tmp_path / "d.json", {"domain": "S2", "codomain": "nowhere", "map": {"a": "0"}})
    with pytest.raises(DanglingReference):
        ws.load(dangling, "fn")
    ws.load(fx / "S2.json")
    assert "S2" in ws.spaces


def test_error_exit_codes(fx, capsys):
    write(fx / "bad.json", {"points": ["x"], "opens": [["x"]]})
    code, rep = run(capsys, "validate", fx / "bad.json")
    assert code == 2 and rep["error"] == "ValidationError"
    code, rep = run(capsys, "validate", fx / "missing.json")
    assert code == 2
    assert main(["frobnicate"]) == 2
    capsys.readouterr()


def test_text_output_is_stable(fx, capsys):
    main(["star", "--fn", str(fx / "f.json")])
    first = capsys.readouterr().out
    main(["star", "--fn", str(fx / "f.json")])
    assert capsys.readouterr().out == first
    assert first.strip() == 'star: {"a": ["0"], "b": ["0", "1"]}'


@pytest.mark.skipif(shutil.which("finsplit") is None, reason="console script not installed")
def test_console_script(fx):
    proc = subprocess.run(["finsplit", "separation", str(fx / "D2.json"), "--format", "record"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"t0": True, "hausdorff": True, "regular": True}
