import json
from fractions import Fraction as Fr

import pytest

from mdimshift.cli import main
from mdimshift.config import RunConfig, load_config, parse_config_text, parse_window
from mdimshift.construction import z_patch
from mdimshift.errors import ConfigError
from mdimshift.lattice import Window
from mdimshift.serialize import load_patch, load_state, save_patch, save_state

BUILD = ["build", "--t", "1/4", "--alphabet", "interval:0:1", "--sides", "4,16,64,256", "--steps", "3", "--mode", "lazy"]


@pytest.fixture(scope="module")
def state_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("st") / "s.json"
    assert main(BUILD + ["--out", str(path)]) == 0
    return path


def test_config_parser(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nt = 1/2\nsides = 4, 16\nmode = exact\nsteps = 2\n")
    rc = load_config(cfg)
    assert rc.t == Fr(1, 2) and rc.sides == (4, 16) and rc.mode == "exact"
    with pytest.raises(ConfigError, match=r":2: field 't'"):
        parse_config_text("mode = lazy\nt = one half\n", "x.cfg")
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config_text("colour = red\n")
    with pytest.raises(ConfigError):
        load_config(None, {"mode": "fast"})
    assert parse_window("0:4,-2:3") == Window((0, -2), (4, 3))
    with pytest.raises(ConfigError):
        parse_window("0-4")


def test_state_roundtrip(tmp_path):
    rc = RunConfig()
    state = rc.build()
    path = tmp_path / "s.json"
    save_state(state, rc, path)
    again, rc2 = load_state(path)
    assert rc2 == rc and again.depth == state.depth
    doc = json.loads(path.read_text())
    assert doc["steps"][1]["R_size"] == "9" and doc["steps"][1]["h"] == ["36"]
    assert doc["steps"][2]["R_size"] == str(5 ** 65)
    doc["steps"][1]["h"] = ["37"]
    path.write_text(json.dumps(doc))
    with pytest.raises(ConfigError):
        load_state(path)


def test_patch_roundtrip(tmp_path):
    state = RunConfig().build()
    p = z_patch(state, Window.interval(-10, 300))
    path = tmp_path / "p.json"
    save_patch(p, path)
    assert load_patch(path) == p


def test_cli_verify_and_reports(state_file, capsys):
    assert main(["verify", "--state", str(state_file), "--checks", "nesting,density,almost-periodic"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["data"] == {"nesting": "pass", "density": "pass", "almost-periodic": "pass"}
    assert main(["verify", "--state", str(state_file)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert set(out["data"]) == {"nesting", "density", "almost-periodic", "consistency", "membership", "enumeration", "fiber"}
    assert out["data"]["enumeration"].startswith("skipped")
    assert main(["density", "--state", str(state_file)]) == 0
    rows = json.loads(capsys.readouterr().out)["data"]["rows"]
    assert [r["ratio"] for r in rows[:2]] == ["1/2", "65/256"]


def test_cli_render_and_export(state_file, tmp_path, capsys):
    assert main(["render", "--state", str(state_file), "--window", "0:256"]) == 0
    line = capsys.readouterr().out.rstrip("\n")
    assert len(line) == 256
    out = tmp_path / "z.json"
    assert main(["export", "--state", str(state_file), "--window", "0:4", "--out", str(out)]) == 0
    cells = json.loads(out.read_text())["cells"]
    assert [c["value"] for c in cells] == [["0/1"]] * 4


def test_cli_render_pgm(tmp_path):
    st = tmp_path / "d2.json"
    assert main(["build", "--dim", "2", "--sides", "2,4", "--t", "1/2", "--mode", "exact", "--steps", "2", "--out", str(st)]) == 0
    img = tmp_path / "z.pgm"
    assert main(["render", "--state", str(st), "--window", "0:4,0:4", "--out", str(img)]) == 0
    data = img.read_bytes()
    assert data.startswith(b"P5\n4 4\n255\n") and len(data) == len(b"P5\n4 4\n255\n") + 16


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["nonsense"]) == 2
    assert main(["build", "--t", "3/2"]) == 2
    two = tmp_path / "two.json"
    assert main(BUILD[:-4] + ["--steps", "2", "--out", str(two)]) == 0
    assert main(["export", "--state", str(two), "--window", "30:40", "--out", str(tmp_path / "x.json")]) == 3
    assert main(["build", "--t", "1/4", "--sides", "4,16,64", "--no-extend", "--steps", "2"]) == 4
    assert main(["build", "--t", "0", "--steps", "3"]) == 4
    capsys.readouterr()


def test_cli_estimate_fiber_family(state_file, capsys):
    assert main(["estimate", "--state", str(state_file), "--k", "2", "--m", "16"]) == 0
    est = json.loads(capsys.readouterr().out)["data"]
    assert est["upper"] == "65/256"
    assert main(["fiber", "--state", str(state_file), "--u", "1,1"]) == 0
    fib = json.loads(capsys.readouterr().out)["data"]
    assert fib["distance"] == "0/1" and fib["p"] == 2
    assert main(["family", "--r", "0,1/4,1/2,9/10"]) == 0
    fam = json.loads(capsys.readouterr().out)["data"]
    assert [w["n"] for w in fam["witnesses"]] == [1, 1, 2, 4]
    assert [w["classification"] for w in fam["witnesses"]] == ["Y_1", "Y_1", "Y_2", "Y_4"]


def test_cli_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(BUILD + ["--out", str(a)]) == 0
    assert main(BUILD + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
