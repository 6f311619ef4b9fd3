import json
import subprocess
import sys

import pytest

from hyperlat import binquad
from hyperlat.cli import run


@pytest.fixture(autouse=True)
def cache_file(tmp_path, monkeypatch):
    path = tmp_path / "h.txt"
    monkeypatch.setenv(binquad.CACHE_ENV, str(path))
    yield path
    binquad.CACHE.path = None


def manifest(capsys, argv):
    assert run(argv) == 0
    return json.loads(capsys.readouterr().out)


def test_hclass(capsys):
    m = manifest(capsys, ["hclass", "-D", "-4", "--mu", "0"])
    assert m["command"] == "hclass"
    assert m["result"] == {"hrI": 1, "hrII": 1, "hnr": 0}
    assert set(m) == {"command", "parameters", "outputs", "elapsed", "counts", "result"}


def test_hclass_unrealizable_rational(capsys):
    m = manifest(capsys, ["hclass", "-D", "-15", "--mu", "1"])
    assert m["result"]["hnr"] == "1/2"
    assert run(["hclass", "-D", "-15", "--mu", "1", "--strict"]) == 1


def test_hnr_and_errors(capsys):
    assert manifest(capsys, ["hnr", "--d", "114", "--eta", "2"])["counts"] == {"hnr": 0}
    assert run(["hnr", "--d", "6", "--eta", "1"]) == 1
    assert "error" in capsys.readouterr().err
    with pytest.raises(SystemExit) as exc:
        run(["hnr", "--d", "six"])
    assert exc.value.code == 2


def test_refh3_and_cache(capsys, cache_file, tmp_path):
    out = tmp_path / "t3.json"
    m = manifest(capsys, ["refh3", "--max-d", "300", "--hmax", "1", "--workers", "1", "--out", str(out)])
    rows = json.loads(out.read_text())
    assert m["counts"]["table3_count"] == len(rows)
    assert rows[:2] == [{"d": 1, "eta": 0, "h": 0}, {"d": 2, "eta": 0, "h": 0}]
    assert m["outputs"] == [str(out)]
    lines = cache_file.read_text().split("\n")[:-1]
    assert lines and all(int(a) < 0 and int(b) > 0 for a, b in (x.split() for x in lines))
    first = out.read_text()
    manifest(capsys, ["refh3", "--max-d", "300", "--hmax", "1", "--workers", "1", "--out", str(out)])
    assert out.read_text() == first


def test_csv(capsys, tmp_path):
    out = tmp_path / "t.csv"
    manifest(capsys, ["refh3", "--max-d", "10", "--workers", "1", "--format", "csv", "--out", str(out)])
    assert out.read_text().splitlines()[:2] == ["d,eta,h", "1,0,0"]


def test_fund_with_records(capsys, tmp_path):
    path = tmp_path / "i1.jsonl"
    m = manifest(capsys, ["fund", "--type", "i1", "--emit-records", str(path)])
    assert m["counts"] == {"n": 272, "a": 3528, "a1": 543, "a2": 181}
    lines = path.read_text().splitlines()
    assert len(lines) == 272
    assert json.loads(lines[0])["type_tag"] == "I1"


def test_vinberg_and_classify(capsys):
    m = manifest(capsys, ["vinberg", "--lattice", "u:57", "--height", "50000"])
    assert m["result"]["chains"]["e"][0] == [321, 30, -13]
    assert m["result"]["verdict"]["tag"] == "Hyperbolic"
    assert m["result"]["verdict"]["weyl"] == [95, 19, -6]
    m = manifest(capsys, ["classify", "--lattice", "diag:30,38,14:1,1,0", "--height", "500000",
                          "--d", "3990", "--eta", "4"])
    assert m["result"]["hnr"] == 1
    assert m["result"]["verdict"]["tag"] == "NotReflective"
    assert m["result"]["verdict"]["witness"][0] == ["6863/2", "5339/2", 1694]
    assert ["1/2", "-1/2", 0] in m["result"]["roots"]


@pytest.mark.parametrize("bad", ["q:3", "u:x", "diag:1,2", "diag:2,2,2:1,0,0"])
def test_bad_lattice(bad):
    with pytest.raises(SystemExit) as exc:
        run(["vinberg", "--lattice", bad, "--height", "10"])
    assert exc.value.code == 2


def test_classify_needs_hnr():
    assert run(["classify", "--lattice", "u:1", "--height", "10"]) == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hyperlat", "hnr", "--d", "57", "--eta", "1"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["counts"] == {"hnr": 1}
