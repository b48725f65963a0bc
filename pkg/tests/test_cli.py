from __future__ import annotations

import json
import os
import subprocess
import sys
from importlib import resources

import pytest

from k4e.cli import main
from k4e.core import read_design


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_adm_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["adm", "--order", "11", "--output", str(a)], capsys)[0] == 0
    assert run(["adm", "--order", "11", "--output", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert [3, 0] in rep["pairs"] and rep["b_v"] == 11


def test_classify_order6_round_trips(capsys):
    code, out, _ = run(["classify", "--order", "6"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and len(rep["classes"]) == 1
    cls = rep["classes"][0]
    d = read_design({"order": cls["order"], "blocks": cls["blocks"]})
    assert d.to_json()["blocks"] == cls["blocks"]
    assert cls["aut_order"] == 24 and cls["matches"][0]["design"] == "B"


def test_verify_order6(capsys):
    code, out, _ = run(["verify", "--order", "6"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["checked"] == 4 and rep["failed"] == 0


def test_verify_csv(capsys):
    code, out, _ = run(["verify", "--order", "6", "--format", "csv"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("s,t,source") and len(lines) == 5


def test_verify_failure_exits_1(tmp_path, capsys):
    data = json.loads(resources.files("k4e").joinpath("data/certificates.json").read_text())
    data["orders"]["6"]["certificates"][1]["perm"] = "(2 4)(3 5)"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out, _ = run(["verify", "--order", "6", "--certificates", str(bad)], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["failed"] == 1 and not rep["passed"]


def test_spectrum_jobs_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["spectrum", "--order", "6", "--output", str(a)], capsys)[0] == 0
    assert run(["spectrum", "--order", "6", "--jobs", "2", "--output", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["excluded_within_adm"] == [] and rep["passed"]


def test_enumerate_ndjson(capsys):
    code, out, _ = run(["enumerate", "--order", "6"], capsys)
    lines = out.splitlines()
    assert code == 0 and len(lines) == 30
    designs = [read_design(x) for x in lines]
    assert all(d.to_json() == json.loads(x) for d, x in zip(designs, lines))


def test_analyze_order6(capsys):
    code, out, _ = run(["analyze", "--order", "6"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["labeled_designs"] == 30


def test_export(tmp_path, capsys):
    assert run(["export", "--order", "6", "--output", str(tmp_path / "r")], capsys)[0] == 0
    names = sorted(p.name for p in (tmp_path / "r").iterdir())
    assert names == ["adm_6.json", "analyze_6.json", "classify_6.json", "spectrum_6.json", "verify_6.json"]


@pytest.mark.parametrize("argv", [
    ["adm", "--order", "12"],
    ["classify", "--order", "15"],
    ["classify"],
    ["classify", "--order", "6", "--jobs", "0"],
    ["frobnicate", "--order", "6"],
])
def test_usage_errors_exit_2(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as e:
        code = e.code
    capsys.readouterr()
    assert code == 2


def test_environment_overrides(tmp_path):
    env = {**os.environ, "K4E_ORDER": "6", "K4E_FORMAT": "csv"}
    proc = subprocess.run([sys.executable, "-m", "k4e", "adm"], env=env, capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["s,t", "0,0", "0,2", "0,3", "3,0"]
    proc = subprocess.run([sys.executable, "-m", "k4e", "adm", "--order", "10"], env=env,
                          capture_output=True, text=True)
    assert proc.returncode == 0 and len(proc.stdout.splitlines()) > 5
