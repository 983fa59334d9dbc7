import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from freeorbits import Scalar, VerificationFailure, parse_scalar
from freeorbits import cli
from freeorbits.cli import main

BUMP_PAIR = {
    "builder": "bump",
    "bumps": [
        {"support": ["3/5", "9/10"], "through": [["3/4", "4/5"]]},
        {"support": ["1/10", "1/2"], "through": [["1/4", "2/5"]]},
    ],
}


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def build(tmp_path, cfg, name="act.json"):
    out = str(tmp_path / name)
    assert main(["build", write(tmp_path, "cfg_" + name, cfg), "-o", out]) == 0
    return out


def analyze(capsys, *argv):
    code = main(["analyze", *argv])
    return code, json.loads(capsys.readouterr().out)


def strip_timing(report):
    return {k: v for k, v in report.items() if k != "timing"}


def test_build_section32(tmp_path):
    out = build(tmp_path, {"builder": "section32"})
    data = json.loads(open(out).read())
    fs = data["certificates"]["section32"]["fixed_sets"]
    assert fs["disjoint"] is True and fs["fix_b"] == "{}"
    assert data["domain"] == "line"


def test_build_pingpong(tmp_path):
    data = json.loads(open(build(tmp_path, {"builder": "pingpong"})).read())
    assert all(data["certificates"]["pingpong"]["inclusions"].values())


@pytest.mark.parametrize("cfg", [
    {"builder": "rotation", "angles": ["1/3+x"]},
    {"builder": "nope"},
    {"builder": "section32", "alpha": "1/2", "beta": "1/2"},
    {"builder": "bump", "bumps": [["1/2"]]},
    [1, 2],
])
def test_build_invalid_config(tmp_path, cfg, capsys):
    assert main(["build", write(tmp_path, "bad.json", cfg), "-o", str(tmp_path / "x.json")]) == 1


def test_build_unreadable(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    assert main(["build", str(p), "-o", str(tmp_path / "x.json")]) == 1


def test_z2_scan_report_and_svg(tmp_path, capsys):
    act = build(tmp_path, BUMP_PAIR)
    pic = tmp_path / "z.svg"
    code, rep = analyze(capsys, act, "z2-scan", "--max-len", "1", "--svg", str(pic))
    assert code == 0
    w = rep["result"]["witness"]
    assert (w["g"], w["h"]) == ("a", "b") and w["transcript"]["ok"]
    root = ET.fromstring(pic.read_text())
    assert root.tag.endswith("svg")


def test_rotation_number_report(tmp_path, capsys):
    act = build(tmp_path, {"builder": "rotation", "angles": ["3/7"]})
    code, rep = analyze(capsys, act, "rotation-number")
    assert code == 0 and rep["result"]["generators"]["a"]["value"] == "3/7"


def test_stabilizer_report(tmp_path, capsys):
    act = build(tmp_path, {"builder": "section32"})
    code, rep = analyze(capsys, act, "stabilizer", "--point", "2")
    assert code == 0
    parts = rep["result"]["pretty"].split()
    k = int(parts[0].split("^")[1])
    assert parts == [f"b^{k}", "a", f"b^-{k}"]


def test_h_map_exact_values_reparse(tmp_path, capsys):
    act = build(tmp_path, BUMP_PAIR)
    code, rep = analyze(capsys, act, "h-map", "--max-len", "2", "--svg", str(tmp_path / "h.svg"))
    assert code == 0
    for piece in rep["result"]["pieces"]:
        for key in ("lo", "hi"):
            s = piece["domain"][key]
            assert str(parse_scalar(s)) == s
        if piece["value"] is not None:
            assert str(parse_scalar(piece["value"])) == piece["value"]


def test_free_region_with_samples(tmp_path, capsys):
    act = build(tmp_path, {"builder": "bump", "bumps": [["1/5", "1/2"]]})
    code, rep = analyze(capsys, act, "free-region", "--max-len", "3", "--samples", "200")
    assert code == 0
    assert rep["result"]["samples"] == {"cells": 200, "agree": 200}
    assert rep["result"]["region"] == [{"lo": "1/5", "hi": "1/2", "kind": "open-interval"}]


def test_orbit_and_interior_fixer(tmp_path, capsys):
    act = build(tmp_path, {"builder": "rotation", "angles": ["-1+sqrt2"]})
    code, rep = analyze(capsys, act, "orbit", "--point", "0", "--max-len", "30", "--eps", "0.1",
                        "--svg", str(tmp_path / "o.svg"))
    assert code == 0 and rep["result"]["density"]["pass"] is True
    code, rep = analyze(capsys, act, "interior-fixer", "--point", "1/3")
    assert code == 0 and rep["result"]["word"] is None


def test_abelian_rank_and_faithful(tmp_path, capsys):
    act = build(tmp_path, {"builder": "bump", "bumps": [["0", "1/4"], ["1/3", "7/12"], ["2/3", "9/10"]]})
    code, rep = analyze(capsys, act, "abelian-rank", "--max-len", "1", "--rank", "3")
    assert code == 0 and rep["result"]["words"] == ["a", "b", "c"]
    act = build(tmp_path, {"builder": "rotation", "angles": ["1/3"]}, "r.json")
    code, rep = analyze(capsys, act, "faithful", "--max-len", "3")
    assert rep["result"]["kernel_words"] == ["aaa", "AAA"] and rep["result"]["faithful"] is False


def test_reports_independent_of_jobs(tmp_path, capsys, monkeypatch):
    act = build(tmp_path, {"builder": "pingpong"})
    _, r1 = analyze(capsys, act, "faithful", "--max-len", "4", "--jobs", "1")
    _, r2 = analyze(capsys, act, "faithful", "--max-len", "4", "--jobs", "3")
    monkeypatch.setenv("FREEORBITS_JOBS", "2")
    _, r3 = analyze(capsys, act, "faithful", "--max-len", "4")
    assert strip_timing(r1) == strip_timing(r2) == strip_timing(r3)
    assert r1["result"]["faithful"] is True


def test_budget_exceeded_exit_code(tmp_path, capsys):
    act = build(tmp_path, {"builder": "pingpong"})
    code, rep = analyze(capsys, act, "faithful", "--max-len", "4", "--breakpoint-cap", "4")
    assert code == 2 and rep["budget_exceeded"] is True
    assert rep["partial"]["n_words"] == 160 and rep["exceeded_words"]


def test_verification_failure_exit_code(tmp_path, capsys, monkeypatch):
    act = build(tmp_path, BUMP_PAIR)

    def boom(*_):
        raise VerificationFailure("forced", ["covering"])

    monkeypatch.setattr(cli, "run_analysis", boom)
    code, rep = analyze(capsys, act, "z2-scan")
    assert code == 3 and rep["verification_failure"]["failed"] == ["covering"]


def test_invalid_flags(tmp_path, capsys):
    act = build(tmp_path, BUMP_PAIR)
    assert main(["analyze", act, "orbit"]) == 1
    assert main(["analyze", act, "free-region", "--max-len", "0"]) == 1
    assert main(["analyze", act, "rotation-number", "--point", "1/2"]) == 0
    capsys.readouterr()
    line = build(tmp_path, {"builder": "section32"}, "l.json")
    assert main(["analyze", line, "free-region", "--max-len", "1"]) == 1
    assert main(["analyze", line, "free-region", "--max-len", "1", "--window=-2,3"]) == 0
    with pytest.raises(SystemExit) as info:
        main(["analyze", line, "no-such-analysis"])
    assert info.value.code == 1


def test_module_entry_point(tmp_path):
    act = build(tmp_path, {"builder": "rotation", "angles": ["3/7"]})
    proc = subprocess.run([sys.executable, "-m", "freeorbits", "analyze", act, "rotation-number"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["generators"]["a"]["value"] == "3/7"
