import json
import subprocess
import sys

from rigidcircle.cli import main
from rigidcircle.report import VerificationReport


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_construct_counts(tmp_path, capsys):
    out = tmp_path / "s.json"
    code, _, _ = run(["construct", "--depth", "1", "--out", str(out)], capsys)
    assert code == 0
    objs = json.loads(out.read_text())["objects"]
    assert sum(o["type"] == "rect" for o in objs) == 4
    assert sum(o["type"] == "disk" for o in objs) == 8
    assert sum(o["type"] == "segment" for o in objs) == 24


def test_construct_depth3_refused(capsys):
    code, out, err = run(["construct", "--depth", "3"], capsys)
    assert code == 2
    assert "159,920,000" in err and out == ""


def test_verify_params_depth2(capsys):
    code, out, _ = run(["verify", "--suite", "params", "--depth", "2"], capsys)
    rep = json.loads(out)
    assert code == 0
    disc = [c["id"] for c in rep["checks"] if c["status"] == "documented-discrepancy"]
    assert disc == ["params.k1.delta_le_gapfactor_r"]


def test_verify_unknown_suite(capsys):
    code, _, err = run(["verify", "--suite", "bogus"], capsys)
    assert code == 2 and "unknown suite" in err


def test_verify_report_round_trips(capsys):
    code, out, _ = run(["verify", "--suite", "capacity,constants"], capsys)
    assert code == 0
    again = VerificationReport.from_dict(json.loads(out)).to_json()
    assert again == out


def test_capacity_modes(capsys):
    for mode in ("formula", "actual", "numeric"):
        code, out, _ = run(["capacity", "--levels", "2", "--mode", mode], capsys)
        assert code == 0
        assert json.loads(out)["verdict"] is True


def test_modulus_cases(capsys):
    code, out, _ = run(["modulus", "square", "--grid", "32"], capsys)
    assert code == 0 and json.loads(out)["estimate"] == {"float": "1.03125"}
    code, out, _ = run(["modulus", "rect", "2", "1", "--grid", "32"], capsys)
    assert json.loads(out)["estimate"] == {"float": "0.515625"}
    code, out, _ = run(["modulus", "annulus", "1", "2.718281828459045", "--grid", "32"], capsys)
    assert code == 0
    code, out, _ = run(["modulus", "gamma", "--word", "(Le,1)", "--index", "4", "--grid", "32"],
                       capsys)
    doc = json.loads(out)
    assert doc["kind"] == "arc_family" and doc["ok"] is True
    code, _, err = run(["modulus", "rect", "2"], capsys)
    assert code == 2


def test_schottky_command(capsys):
    code, out, _ = run(["schottky", "--max-word-length", "4", "--nest", "Le1:Le,Ri2:Ri",
                        "--depth", "5"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["words_by_length"] == [8, 56, 392, 2744]
    assert len(doc["nest"]["disks"]) == 5
    code, _, err = run(["schottky", "--nest", "Zz9:Le"], capsys)
    assert code == 2


def test_render_and_errors(tmp_path, capsys):
    s = tmp_path / "p.json"
    run(["construct", "--depth", "1", "--mode", "presentation", "--out", str(s)], capsys)
    code, svg, _ = run(["render", "--scene", str(s), "--chain", "(Le,1)"], capsys)
    assert code == 0
    assert svg.count("<circle") == 8 and svg.count("<polyline") == 1
    code, _, err = run(["render", "--scene", str(s), "--window", "50,50,60,60"], capsys)
    assert code == 2 and "does not meet" in err
    code, _, _ = run(["render", "--scene", str(tmp_path / "missing.json")], capsys)
    assert code == 2


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"depth": 2, "verify": {"suites": "params"},
                               "capacity": {"mode": "actual"}}))
    code, out, _ = run(["verify", "--config", str(cfg)], capsys)
    rep = json.loads(out)
    assert rep["config"]["depth"] == 2 and rep["config"]["suites"] == ["params"]
    code, out, _ = run(["verify", "--config", str(cfg), "--depth", "1"], capsys)
    assert json.loads(out)["config"]["depth"] == 1
    code, out, _ = run(["verify", "--config", str(cfg), "--suite", "constants"], capsys)
    assert json.loads(out)["config"]["suites"] == ["constants"]
    code, out, _ = run(["capacity", "--config", str(cfg)], capsys)
    assert json.loads(out)["mode"] == "actual"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"verify": {"colour": "red"}}))
    code, _, err = run(["verify", "--config", str(bad)], capsys)
    assert code == 2


def test_usage_errors_exit_2(capsys):
    assert main([]) == 2
    assert main(["construct", "--mode", "fancy"]) == 2
    capsys.readouterr()


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "rigidcircle.cli", "capacity", "--levels", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["k_max"] == 1
