import json
import subprocess
import sys

import pytest

from shulga.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_decompose_json(capsys):
    code, out, _ = run(capsys, "decompose", "28244/141973", "--format", "json")
    rec = json.loads(out)
    assert code == 0
    assert rec["b"] == ["6", "27"] and rec["c"] == ["30", "29"] and rec["terminated"] is True
    assert rec["beta"] == "27/163" and rec["gamma"] == "29/871"
    assert rec["audit"]["strict_c_gt_b"]["status"] == "pass"


def test_decompose_real_line(capsys):
    code, out, _ = run(capsys, "decompose", "7/2", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["integer_part"] == "3" and rec["beta"] == "10/3"


def test_decompose_csv_and_plain(capsys):
    code, out, _ = run(capsys, "decompose", "18769/22230", "--format", "csv")
    assert out.splitlines() == ["n,b,c", "1,2,2", "2,2,3", "3,3,4", "4,5,8"]
    code, out, _ = run(capsys, "decompose", "18769/22230", "--format", "plain")
    assert "b: [2, 2, 3, 5]" in out and "  sum_exact:" in out


def test_decompose_anomaly_exit(capsys):
    code, out, _ = run(capsys, "decompose", "18769/22230", "--max-steps", "2", "--format", "json")
    assert code == 1 and "anomaly" in json.loads(out)


def test_round_trip_through_audit(capsys, tmp_path):
    for x in ("28244/141973", "sqrt(3)"):
        f = tmp_path / "rec.json"
        assert main(["decompose", x, "--max-steps", "20", "--out", str(f)]) == 0
        code, out, _ = run(capsys, "audit", str(f), "--format", "json")
        rep = json.loads(out)
        assert code == 0 and rep["ok"] and not rep["recomputation_drift"]


def test_audit_detects_edited_record(capsys, tmp_path):
    main(["decompose", "18769/22230", "--out", str(tmp_path / "r.json")])
    rec = json.loads((tmp_path / "r.json").read_text())
    rec["c"][3] = "9"
    (tmp_path / "bad.json").write_text(json.dumps(rec))
    code, out, _ = run(capsys, "audit", str(tmp_path / "bad.json"), "--format", "json")
    assert code == 1 and json.loads(out)["recomputation_drift"]


def test_audit_usage_errors(capsys, tmp_path):
    assert run(capsys, "audit", str(tmp_path / "missing.json"))[0] == 2
    (tmp_path / "x.json").write_text("{not json")
    assert run(capsys, "audit", str(tmp_path / "x.json"))[0] == 2
    (tmp_path / "y.json").write_text("{}")
    assert run(capsys, "audit", str(tmp_path / "y.json"))[0] == 2


def test_construct(capsys):
    code, out, _ = run(capsys, "construct", "--depth", "6", "--format", "json")
    rep = json.loads(out)
    assert rep["b"] == ["2", "6", "11", "16", "21", "26"]
    assert rep["c"] == ["4", "9", "14", "19", "24", "28"]
    assert rep["verify_nesting"]["ok"] and rep["verify_growth_bounds"]["ok"]
    # the window lemma fails at level 3; that surfaces as exit 1 with the witness
    assert not rep["verify_window"]["ok"]
    assert rep["verify_window"]["failures"][0]["level"] == "3"
    assert code == 1
    code, out, _ = run(capsys, "construct", "--depth", "2", "--format", "csv")
    assert code == 0 and out.splitlines()[2] == "2,6,9,152,169,0,1"


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--depth", "6", "--b-cap", "7", "--format", "json")
    assert code == 0 and json.loads(out)["prefixes"] == []
    code, out, _ = run(capsys, "enumerate", "--depth", "2", "--b-cap", "2", "--format", "csv")
    assert out.splitlines() == ["b,c", "2 2,2"]
    assert run(capsys, "enumerate", "--depth", "1", "--b-cap", "2")[0] == 2


def test_scan_outputs_deterministic(capsys):
    a = run(capsys, "scan", "--q-max", "60", "--format", "csv")[1]
    b = run(capsys, "scan", "--q-max", "60", "--format", "csv", "--jobs", "2")[1]
    assert a == b
    lines = a.splitlines()
    assert lines[0] == "p,q,steps,terminated,max_b,max_c,c_monotone,first_c_drop_index,len_over_log2q"
    assert lines[3] == "1,2,1,true,3,6,true,0,1.000"
    code, out, _ = run(capsys, "scan", "--q-max", "60", "--format", "json")
    s = json.loads(out)
    assert code == 0 and s["fractions"] == str(len(lines) - 1) and s["trend"]


def test_scan_failure_exit(capsys):
    code, out, _ = run(capsys, "scan", "--q-max", "30", "--max-steps", "1", "--format", "json")
    assert code == 1 and "/" in json.loads(out)["failure"]


def test_expand(capsys):
    _, out, _ = run(capsys, "expand", "107/247", "--format", "json")
    assert json.loads(out)["expansion"] == "[0;2,3,4,8]"
    _, out, _ = run(capsys, "expand", "sqrt(7)", "--terms", "8", "--format", "json")
    rep = json.loads(out)
    assert rep["a0"] == "2" and rep["period"] == ["1", "1", "1", "4"]


@pytest.mark.parametrize("argv", [
    ["decompose", "abc"],
    ["decompose", "1/0"],
    ["bogus"],
    ["scan", "--q-max", "1"],
    ["scan", "--q-max", "10", "--jobs", "0"],
    ["construct", "--depth", "0"],
    ["expand", "1/2", "--format", "xml"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_surd_runs_to_cap(capsys):
    code, out, _ = run(capsys, "decompose", "sqrt(2)", "--max-steps", "3", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["integer_part"] == "1" and rec["stop_reason"] == "step_cap_reached"


def test_default_format_when_piped():
    p = subprocess.run([sys.executable, "-m", "shulga.cli", "decompose", "1/2"],
                       capture_output=True, text=True, check=True)
    assert json.loads(p.stdout)["b"] == ["3"]
