import csv
import io
import json
import subprocess
import sys

import pytest

from transvect import cli, report
from transvect.conformal import b2_closed_form


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_json(capsys):
    code, out, _ = run(capsys, "classify", "--order", "3", "--weights", "-2/3,-2/3,-2/3", "--output", "json")
    assert code == 0
    data = json.loads(out)
    assert data["dimension"] == 3 and len(data["basis"]) == 3
    assert data["generator_check"] and data["catalog_spans"]
    assert [c["member"] for c in data["catalog"]] == [True, True, True]


def test_classify_over_extension(capsys):
    w = "-3/4-1/12*sqrt21"
    code, out, _ = run(capsys, "classify", "--order", "5", "--weights", ",".join([w] * 3))
    assert code == 0 and "dimension 1" in out and "Theta+: member" in out


def test_verify_entry(capsys):
    code, out, _ = run(capsys, "verify", "--entry", "delta3", "--weights", "1,2,3")
    assert code == 0 and "in kernel: true" in out


def test_verify_all_with_random_samples(capsys):
    code, out, _ = run(capsys, "verify", "--all", "--random", "2", "--seed", "5", "--output", "json")
    assert code == 0
    assert all(r["in_kernel"] for r in json.loads(out))


def test_verify_params_and_oracle(capsys):
    code, out, _ = run(capsys, "verify", "--entry", "xi_st", "--params", "s=2,t=-1", "--oracle")
    assert code == 0 and "oracle: true" in out


def test_sweep_order7_default_grid_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--order", "7", "--grid", "default", "--output", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == list(cli.CSV_COLUMNS)
    assert len(rows) == 4096
    assert {r["dimension"] for r in rows} == {"0"}


def test_sweep_names_matches(capsys):
    code, out, _ = run(capsys, "sweep", "--order", "3", "--grid", "0,1", "--extra", "-2/3", "--output", "csv")
    rows = {(r["lambda"], r["gamma"], r["tau"]): r for r in csv.DictReader(io.StringIO(out))}
    assert len(rows) == 27
    assert rows[("-2/3",) * 3]["dimension"] == "3"
    assert rows[("-2/3",) * 3]["matched_catalog_names"].count("Gz") == 3


def test_output_is_deterministic(capsys):
    args = ("sweep", "--order", "4", "--grid", "0,-3/4,1", "--output", "json")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    args = ("verify", "--all", "--random", "3", "--seed", "11", "--output", "csv")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b


def test_out_file(capsys, tmp_path):
    target = tmp_path / "cat.json"
    code, out, _ = run(capsys, "catalog", "--output", "json", "--out", str(target))
    assert code == 0 and out == ""
    names = [e["name"] for e in json.loads(target.read_text())]
    assert "gamma_op" in names and names == sorted(names)


@pytest.mark.parametrize("argv", [
    ["classify", "--order", "3", "--weights", "0.5,1,1"],
    ["classify", "--order", "3", "--weights", "1,2"],
    ["classify", "--order", "3"],
    ["frobnicate"],
    ["verify"],
    ["verify", "--entry", "xi", "--weights", "1,2,3"],
    ["verify", "--entry", "delta3", "--weights", "1,2"],
    ["conformal", "--n", "3", "--p", "1", "--q", "1", "--weights", "1,1,1"],
    ["conformal", "--p", "2", "--weights", "1,1,1"],
    ["conformal", "--n", "3", "--weights", "1/0,1,1"],
    ["obstruction", "--k", "2", "--n", "3", "--weights", "1,1,1"],
    ["sweep", "--order", "3", "--output", "xml"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_conformal_command(capsys):
    code, out, _ = run(capsys, "conformal", "--k", "1", "--p", "3", "--q", "1", "--weights", "1/2,1/3,1/5",
                       "--params", "s=1,t=2,u=3", "--output", "json")
    data = json.loads(out)
    assert code == 0 and data["n"] == 4 and data["dimension"] == 3
    assert data["closed_form_in_kernel"] and data["closed_form_defect_zero"]
    _, out2, _ = run(capsys, "conformal", "--k", "1", "--n", "4", "--weights", "1/2,1/3,1/5", "--params",
                     "s=1,t=2,u=3", "--output", "json")
    assert out2 == out


def test_obstruction_command(capsys, tmp_path):
    code, out, _ = run(capsys, "obstruction", "--k", "0", "--n", "4", "--weights", "1,2,3")
    assert code == 0 and "passes" in out
    path = tmp_path / "b.json"
    path.write_text(json.dumps(b2_closed_form(4, (1, 2, 3), 1, 0, 0).to_dict()))
    code, out, _ = run(capsys, "obstruction", "--symbol", str(path), "--output", "json")
    data = json.loads(out)
    assert code == 0 and data["passes"] is False and data["factor"] == "1/2"


def test_report_passes(capsys):
    code, out, _ = run(capsys, "report")
    assert code == 0
    assert "## Order 6" in out and "FAIL" not in out and "all rows pass" in out


def test_report_mismatch_exits_1(capsys, monkeypatch):
    golden = report.load_golden()
    golden["dimensions"][0]["dimension"] = 7
    monkeypatch.setattr(report, "load_golden", lambda: golden)
    code, out, _ = run(capsys, "report")
    assert code == 1
    assert "order 1 at (0, 0, 0): expected 7, got 3" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "transvect", "verify", "--entry", "gamma_op"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "in kernel: true" in res.stdout
