import csv
import io
import json
import math

import pytest

from linnik_lab.cli import dispatch, int_list, real_list
from linnik_lab.reports import format_scalar, to_csv, to_json


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


# value syntax

def test_ranges():
    assert int_list("1e5:1e8:x10") == [10**5, 10**6, 10**7, 10**8]
    assert int_list("3,4,5") == [3, 4, 5]
    assert int_list("2:10:+4,20") == [2, 6, 10, 20]
    assert real_list("1.05,1.1") == [1.05, 1.1]
    with pytest.raises(Exception):
        int_list("1:10:x1")


# formatting

def test_format_scalar():
    assert format_scalar(1 / 3) == "0.333333333333"
    assert format_scalar(True) == "true" and format_scalar(None) == ""
    assert format_scalar(1e-20) == "1e-20"
    assert format_scalar(2 + 0.5j) == "2+0.5j"


def test_csv_lf_and_header():
    text = to_csv([{"a": 1, "b": 2.0}, {"b": 3.5, "c": "x"}], ("b",))
    assert text == "b,a,c\n2,1,\n3.5,,x\n"


def test_json_layout():
    doc = json.loads(to_json([{"v": 1 / 7, "z": 1j, "inf": math.inf}], {"version": "0"}))
    assert set(doc) == {"meta", "rows"}
    assert doc["rows"][0]["v"] == float(f"{1 / 7:.12g}")
    assert doc["rows"][0]["z"] == {"re": 0.0, "im": 1.0}
    assert doc["rows"][0]["inf"] == "inf"


# subcommands

def test_exceptional_json():
    code, out, _ = run("exceptional", "--q", "4", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["version"] and doc["meta"]["config"]["q"] == [4]
    row = doc["rows"][0]
    assert row["psi"] == "4:1" and abs(row["l_q_one"] - 1.0471976) < 1e-7


def test_probe_identity_in_output():
    code, out, _ = run("probe", "--q", "3", "--a", "1", "--x", "1e6")
    assert code == 0
    (row,) = rows_of(out)
    lhs = float(row["psi_ap_value"])
    rhs = float(row["main"]) + float(row["psi_term"]) + float(row["E"])
    assert abs(lhs - rhs) <= 1e-11 * lhs
    for key in ("q", "a", "x", "y", "feasible", "C1", "C2", "L_const", "M_prime"):
        assert row[key] != ""
    assert row["feasible"] == "false"


def test_sweep_probe_rows_and_header():
    code, out, _ = run("sweep", "probe", "--q", "3,4,5", "--x", "1e5:1e6:x10")
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == (2 + 2 + 4) * 2
    assert out.splitlines()[0].startswith("q,a,x,y,feasible")
    code2, out2, _ = run("sweep", "probe", "--q", "3,4,5", "--x", "1e5:1e6:x10")
    assert out == out2


@pytest.mark.parametrize("argv", [
    ("group", "--q", "12"),
    ("chars", "--q", "8"),
    ("psi-ap", "--q", "4", "--x", "1e4"),
    ("rough", "--x", "1000", "--y", "5", "--q", "3"),
    ("verify-lemma", "--kind", "ap", "--x", "8000", "--y", "20", "--q", "3"),
    ("verify-lemma", "--kind", "character", "--x", "8000", "--y", "20", "--q", "5"),
    ("shiu", "--x", "1e6", "--window", "1e4", "--q", "3", "--a", "1", "--f", "divisor"),
    ("lvalue", "--q", "5", "--s", "1"),
    ("lrough", "--q", "5", "--s", "1.5+1j", "--y", "100", "--k", "1"),
    ("siegel-scan", "--q", "3,4", "--grid", "64"),
    ("lbounds", "--q", "5", "--y", "50", "--sigma", "1.2", "--t", "0", "--j-max", "2"),
    ("meansq", "--coeffs", "1:1,2:0.5", "--sigma", "1.5", "--T1", "0", "--T2", "10"),
    ("montgomery", "--a-coeffs", "1:1,2:-0.5", "--b-coeffs", "1:1,2:0.5", "--sigma", "1.5", "--T", "3"),
    ("mvt", "--q", "3", "--a", "1", "--y", "150", "--sigma", "1.1", "--T", "1", "--N-trunc", "5000"),
    ("kn", "--coeffs", "1:1,3:0.4", "--s", "2", "--k", "3"),
    ("delta", "--u", "1e4,2e4", "--y", "400", "--q", "5"),
    ("identity", "--x", "1e5", "--q", "3", "--a", "1", "--y", "144"),
    ("recursion", "--x", "1e5", "--q", "3", "--a", "2"),
    ("schedule", "--x", "1e8", "--q", "3"),
    ("sweep", "fit", "--q", "3", "--a", "1", "--x", "1e4:1e6:x10"),
    ("sweep", "identity", "--q", "3", "--a", "1", "--x", "1e5"),
])
def test_every_subcommand_runs(argv):
    code, out, err = run(*argv)
    assert code == 0, err
    assert out.count("\n") >= 2 and "\r" not in out


def test_exit_codes():
    assert run("probe", "--q", "3", "--a", "3", "--x", "1e6")[0] == 1
    assert run("identity", "--x", "1e4", "--q", "3", "--a", "1", "--y", "144")[0] == 1
    assert run("probe", "--q", "3")[0] == 2
    assert run("nonsense")[0] == 2
    assert run("probe", "--q", "3", "--x", "1e5", "--threads", "0")[0] == 2
    code, _, err = run("exceptional", "--q", "4", "--config", "/nonexistent/file")
    assert code == 2 and "configuration error" in err


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# probe settings\nx = 1e5\nq = 4\nC1 = 0.2\n", encoding="utf-8")
    code, out, _ = run("probe", "--config", str(cfg), "--a", "3")
    assert code == 0
    (row,) = rows_of(out)
    assert row["q"] == "4" and row["a"] == "3" and row["C1"] == "0.2"
    # the flag wins over the file
    code, out, _ = run("probe", "--config", str(cfg), "--q", "5", "--a", "2")
    assert rows_of(out)[0]["q"] == "5"
    cfg.write_text("x = 1e5\nq = 4\nunknown_key = 1\n", encoding="utf-8")
    assert run("probe", "--config", str(cfg))[0] == 2
    cfg.write_text("x = 1e5\nq = 4\nformat = xml\n", encoding="utf-8")
    assert run("probe", "--config", str(cfg))[0] == 2


def test_output_file(tmp_path):
    path = tmp_path / "out.csv"
    code, out, _ = run("group", "--q", "7", "--output", str(path))
    assert code == 0 and out == ""
    data = path.read_bytes()
    assert data.startswith(b"q,phi,component,generator,order\n") and b"\r" not in data


def test_threads_env_and_flag(monkeypatch):
    monkeypatch.setenv("LINNIK_LAB_THREADS", "4")
    code, out, _ = run("psi-ap", "--q", "5", "--x", "1e5", "--format", "json")
    assert json.loads(out)["meta"]["config"]["threads"] is None
    code, out, _ = run("psi-ap", "--q", "5", "--x", "1e5", "--format", "json", "--threads", "2")
    assert json.loads(out)["meta"]["config"]["threads"] == 2
