import csv
import io
import json
import math
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from cauchyrect import catalog
from cauchyrect.cli import run

SCHEMA = json.loads(resources.files("cauchyrect").joinpath("report.schema.json").read_text())


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), out=buf)
    return code, buf.getvalue()


def call_json(*argv):
    code, text = call(*argv, "--format", "json")
    report = json.loads(text)
    jsonschema.validate(report, SCHEMA)
    return code, report


def test_verify_quiz_json():
    code, rep = call_json("verify", "F1_quiz", "--tol", "1e-6")
    assert code == 0
    row = rep["values"]["rows"][0]
    for k in ("closed", "numeric", "theorem"):
        assert row[k] == pytest.approx(0.69848, abs=1e-5)
    assert all(rep["pass"].values())


def test_jordan_csv():
    code, text = call("jordan", "--R", "1,10,100", "--b", "1", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["R", "numeric", "lemma_bound", "naive_bound_limit", "theta_integral"]
    for row in rows:
        R = float(row["R"])
        assert float(row["numeric"]) <= math.pi * -math.expm1(-R)


def test_c_not_above_a_is_usage_error():
    assert call("verify", "F8_denom_one", "--a", "2", "--c", "1")[0] == 2


@pytest.mark.parametrize("argv", [
    ("verify", "F2_parameters", "--tol", "1e-13"),
    ("verify", "F2_parameters", "--a", "-1"),
    ("verify", "F2_parameters", "--chunks", "4"),
    ("nonsense",),
    ("rectangle", "--num", "1", "--den", "0,1"),
])
def test_usage_errors(argv, capsys):
    assert call(*argv)[0] == 2


@pytest.mark.parametrize("argv", [
    ("list",),
    ("eval", "F9_log_one", "--c", "3"),
    ("verify", "FD_dissertation"),
    ("verify", "--blunder-mode"),
    ("residue", "--num", "exp(i*z)", "--den", "1,0,1"),
    ("rectangle", "--num", "exp(exp(i*z))*z", "--den", "1,0,1", "--rect=-3,3,-0.5,3"),
    ("diverge-probe", "--R", "10,100"),
    ("jordan", "--R", "0.5,5"),
    ("hypotheses", "F6_hyper_one"),
])
def test_reports_are_schema_valid(argv):
    code, rep = call_json(*argv)
    assert code == (0 if all(rep["pass"].values()) else 1)
    assert rep["command"] == argv[0]


def test_blunder_report():
    code, rep = call_json("verify", "--blunder-mode")
    assert code == 0
    assert rep["values"]["gap"] == pytest.approx(math.pi / 2, abs=1e-10)


def test_hypotheses_fail_exit_one():
    code, rep = call_json("hypotheses", "F2_parameters", "--blunder-mode")
    assert code == 1 and rep["pass"] == {"overall": False}


def test_csv_headers_fixed():
    _, text = call("list", "--format", "csv")
    assert text.splitlines()[0] == "id,needs_c,formula"
    _, text = call("diverge-probe", "--R", "10,100", "--format", "csv")
    assert text.splitlines()[0] == "R,log_R,raw_re,raw_im,stabilized_re,stabilized_im"


def test_verify_all_deterministic_order():
    _, a = call("verify", "--all", "--c", "3", "--format", "csv")
    _, b = call("verify", "--all", "--c", "3", "--format", "csv")
    assert a == b
    rows = list(csv.DictReader(io.StringIO(a)))
    assert [row["id"] for row in rows] == list(catalog.IDS)
    assert {row["id"]: row["c"] for row in rows}["F2_parameters"] == ""
    assert {row["id"]: row["c"] for row in rows}["F9_log_one"] == "3"



def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cauchyrect", "eval", "F1_quiz", "--format", "json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["values"]["closed_form"] == pytest.approx(0.6984826427178843)
