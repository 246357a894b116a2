import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from carnot.cli import emit_json, main, run

DATA = Path(__file__).parent / "data"


def invoke(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def invoke_json(capsys, *argv):
    code, out = invoke(capsys, *argv)
    return code, json.loads(out)


def exponents(report):
    return {c["n"]: c["exponent"] for c in report["result"]["certificates"]}


def test_certify_heisenberg_table(capsys):
    code, rep = invoke_json(capsys, "certify", "--jet", "1,3")
    assert code == 0
    assert rep["schema"].startswith("carnot-report/")
    assert rep["tool"]["version"] == "0.1.0"
    assert rep["input"] == {"builtin": "jet:1,3"}
    assert exponents(rep) == {2: "2", 3: "3/2", 4: "5/3"}


def test_certify_single_dimension(capsys):
    code, rep = invoke_json(capsys, "certify", "--jet", "3,2", "--dim", "3")
    assert code == 0
    assert exponents(rep) == {3: "3"}


def test_certify_out_of_range_dimension(capsys):
    code, rep = invoke_json(capsys, "certify", "--jet", "1,1", "--dim", "99")
    assert code == 0
    (cert,) = rep["result"]["certificates"]
    assert cert["lower"] is None and cert["upper"] is None
    assert "not applicable" in cert["gaps"][0]


def test_markdown_and_json_agree(capsys, tmp_path):
    out = tmp_path / "table.md"
    assert main(["certify", "--jet", "2,2", "--format", "md", "--out", str(out)]) == 0
    md = out.read_text()
    rows = re.findall(r"^\| (\d+) \| ([^|]+) \| ([^|]+) \| ([^|]+) \|", md, re.M)
    _, rep = invoke_json(capsys, "certify", "--jet", "2,2")
    assert {int(n): e.strip() for n, _, _, e in rows} == exponents(rep)


def test_reports_are_deterministic_and_round_trip(capsys):
    _, first = invoke(capsys, "certify", "--jet", "2,2")
    _, second = invoke(capsys, "certify", "--jet", "2,2")
    assert first == second
    assert emit_json(json.loads(first)) == first


def test_timing_is_opt_in(capsys):
    _, rep = invoke_json(capsys, "--timing", "jet", "info", "--m", "1", "--k", "1")
    assert "timing_seconds" in rep
    _, rep = invoke_json(capsys, "jet", "info", "--m", "1", "--k", "1")
    assert "timing_seconds" not in rep


def test_jet_info(capsys):
    _, rep = invoke_json(capsys, "jet", "info", "--m", "2", "--k", "2")
    res = rep["result"]
    assert (res["dim"], res["class"]) == (8, 3)
    assert res["grading"] == {"1": 5, "2": 2, "3": 1}
    _, rep = invoke_json(capsys, "jet", "info", "--m", "1", "--k", "1")
    assert (rep["result"]["dim"], rep["result"]["class"], rep["result"]["homogeneous_dimension"]) == (3, 2, 4)
    _, rep = invoke_json(capsys, "jet", "info", "--m", "1", "--k", "4")
    assert rep["result"]["dim"] == 9


def test_jet_info_rejects_bad_parameters(capsys):
    code, rep = invoke_json(capsys, "jet", "info", "--m", "0", "--k", "1")
    assert code == 2
    assert rep["result"]["error"]["kind"] == "usage"


def test_validate_good_and_bad_files(capsys):
    code, rep = invoke_json(capsys, "algebra", "validate", str(DATA / "heisenberg.json"))
    assert code == 0 and rep["result"]["passed"]
    assert len(rep["input"]["file_sha256"]) == 64
    code, rep = invoke_json(capsys, "algebra", "validate", str(DATA / "bad_jacobi.json"))
    assert code == 1
    jacobi = next(c for c in rep["result"]["checks"] if c["check"] == "jacobi")
    assert jacobi["witness"] == ["a", "b", "c"]


def test_validate_parse_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"basis": [\n  {"name": "x" "weight": 1}]}')
    code, rep = invoke_json(capsys, "algebra", "validate", str(bad))
    assert code == 1
    assert rep["result"]["error"]["line"] == 2
    empty = tmp_path / "empty.json"
    empty.write_text('{"basis": []}')
    code, rep = invoke_json(capsys, "algebra", "validate", str(empty))
    assert code == 1 and rep["result"]["error"]["path"] == "$.basis"


def test_certify_user_file_is_conditional(capsys):
    code, rep = invoke_json(capsys, "certify", "--file", str(DATA / "heisenberg.json"))
    assert code == 0
    (cert,) = rep["result"]["certificates"]
    assert cert["conditional"] and cert["sharp"] and cert["exponent"] == "3"
    assert "delta" not in cert


def test_certify_user_file_with_bad_candidate(capsys, tmp_path):
    doc = json.loads((DATA / "heisenberg.json").read_text())
    doc["certificates"].append({"cocycle": [{"factors": ["e1", "y(1)"], "coeff": "1"}], "subalgebra": ["e1", "y(1)"]})
    path = tmp_path / "h.json"
    path.write_text(json.dumps(doc))
    code, rep = invoke_json(capsys, "certify", "--file", str(path))
    assert code == 1
    (cert,) = rep["result"]["certificates"]
    assert cert["exponent"] == "3"
    assert "closure" in cert["rejected"][0]


def test_certify_user_file_with_ledger(capsys, tmp_path):
    doc = json.loads((DATA / "heisenberg.json").read_text())
    doc["ledger"] = [{"dim": 1, "a": "1", "b": "1", "reference": "horizontal curves"}, {"dim": 2, "vectors": ["e1", "y(0)"]}]
    path = tmp_path / "h.json"
    path.write_text(json.dumps(doc))
    code, rep = invoke_json(capsys, "certify", "--file", str(path))
    (cert,) = rep["result"]["certificates"]
    assert code == 0 and cert["upper"]["rule"] == "ledger"
    assert cert["upper"]["trail"][1]["provenance"] == "verified: plane exponents"


def test_certify_budget_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("CARNOT_BUDGET_CELLS", "3")
    code, rep = invoke_json(capsys, "certify", "--jet", "1,2")
    assert code == 3
    assert all(c["lower"] is None for c in rep["result"]["certificates"])


def test_cohomology_command(capsys):
    _, rep = invoke_json(capsys, "cohomology", "--jet", "1,1", "--degree", "2")
    assert rep["result"]["betti"] == 2
    _, rep = invoke_json(capsys, "cohomology", "--jet", "2,2", "--degree", "1")
    assert rep["result"]["betti"] == 5
    _, rep = invoke_json(capsys, "cohomology", "--file", str(DATA / "heisenberg.json"), "--degree", "0")
    assert rep["result"]["betti"] == 1


def test_cohomology_budget(capsys, monkeypatch):
    monkeypatch.setenv("CARNOT_BUDGET_CELLS", "2")
    code, rep = invoke_json(capsys, "cohomology", "--jet", "1,1", "--degree", "1")
    assert code == 3 and rep["result"]["error"]["kind"] == "budget"


def test_plane_exponents_command(capsys):
    _, rep = invoke_json(capsys, "plane-exponents", "--jet", "1,1", "--vectors", '["e1", "y(1)"]')
    assert (rep["result"]["a"], rep["result"]["b"]) == ("2", "2")
    _, rep = invoke_json(capsys, "plane-exponents", "--jet", "1,1", "--vectors", '["e1", {"y(0)": "1"}]')
    assert (rep["result"]["a"], rep["result"]["b"]) == ("3", "3")
    assert rep["result"]["gram_determinant"] == "t^6"
    code, rep = invoke_json(capsys, "plane-exponents", "--jet", "1,1", "--vectors", "[{}]")
    assert code == 1 and rep["result"]["error"]["kind"] == "dependence"


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as err:
        run(["certify"])
    assert err.value.code == 2
    code, _ = invoke(capsys, "certify", "--jet", "banana")
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "carnot", "certify", "--jet", "1,1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["certificates"][0]["exponent"] == "3"
