import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from gcx import cli

FIX = Path(__file__).parent / "fixtures"


def run_main(args, stdin=None, capsys=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(stdin)))
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def load(name):
    return cli.parse((FIX / name).read_bytes())


# -- parse ------------------------------------------------------------------------

def test_parse_cross_product_document():
    doc = load("cross_product.json")
    assert doc.kind == "leibniz"
    assert doc.payload["dim"] == 3
    assert doc.degree_bound == 2 and doc.seed == 0 and doc.trials == 20


def test_parse_dense_constants():
    eps = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    eps[0][1][2] = eps[1][2][0] = eps[2][0][1] = 1
    eps[1][0][2] = eps[2][1][0] = eps[0][2][1] = -1
    doc = cli.parse(json.dumps({"kind": "leibniz", "dim": 3, "constants": eps}))
    assert cli.run(doc, "check-leibniz").exit_code == 0


def test_parse_empty_input():
    with pytest.raises(cli.InputError, match="parse error at offset 0"):
        cli.parse(b"")


def test_parse_offset_reported():
    with pytest.raises(cli.InputError, match="offset 10"):
        cli.parse(b'{"kind": 1')


def test_non_square_metric_names_pointer():
    with pytest.raises(cli.InputError, match="/metric"):
        cli.parse(b'{"kind": "point-courant", "dim": 2, "metric": [[1, 0], [0]]}')
    with pytest.raises(cli.InputError, match="/metric"):
        cli.parse(b'{"kind": "point-courant", "dim": 2, "metric": [[1, 0, 0], [0, 1, 0]]}')


def test_schema_violation_pointer():
    with pytest.raises(cli.InputError, match="/options/degree_bound"):
        cli.parse(b'{"kind": "gen-tangent", "n": 1, "options": {"degree_bound": "two"}}')
    with pytest.raises(cli.InputError, match="schema error"):
        cli.parse(b'{"kind": "gen-tangent", "n": 1, "extra": 1}')


def test_float_rejected():
    with pytest.raises(cli.InputError):
        cli.parse(b'{"kind": "leibniz", "dim": 1, "constants": [[[0.5]]]}')


# -- run ---------------------------------------------------------------------------

def test_canonical_t2_axioms_and_jacobi():
    rep = cli.run(load("canonical_t2.json"), "check-courant")
    assert [c.name for c in rep.checks] == ["axioms", "jacobi"]
    assert all(c.verdict == "pass" for c in rep.checks)
    assert rep.exit_code == 0


def test_point_courant_failure_witness():
    rep = cli.run(load("nilpotent_metric.json"), "check-leibniz")
    (check,) = rep.checks
    assert check.verdict == "fail" and rep.exit_code == 1
    assert {"identity": "symmetric-part", "X": "e2", "Y": "e1", "Z": "e1", "value": "2"} in check.witnesses


def test_n_omega_classifies_complex():
    rep = cli.run(load("n_omega.json"), "classify-tensor")
    (check,) = rep.checks
    assert check.verdict == "pass" and check.detail["kind"] == "complex"


def test_unknown_check_is_input_error():
    doc = cli.parse(b'{"kind": "leibniz", "dim": 1, "options": {"checks": ["nope"]}}')
    with pytest.raises(cli.InputError, match="unknown check"):
        cli.run(doc, "check-leibniz")


def test_kind_mismatch_is_input_error():
    with pytest.raises(cli.InputError):
        cli.run(load("cross_product.json"), "commutant")


def test_witnesses_iff_fail():
    for name, cmd in [("bad_psi.json", "derived-bracket"), ("nilpotent_tensor.json", "classify-tensor"),
                      ("cross_rotation.json", "classify-tensor"), ("canonical_psi2.json", "classify-generator")]:
        for c in cli.run(load(name), cmd).checks:
            assert bool(c.witnesses) == (c.verdict == "fail"), (name, c.name)


def test_generator_commands():
    doc = load("canonical_psi2.json")
    rep = cli.run(doc, "classify-generator")
    assert {c.name: c.verdict for c in rep.checks} == {"classify": "pass", "cocycle": "pass",
                                                       "torsion-identity": "pass"}
    assert rep.checks[0].detail["classification"] == "complex"
    rep = cli.run(doc, "roundtrip-psi")
    assert rep.exit_code == 0
    ev = {c.name: c for c in cli.run(doc, "derived-bracket").checks}["evaluate"]
    assert ev.detail["bracket"] == [[], [], [], [[1, 1, [0, 0]]]]


def test_homological_failure():
    rep = cli.run(load("bad_psi.json"), "homological")
    v = {c.name: c.verdict for c in rep.checks}
    assert v == {"homological": "fail", "jacobi-agreement": "pass"}


# -- rendering -------------------------------------------------------------------------

def test_render_empty():
    assert cli.report_render(cli.Report(), "json") == b'{"checks":[]}\n'
    assert cli.report_render(cli.Report(), "text") == b"0 checks\n"


def test_render_pass_and_fail_lines():
    rep = cli.Report([cli.CheckResult("b", "fail", [{"X": "e1"}]), cli.CheckResult("a", "pass")])
    lines = cli.report_render(rep, "text").decode().splitlines()
    assert lines == ['PASS a', 'FAIL b witnesses=[{"X":"e1"}]']
    one = cli.report_render(cli.Report([cli.CheckResult("a", "pass")]), "text")
    assert one == b"PASS a\n"


def test_render_is_sorted_and_omits_timing():
    rep = cli.Report([cli.CheckResult("z", "pass", timing=1.5), cli.CheckResult("a", "pass", timing=0.1)])
    body = json.loads(cli.report_render(rep, "json"))
    assert [c["name"] for c in body["checks"]] == ["a", "z"]
    assert "timing" not in body["checks"][0]
    body = json.loads(cli.report_render(rep, "json", timing=True))
    assert body["checks"][0]["timing"] == 0.1


# -- main / exit codes --------------------------------------------------------------------

def test_main_exit_codes(capsys, monkeypatch):
    code, out, _ = run_main(["check-leibniz", "--input", str(FIX / "cross_product.json")], capsys=capsys)
    assert code == 0 and json.loads(out)["checks"]
    code, out, _ = run_main(["check-leibniz", "--input", str(FIX / "nilpotent_metric.json"), "--format", "text"],
                            capsys=capsys)
    assert code == 1 and out.startswith("FAIL point-courant")
    code, _, err = run_main(["check-leibniz", "--input", "-"], stdin=b"", capsys=capsys, monkeypatch=monkeypatch)
    assert code == 2 and "offset 0" in err
    code, _, _ = run_main(["check-leibniz", "--input", str(FIX / "missing.json")], capsys=capsys)
    assert code == 2
    code, _, _ = run_main(["no-such-command", "--input", "x"], capsys=capsys)
    assert code == 2


def test_main_check_override(capsys):
    code, out, _ = run_main(["check-courant", "--input", str(FIX / "canonical_t2.json"), "--check", "anchor-rule",
                             "--degree-bound", "1", "--format", "text"], capsys=capsys)
    assert code == 0 and out == "PASS anchor-rule\n"


def test_console_script_stdin():
    data = (FIX / "n_omega.json").read_bytes()
    proc = subprocess.run([sys.executable, "-m", "gcx.cli", "classify-tensor", "--input", "-"],
                          input=data, capture_output=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["checks"][0]["detail"]["kind"] == "complex"
