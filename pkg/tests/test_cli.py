import json
import subprocess
import sys
import time

import pytest

from qrep.cli import RunConfig, ConfigError, main
from qrep.qtorus import TorusElement


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_all_at_rank_three(capsys):
    code, out, _ = run(capsys, "verify", "--n", "3", "--suite", "all", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["schema"] == 1
    assert all(c["status"] == "pass" or c.get("expected_failure") for s in doc["suites"] for c in s["checks"])


def test_rank_one_quantum_report_line(capsys):
    code, out, _ = run(capsys, "verify", "--n", "2", "--suite", "quantum")
    assert code == 0 and "KE=q²EK @(1,1): pass" in out


def test_zero_orientation_shows_expected_failures(capsys):
    code, out, _ = run(capsys, "verify", "--n", "3", "--suite", "bold", "--orientation", "0,0,0",
                       "--format", "json")
    doc = json.loads(out)
    checks = [c for s in doc["suites"] for c in s["checks"]]
    serre = [c for c in checks if "Serre" in c.get("formula", "")]
    assert code == 0
    assert serre and any(c["status"] == "fail" and c.get("expected_failure") for c in serre)


@pytest.mark.parametrize("argv", [["verify", "--n", "7"], ["verify", "--n", "1"], ["verify", "--suite", "nope"],
                                  ["numeric", "--tolerance", "0"], ["formulas", "--n", "3", "--suite", "haar"]])
def test_config_errors_exit_two(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_unparseable_arguments_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--orientation", "a,b"])
    assert exc.value.code == 2


def test_unwritable_output_exits_two(capsys, tmp_path):
    assert run(capsys, "formulas", "--n", "2", "--out", str(tmp_path / "missing" / "x.tex"))[0] == 2


def test_tolerance_breach_exits_one(capsys):
    code, out, _ = run(capsys, "numeric", "--n", "3", "--suite", "haar", "--tolerance", "1e-300", "--samples", "5")
    assert code == 1 and "overall: fail" in out


def test_reports_are_deterministic(capsys, monkeypatch):
    argv = ["verify", "--n", "3", "--suite", "totalpos,classical", "--format", "json", "--seed", "4"]
    a = run(capsys, *argv)[1]
    monkeypatch.setenv("QREP_THREADS", "2")
    b = run(capsys, *argv)[1]
    assert a == b and json.loads(a)["seed"] == 4


def test_timing_only_on_request(capsys):
    out = run(capsys, "verify", "--n", "2", "--suite", "classical", "--format", "json", "--timing")[1]
    assert "timing" in json.loads(out)
    out = run(capsys, "verify", "--n", "2", "--suite", "classical", "--format", "json")[1]
    assert "timing" not in json.loads(out)


def test_formulas_json_round_trips(capsys):
    code, out, _ = run(capsys, "formulas", "--n", "3", "--suite", "positive,bold", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    for fam in doc["families"].values():
        for data in fam.values():
            el = TorusElement.from_json(data)
            assert el.to_json() == data


def test_rank_one_positive_latex_has_two_monomials(capsys):
    out = run(capsys, "formulas", "--n", "2", "--suite", "positive")[1]
    line = next(l for l in out.splitlines() if l.startswith("e_{1}"))
    assert line.count("e^{2\\pi b(") == 2
    assert "\\alpha'_{1}" in line


def test_formulas_rank_four_budget(capsys):
    t0 = time.perf_counter()
    code, _, _ = run(capsys, "formulas", "--n", "4", "--suite", "all", "--format", "json")
    assert code == 0 and time.perf_counter() - t0 < 5


def test_commutant_formula(capsys):
    out = run(capsys, "formulas", "--n", "3", "--suite", "commutant")[1]
    assert "\\omega_{1}" in out and "\\frac{1}{3}" in out


@pytest.mark.parametrize("suite,tol", [("haar", 1e-8), ("infinitesimal", 1e-6), ("mellin", 1e-8)])
def test_numeric_rank_three(capsys, suite, tol):
    code, out, _ = run(capsys, "numeric", "--n", "3", "--suite", suite, "--tolerance", str(tol), "--samples", "20",
                       "--format", "json")
    assert code == 0, out


def test_numeric_rank_one_haar_is_exact(capsys):
    doc = json.loads(run(capsys, "numeric", "--n", "2", "--suite", "haar", "--format", "json")[1])
    values = [c["value"] for s in doc["suites"] for c in s["checks"] if "value" in c]
    assert values and max(values) < 1e-12


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(n=3, suites=("all",), seed=-1, format="json", orientation=None).validate(("classical",))


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "qrep.cli", "verify", "--n", "2", "--suite", "classical"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "overall: pass" in res.stdout
