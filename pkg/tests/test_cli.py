import io
import json
import subprocess
import sys

import pytest

from tridiag_spectra import cli


def _run(capsys, *argv):
    err = io.StringIO()
    code = cli.run(list(argv), stderr=err)
    return code, capsys.readouterr().out, err.getvalue()


def test_coulomb_ladder(capsys):
    code, out, _ = _run(capsys, "spectrum", "--case", "coulomb1", "--Z", "-1", "--l", "0", "--n-max", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,E"
    assert [float(x.split(",")[1]) for x in lines[1:]] == [-0.5, -0.125, -1 / 18, -1 / 32]


def test_output_is_deterministic(capsys):
    argv = ("coeffs", "--case", "coulomb1", "--Z", "-1", "--lambda", "1", "--E", "0.5", "--N", "12")
    a = _run(capsys, *argv)[1]
    b = _run(capsys, *argv)[1]
    assert a == b and "\r" not in a
    assert a.splitlines()[0] == "n,f_recursion,f_closed_form"


def test_json_layout(capsys):
    code, out, _ = _run(capsys, "spectrum", "--case", "oscillator1", "--omega", "1.5",
                        "--l", "1", "--n-max", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"case", "params", "results", "meta"}
    assert doc["case"] == "oscillator1"
    assert doc["meta"]["reading"] == "omega=Omega/lam"


def test_numeric_method(capsys):
    code, out, _ = _run(capsys, "spectrum", "--case", "coulomb1", "--Z", "-1", "--lambda", "2",
                        "--n-max", "1", "--method", "both")
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert abs(float(rows[0][2]) + 0.5) < 1e-6


def test_empty_ladder_note(capsys):
    code, out, err = _run(capsys, "spectrum", "--case", "coulomb1", "--Z", "1")
    assert code == 0 and out.splitlines() == ["n,E"]
    assert err


def test_usage_errors(capsys):
    assert _run(capsys, "spectrum")[0] == 1
    assert _run(capsys, "spectrum", "--case", "nope")[0] == 1
    assert _run(capsys, "verify", "--case", "oscillator1")[0] == 1    # --omega missing
    assert _run(capsys, "density", "--case", "hulthen2", "--mu", "1", "--nu", "1.5",
                "--gamma", "0.1", "--gamma", "0.2")[0] == 1          # several curves need --output


def test_domain_error(capsys):
    code, _, err = _run(capsys, "coeffs", "--case", "hulthen1", "--A", "-1", "--B", "0",
                        "--nu", "1.5", "--lambda", "1", "--E", "0.3")
    assert code == 2 and "domain" in err


def test_verify_passes(capsys):
    code, out, _ = _run(capsys, "verify", "--case", "morse1", "--lambda", "1", "--A", "-1", "--B", "0.125")
    assert code == 0
    assert out.splitlines()[0] == "check,value,tol,passed"
    assert all(line.endswith("true") for line in out.splitlines()[1:])


def test_verify_failure_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "TRIDIAG_TOL", -1.0)
    code, out, _ = _run(capsys, "verify", "--case", "coulomb1", "--Z", "-1", "--N", "6")
    assert code == 3 and "false" in out


def test_accuracy_error_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "FD_TOL", 1e-30)
    code, _, err = _run(capsys, "verify", "--case", "coulomb1", "--Z", "-1", "--N", "6",
                        "--levels", "1", "--fd-count", "200")
    assert code == 4 and "accuracy" in err


def test_density_files(capsys, tmp_path):
    root = tmp_path / "rho.csv"
    code, _, _ = _run(capsys, "density", "--case", "hulthen2", "--mu", "1", "--nu", "1.5",
                      "--gamma", "0.1", "--gamma", "1", "--N", "21", "--output", str(root))
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert len(names) == 2 and all(n.startswith("rho_gamma") for n in names)


@pytest.mark.parametrize("value,ok", [("", True), ("3", True), ("0", False), ("x", False)])
def test_thread_variable(monkeypatch, value, ok):
    monkeypatch.setenv("TRIDIAG_SPECTRA_THREADS", value)
    if ok:
        assert cli.thread_count() >= 1
    else:
        with pytest.raises(cli.UsageError):
            cli.thread_count()


def test_threads_do_not_change_output(capsys, tmp_path, monkeypatch):
    argv = ["density", "--case", "hulthen1", "--mu", "1", "--nu", "1.5", "--gamma", "0.2",
            "--gamma", "5", "--N", "21"]
    outputs = []
    for threads in ("1", "2"):
        monkeypatch.setenv("TRIDIAG_SPECTRA_THREADS", threads)
        d = tmp_path / threads
        d.mkdir()
        assert cli.run(argv + ["--output", str(d / "r.csv")]) == 0
        outputs.append([p.read_text() for p in sorted(d.iterdir())])
    assert outputs[0] == outputs[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tridiag_spectra", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip().endswith(cli.__version__)
