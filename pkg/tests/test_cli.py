import csv
import io
import json
import subprocess
import sys

import pytest

from hermitime.cli import EXIT_FAILED, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main
from hermitime.config import EXPERIMENTS


def test_list(capsys):
    assert main(["list"]) == EXIT_OK
    out = capsys.readouterr().out
    for name, info in EXPERIMENTS.items():
        assert name in out and info.equations in out


def test_run_csv_to_stdout(capsys):
    assert main(["run", "--experiment", "massless"]) == EXIT_OK
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["quantity", "computed", "reference", "residual", "tolerance", "pass"]
    assert all(r[-1] == "true" for r in rows[1:])


def test_run_with_config_file_and_override(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("experiment=correspondence\n[grid]\nn=256\n", encoding="utf-8")
    out = tmp_path / "r.json"
    assert main(["run", "-c", str(cfg), "--set", "n=512", "--format", "json", "--out", str(out)]) == EXIT_OK
    d = json.loads(out.read_text(encoding="utf-8"))
    assert d["inputs"]["n"] == 512 and d["pass"] is True


def test_config_error_exit_code(capsys):
    assert main(["run", "--experiment", "massless", "--set", "m=2"]) == EXIT_USAGE
    assert "m=0" in capsys.readouterr().err
    assert main(["run", "--set", "n=5"]) == EXIT_USAGE
    assert main(["run", "--experiment", "massless", "--set", "oops"]) == EXIT_USAGE


def test_missing_config_file(tmp_path):
    assert main(["run", "-c", str(tmp_path / "nope.cfg")]) == EXIT_USAGE


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE


def test_criterion_failure_exit_code(capsys):
    # an order tolerance tighter than the observed deviation must fail
    code = main(["run", "-e", "correspondence", "--set", "tol.order=1e-6"])
    assert code == EXIT_FAILED
    assert "FAIL convergence_order" in capsys.readouterr().err


def test_runtime_error_exit_code(capsys):
    # the Hermite functions cannot decay inside [-2, 2]
    code = main(["run", "-e", "oscillator_expectation", "--set", "a=-2", "--set", "b=2", "--set", "n=64"])
    assert code == EXIT_NUMERIC
    captured = capsys.readouterr()
    assert "InsufficientDomainError" in captured.err


def test_unwritable_output(tmp_path):
    assert main(["run", "-e", "jump_time", "--out", str(tmp_path / "no" / "x.csv")]) == EXIT_NUMERIC


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hermitime", "run", "-e", "jump_time"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("quantity,computed,reference,residual,tolerance,pass\n")
