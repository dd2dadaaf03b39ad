import io
import json

import numpy as np
import pytest

from conjugate_reversibility import __version__
from conjugate_reversibility.cli import build_parser, collect_overrides, main
from conjugate_reversibility.exceptions import InvalidToleranceError
from conjugate_reversibility.matrix_io import matrix_to_json
from conjugate_reversibility.utils import configure_logging


@pytest.fixture
def loxo(tmp_path):
    path = tmp_path / "loxo.json"
    path.write_text(matrix_to_json(np.diag([2.0, 0.5])))
    return str(path)


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_no_command(capsys):
    assert main([]) == 2
    assert "usage" in capsys.readouterr().err


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_list_presets(capsys):
    assert main(["--list-presets"]) == 0
    assert {"default", "strict", "loose"} <= set(_json(capsys))


def test_bad_log_level(capsys):
    assert main(["--log-level", "chatty", "analyze", "-i", "x.json"]) == 2
    assert "error:" in capsys.readouterr().err


def test_analyze_json(loxo, capsys):
    assert main(["analyze", "-i", loxo]) == 0
    doc = _json(capsys)
    assert doc["pairing_verdict"] is True
    assert doc["witness"]["accepted"] is True
    assert doc["request"]["source"] == "loxo.json"


def test_analyze_text(loxo, capsys):
    assert main(["analyze", "-i", loxo, "--output", "text"]) == 0
    assert "c-reversible: yes (strong)" in capsys.readouterr().out


def test_classify_has_no_witness(loxo, capsys):
    assert main(["classify", "-i", loxo]) == 0
    doc = _json(capsys)
    assert doc["witness"] is None
    assert doc["classification"]["dynamical_type"]


def test_reverser(loxo, capsys):
    assert main(["reverser", "-i", loxo]) == 0
    doc = _json(capsys)
    assert doc["witness"]["accepted"] is True
    assert doc["classification"] is None


def test_tolerance_flags(loxo, capsys):
    assert main(["analyze", "-i", loxo, "--tol-unit", "1e-6", "--tol", "witness_tol=1e-5"]) == 0
    tolerances = _json(capsys)["tolerances"]
    assert tolerances["unit_tol"] == 1e-6
    assert tolerances["witness_tol"] == 1e-5


def test_collect_overrides_rejects_malformed():
    args = build_parser().parse_args(["analyze", "--tol", "unit_tol"])
    with pytest.raises(InvalidToleranceError):
        collect_overrides(args)
    args = build_parser().parse_args(["analyze", "--tol", "unit_tol=small"])
    with pytest.raises(InvalidToleranceError):
        collect_overrides(args)


def test_unknown_tolerance_name(loxo, capsys):
    assert main(["analyze", "-i", loxo, "--tol", "fuzz=1"]) == 2
    assert "error:" in capsys.readouterr().err


def test_unknown_preset(loxo, capsys):
    assert main(["analyze", "-i", loxo, "--preset", "exact"]) == 2


def test_missing_input(capsys):
    assert main(["analyze"]) == 2
    assert "-i/--input" in capsys.readouterr().err


def test_not_special_linear(tmp_path, capsys):
    path = tmp_path / "scaled.json"
    path.write_text(matrix_to_json(np.diag([2.0, 1.0])))
    assert main(["analyze", "-i", str(path)]) == 3
    assert _json(capsys)["error"]["stage"] == "input"
    assert main(["analyze", "-i", str(path), "--no-sl-check"]) == 0


def test_csv_input(tmp_path, capsys):
    path = tmp_path / "rotation.csv"
    path.write_text("0,1,0,0\n0,0,0,-1\n")
    assert main(["analyze", "-i", str(path)]) == 0
    assert _json(capsys)["pairing_verdict"] is True


def test_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(matrix_to_json(np.diag([2.0, 0.5]))))
    assert main(["classify", "-i", "-"]) == 0
    assert _json(capsys)["request"]["source"] == "<stdin>"


def test_sl4_needs_four_by_four(loxo, capsys):
    assert main(["sl4", "-i", loxo]) == 2
    assert "4 x 4" in capsys.readouterr().err


def test_sl4(tmp_path, capsys):
    path = tmp_path / "a3.json"
    path.write_text(matrix_to_json(np.diag([1.0, 1.0, 2.0, 0.5])))
    assert main(["sl4", "-i", str(path)]) == 0
    doc = _json(capsys)
    assert doc["sl4"]["verdict"] is True
    assert doc["sl4_path"][0] == "c-reciprocal-check: pass"


def test_verify(loxo, tmp_path, capsys):
    h = tmp_path / "h.json"
    h.write_text(matrix_to_json(1j * np.array([[0, 1], [1, 0]])))
    assert main(["verify", "-i", loxo, "--reverser", str(h)]) == 0
    doc = _json(capsys)
    assert doc["witness"]["accepted"] is True
    assert doc["relation"] == "reverses"


def test_verify_dimension_mismatch(loxo, tmp_path, capsys):
    h = tmp_path / "h.json"
    h.write_text(matrix_to_json(np.eye(3)))
    assert main(["verify", "-i", loxo, "--reverser", str(h)]) == 2


def test_batch(loxo, tmp_path, capsys):
    (tmp_path / "scaled.json").write_text(matrix_to_json(np.diag([2.0, 1.0])))
    out = tmp_path / "out"
    code = main(["analyze", "--batch", str(tmp_path), "--output-dir", str(out), "--no-progress"])
    assert code == 3
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    assert lines[0].endswith("loxo.report.json")
    assert "exit 3" in lines[1]
    assert sorted(p.name for p in out.iterdir()) == ["loxo.report.json", "scaled.report.json"]


def test_batch_without_bar_logs_each_item(loxo, tmp_path, capsys):
    log_file = tmp_path / "batch.log"
    try:
        code = main(
            ["--log-level", "INFO", "--log-file", str(log_file)]
            + ["analyze", "--batch", str(tmp_path), "--no-progress"]
        )
    finally:
        configure_logging("WARNING")
    assert code == 0
    assert "[1/1] loxo.json: exit 0" in log_file.read_text()


@pytest.mark.slow
def test_selftest(capsys):
    assert main(["selftest", "--output", "json"]) == 0
    results = _json(capsys)
    assert all(r["passed"] for r in results)
