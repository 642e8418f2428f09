"""Command-line behavior: files, formats, exit codes, option precedence."""

import json
import xml.dom.minidom

import numpy as np
import pytest

from qspline import cli
from qspline.report import CSV_HEADER, format_number


def test_number_format_uses_twelve_significant_digits():
    assert format_number(1.0 / 3.0) == "0.333333333333"
    assert format_number(1.0) == "1"
    assert format_number(-2.5e-13) == "-2.5e-13"


def test_fit_writes_schema_exact_csv(tmp_path):
    rc = cli.main(["fit", "--function", "sin", "--knots", "4",
                   "--out", str(tmp_path)])
    assert rc == 0
    csv_path = tmp_path / "fit_sin_K4_seed42.csv"
    lines = csv_path.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert CSV_HEADER == "x,y_target,y_estimate"
    assert len(lines) == 5  # header + one row per knot
    for line in lines[1:]:
        assert len(line.split(",")) == 3


def test_fit_is_deterministic(tmp_path):
    a_dir, b_dir = tmp_path / "a", tmp_path / "b"
    assert cli.main(["fit", "--function", "relu", "--knots", "8",
                     "--out", str(a_dir)]) == 0
    assert cli.main(["fit", "--function", "relu", "--knots", "8",
                     "--out", str(b_dir)]) == 0
    a = (a_dir / "fit_relu_K8_seed42.csv").read_bytes()
    b = (b_dir / "fit_relu_K8_seed42.csv").read_bytes()
    assert a == b


def test_fit_report_sidecar_replays_configuration(tmp_path):
    rc = cli.main(["fit", "--function", "elu", "--knots", "4", "--seed", "3",
                   "--out", str(tmp_path)])
    assert rc == 0
    payload = json.loads((tmp_path / "fit_elu_K4_seed3.json").read_text())
    assert payload["seed"] == 3
    assert payload["ansatz"]["kind"] == "tree"
    assert payload["optimizer"]["restarts"] == 5
    est = np.array(payload["y_estimate"])
    tgt = np.array(payload["y_target"])
    recomputed = float(np.sqrt(np.mean((est - tgt) ** 2)) / (tgt.max() - tgt.min()))
    assert recomputed == pytest.approx(payload["nrmse"], abs=1e-12)


def test_fit_svg_is_well_formed(tmp_path):
    rc = cli.main(["fit", "--function", "sigmoid", "--knots", "4", "--svg",
                   "--out", str(tmp_path)])
    assert rc == 0
    doc = xml.dom.minidom.parse(str(tmp_path / "fit_sigmoid_K4_seed42.svg"))
    assert doc.documentElement.tagName == "svg"
    assert len(doc.getElementsByTagName("polyline")) == 1
    assert len(doc.getElementsByTagName("circle")) == 5  # 4 points + legend marker


def test_fit_classical_only_hits_the_floor(tmp_path, capsys):
    rc = cli.main(["fit", "--function", "sigmoid", "--knots", "16",
                   "--classical-only", "--out", str(tmp_path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "mode=classical" in out


def test_shots_mode_runs_quickly_on_the_smallest_grid(tmp_path):
    rc = cli.main(["fit", "--function", "sin", "--knots", "2", "--mode", "shots",
                   "--shots", "400", "--restarts", "1", "--max-iter", "15",
                   "--out", str(tmp_path)])
    assert rc in (0, 2)
    lines = (tmp_path / "fit_sin_K2_seed42.csv").read_text().splitlines()
    assert len(lines) == 3


def test_missing_function_is_a_usage_error(tmp_path, capsys):
    rc = cli.main(["fit", "--out", str(tmp_path)])
    assert rc == 1
    assert "usage" in capsys.readouterr().err


def test_bad_knot_count_is_a_usage_error(tmp_path):
    assert cli.main(["fit", "--function", "sin", "--knots", "13",
                     "--out", str(tmp_path)]) == 1
    assert cli.main(["fit", "--function", "sin", "--knots", "128",
                     "--out", str(tmp_path)]) == 1


def test_unwritable_output_is_an_io_error(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    rc = cli.main(["fit", "--function", "sin", "--knots", "2",
                   "--out", str(blocker / "sub")])
    assert rc == 3


def test_seed_falls_back_to_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("QSPLINE_SEED", "99")
    rc = cli.main(["fit", "--function", "sin", "--knots", "4", "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "fit_sin_K4_seed99.csv").exists()


def test_flag_beats_config_beats_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("QSPLINE_SEED", "99")
    cfg = tmp_path / "run.cfg"
    cfg.write_text("function=sin\nknots=4\nseed=7  # inline comment\n")
    rc = cli.main(["fit", "--config", str(cfg), "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "fit_sin_K4_seed7.csv").exists()
    rc = cli.main(["fit", "--config", str(cfg), "--seed", "5", "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "fit_sin_K4_seed5.csv").exists()


def test_malformed_config_is_a_usage_error(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("function sin\n")
    assert cli.main(["fit", "--config", str(cfg), "--out", str(tmp_path)]) == 1
    cfg.write_text("knottts=4\n")
    assert cli.main(["fit", "--function", "sin", "--config", str(cfg),
                     "--out", str(tmp_path)]) == 1


def test_bench_classical_only_table_and_summary(tmp_path, capsys):
    rc = cli.main(["bench", "--classical-only", "--out", str(tmp_path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "Model" in out and "Sigmoid" in out
    assert "0.4874" in out and "0.5240" in out and "0.1589" in out
    summary = (tmp_path / "bench_K16_seed42.csv").read_text().splitlines()
    assert summary[0] == "model,knots,elu,relu,sigmoid,sin"
    classical = summary[2].split(",")
    assert classical[0] == "classical"
    assert all(float(v) < 1e-10 for v in classical[2:])


def test_decompose_block_prints_terms_and_error(capsys):
    rc = cli.main(["decompose", "--block", "0.5", "0.3"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "I" in out and "X" in out and "Z" in out and "Ry(3pi)" in out
    assert "0.6" in out and "0.25" in out and "-0.1" in out
    assert "terms: 4" in out
    assert "max reconstruction error" in out


def test_decompose_function_matrix(capsys):
    rc = cli.main(["decompose", "--function", "sigmoid", "--knots", "4"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "terms: 12" in out


def test_decompose_requires_one_source(capsys):
    assert cli.main(["decompose"]) == 1
    assert cli.main(["decompose", "--block", "0.1", "0.2",
                     "--function", "sin"]) == 1


def test_unknown_command_is_a_usage_error():
    assert cli.main(["transmogrify"]) == 1
