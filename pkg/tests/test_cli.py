"""Command dispatch, artifacts, heatmaps, determinism."""

import json
import math

import numpy as np
import pytest

from abcsir import DomainError, Field, Grid2D
from abcsir.cli import field_to_csv, render_heatmap, run_command


def _small_scenario(tmp_path, out_name, **over):
    doc = {
        "grid": {"nx": 5, "ny": 4, "h": 1.0},
        "time": {"t_final": 2.0, "tau": 0.02},
        "alpha": 0.95,
        "params": {"beta": 0.02},
        "outputs": {"snapshot_times": [1.0, 2.0], "directory": str(tmp_path / out_name)},
        "fbs": {"max_iter": 25},
    }
    doc.update(over)
    path = tmp_path / f"{out_name}.json"
    path.write_text(json.dumps(doc))
    return path, tmp_path / out_name


# ------------------------------------------------------------- heatmaps

def test_heatmap_extremes_and_rounding():
    g = Grid2D(1, 1, 1.0)
    lo_img = render_heatmap(Field.full(g, 0.0), 0.0, 1.0)
    hi_img = render_heatmap(Field.full(g, 1.0), 0.0, 1.0)
    mid_img = render_heatmap(Field.full(g, 0.5), 0.0, 1.0)
    assert lo_img == b"P2\n1 1\n255\n0\n"
    assert hi_img == b"P2\n1 1\n255\n255\n"
    # 0.5 * 255 = 127.5 rounds half up
    assert mid_img == b"P2\n1 1\n255\n128\n"


def test_heatmap_clamps_and_orients():
    g = Grid2D(2, 2, 1.0)
    # lower-left cell is brightest; it must land on the last PGM row
    v = np.array([[9.0, -5.0], [0.0, 2.0]])
    img = render_heatmap(Field(g, v), 0.0, 4.0).decode().splitlines()
    assert img[0] == "P2" and img[1] == "2 2" and img[2] == "255"
    assert img[3] == "0 128"     # top row: values 0.0, 2.0
    assert img[4] == "255 0"     # bottom row: 9.0 clamps, -5.0 clamps


def test_heatmap_degenerate_range():
    g = Grid2D(1, 1, 1.0)
    with pytest.raises(DomainError):
        render_heatmap(Field.full(g, 1.0), 2.0, 2.0)


def test_field_csv_row_per_grid_row():
    g = Grid2D(3, 2, 1.0)
    v = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
    text = field_to_csv(Field(g, v))
    assert text.splitlines() == ["4.0,5.0,6.0", "1.0,2.0,3.0"]


# ------------------------------------------------------------ commands

def test_ml_eval(capsys):
    assert run_command(["ml-eval", "--alpha", "1", "--xi", "1", "--z", "1"]) == 0
    out = capsys.readouterr().out.strip()
    assert abs(float(out) - math.e) <= 1e-12


def test_unknown_flag_is_an_error():
    assert run_command(["simulate", "--does-not-exist"]) != 0


def test_unreadable_config_reports_error(capsys):
    rc = run_command(["simulate", "--config", "/nonexistent/cfg.json"])
    assert rc == 2
    err = capsys.readouterr().err
    assert "error" in err


def test_simulate_writes_artifacts(tmp_path):
    cfg_path, out_dir = _small_scenario(tmp_path, "sim")
    assert run_command(["simulate", "--config", str(cfg_path)]) == 0
    names = sorted(p.name for p in out_dir.iterdir())
    assert "summary.json" in names and "timeseries.csv" in names
    for compartment in ("S", "I", "R"):
        assert f"{compartment}_t2.pgm" in names
        assert f"{compartment}_t2.csv" in names
    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["status"] == "ok"
    assert summary["command"] == "simulate"
    assert {"alpha", "j_total", "j_infection", "j_terminal", "j_control",
            "iterations", "converged", "wall_clock_seconds",
            "config"} <= set(summary)
    header = (out_dir / "timeseries.csv").read_text().splitlines()[0]
    assert header == "t,total_S,total_I,total_R,max_I,J_running"


def test_simulate_alpha_override_maps_one(tmp_path):
    cfg_path, out_dir = _small_scenario(tmp_path, "simone")
    assert run_command(["simulate", "--config", str(cfg_path), "--alpha", "1.0"]) == 0
    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["alpha"] == 0.999
    assert summary["alpha_requested"] == 1.0
    assert "mapped" in summary["alpha_note"]


def test_optimize_writes_report_and_control(tmp_path):
    cfg_path, out_dir = _small_scenario(tmp_path, "opt")
    assert run_command(["optimize", "--config", str(cfg_path)]) == 0
    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["converged"] in (True, False)
    assert summary["iterations"] >= 1
    assert summary["j_total"] < summary["j_uncontrolled"]
    assert (out_dir / "u_t2.pgm").exists()
    assert summary["sweep"]["j_history"]


def test_failed_run_still_writes_summary(tmp_path):
    # fractional stiffness far above one: the guard rejects the march
    cfg_path, out_dir = _small_scenario(tmp_path, "fail", alpha=0.9,
                                        params={"beta": 0.9})
    rc = run_command(["optimize", "--config", str(cfg_path)])
    assert rc == 3
    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["status"] == "failed"
    assert "error" in summary


def test_optimize_determinism_modulo_wall_clock(tmp_path):
    cfg_path_a, out_a = _small_scenario(tmp_path, "det_a")
    cfg_path_b, out_b = _small_scenario(tmp_path, "det_b")
    assert run_command(["optimize", "--config", str(cfg_path_a)]) == 0
    assert run_command(["optimize", "--config", str(cfg_path_b)]) == 0
    a = json.loads((out_a / "summary.json").read_text())
    b = json.loads((out_b / "summary.json").read_text())
    a.pop("wall_clock_seconds")
    b.pop("wall_clock_seconds")
    a["config"]["outputs"].pop("directory")
    b["config"]["outputs"].pop("directory")
    assert a == b
    assert (out_a / "timeseries.csv").read_bytes() == (out_b / "timeseries.csv").read_bytes()
    assert (out_a / "u_t2.pgm").read_bytes() == (out_b / "u_t2.pgm").read_bytes()


def test_gradient_check_command(capsys):
    rc = run_command(["gradient-check", "--directions", "2"])
    out = json.loads(capsys.readouterr().out)
    assert rc == 0
    assert out["passed"] is True
    assert out["max_relative_error"] <= 0.05


def test_optimize_dump_adjoint_flag(tmp_path):
    cfg_path, out_dir = _small_scenario(tmp_path, "adjdump")
    assert run_command(["optimize", "--config", str(cfg_path), "--dump-adjoint"]) == 0
    assert (out_dir / "p2_t2.csv").exists()
    assert (out_dir / "p1_t2.csv").exists()
