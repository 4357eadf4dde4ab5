import json
import shutil

import numpy as np
import pytest

from dstwarp.cli import run
from dstwarp.io import read_config


@pytest.fixture(scope="module")
def pipeline(synthetic_csv, tmp_path_factory):
    out = tmp_path_factory.mktemp("cli")
    clean = out / "clean.csv"
    assert run(["ingest", "--input", str(synthetic_csv), "--out", str(clean), "--summary", str(out / "s.json")]) == 0
    assert run(["forecast", "--input", str(clean), "--out", str(out / "pred.csv"),
                "--obs-out", str(out / "obs.csv"), "--seed", "3"]) == 0
    return out


def test_ingest_summary(pipeline):
    summary = json.loads((pipeline / "s.json").read_text())
    assert summary["rows"] == 2 * 8760
    assert summary["valid_counts"]["dst"] == 2 * 8760
    assert summary["valid_counts"]["v_sw"] < 2 * 8760
    assert summary["config"]["command"] == "ingest"


def test_forecast_files_carry_config(pipeline):
    cfg = read_config(pipeline / "pred.csv")
    assert cfg["seed"] == 3 and cfg["model"] == "persistence"
    assert "out" not in cfg


def test_evaluate_and_warp_round_trip(pipeline, capsys):
    pred, obs = str(pipeline / "pred.csv"), str(pipeline / "obs.csv")
    assert run(["evaluate", "--pred", pred, "--obs", obs, "--format", "json"]) == 0
    horizons = json.loads(capsys.readouterr().out)["horizons"]
    assert [h["horizon"] for h in horizons] == list(range(1, 7))
    assert horizons[0]["rmse"] < horizons[-1]["rmse"]

    assert run(["warp-measure", "--pred", pred, "--obs", obs, "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)["horizons"]
    assert [r["dominant_shift"] for r in rows] == list(range(1, 7))

    svg = pipeline / "warp.svg"
    assert run(["warp-measure", "--pred", pred, "--obs", obs, "--format", "svg", "--out", str(svg)]) == 0
    first = svg.read_bytes()
    assert run(["warp-measure", "--pred", pred, "--obs", obs, "--format", "svg", "--out", str(svg)]) == 0
    assert svg.read_bytes() == first and first.startswith(b"<?xml")


def test_evaluate_perfect_forecast(tmp_path, capsys):
    obs = tmp_path / "obs.csv"
    pred = tmp_path / "pred.csv"
    values = [-5, -9, -30, -12, -7, -3]
    obs.write_text("timestamp,value\n" + "".join(f"2001-01-01T{k:02d}:00:00,{v}\n" for k, v in enumerate(values)))
    pred.write_text("origin,h1\n" + "".join(f"2001-01-01T{k:02d}:00:00,{v}\n" for k, v in enumerate(values[1:])))
    assert run(["evaluate", "--pred", str(pred), "--obs", str(obs), "--format", "json"]) == 0
    row = json.loads(capsys.readouterr().out)["horizons"][0]
    assert row["rmse"] == 0 and row["r"] == 1 and row["pe"] == 1 and row["n"] == 5


def test_exit_codes(tmp_path, capsys):
    assert run([]) == 1
    assert run(["forecast", "--input"]) == 1
    assert run(["evaluate", "--pred", "x.csv", "--obs", "y.csv", "--format", "xml"]) == 1
    assert run(["ingest", "--input", str(tmp_path / "none.csv"), "--out", str(tmp_path / "o.csv")]) == 2
    bad = tmp_path / "bad.csv"
    bad.write_text("timestamp,value\n2001-01-01T00,oops\n")
    assert run(["stats", "acf", "--input", str(bad)]) == 2

    flat = tmp_path / "flat.csv"
    flat.write_text("timestamp,value\n" + "".join(f"2001-01-01T{k:02d}:00:00,-4\n" for k in range(10)))
    pred = tmp_path / "pred.csv"
    pred.write_text("origin,h1\n" + "".join(f"2001-01-01T{k:02d}:00:00,{k}\n" for k in range(9)))
    assert run(["evaluate", "--pred", str(pred), "--obs", str(flat)]) == 3
    assert run(["stats", "pacf", "--input", str(flat), "--max-lag", "3"]) == 3
    assert "numerical error" in capsys.readouterr().err


def test_stats_outputs(pipeline, capsys):
    obs = str(pipeline / "obs.csv")
    assert run(["stats", "pacf", "--input", obs, "--max-lag", "5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("# config: ") and lines[1] == "lag,value,n_pairs"
    values = [float(line.split(",")[1]) for line in lines[2:]]
    assert len(values) == 6 and values[0] == 1.0 and values[1] > 0.8

    assert run(["stats", "acf", "--input", obs, "--delta", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["config"]["delta"] is True and len(data["rows"]) == 16

    assert run(["stats", "lag", "--input", obs, "--lag", "2", "--format", "json"]) == 0
    pairs = np.array(json.loads(capsys.readouterr().out)["pairs"])
    assert pairs.shape[1] == 2

    svg = pipeline / "acf.svg"
    assert run(["stats", "acf", "--input", obs, "--format", "svg", "--out", str(svg)]) == 0
    assert svg.read_bytes().startswith(b"<?xml")
    assert run(["stats", "acf", "--input", obs, "--format", "svg"]) == 1


def test_split_bundle(pipeline):
    out = pipeline / "bundle"
    assert run(["split", "--input", str(pipeline / "clean.csv"), "--out", str(out), "--seed", "1"]) == 0
    assert (out / "train.csv").exists() and (out / "test.csv").exists()


def test_cv_command(pipeline, capsys):
    clean = str(pipeline / "clean.csv")
    assert run(["cv", "--input", clean, "--folds", "3", "--model", "ar", "--horizons", "2"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["k"] == 3 and data["config"]["folds"] == 3
    assert all(v > 0.5 for v in data["mean"]["pe"])
    assert run(["cv", "--input", clean, "--folds", "30"]) == 2


def test_data_dir_env(pipeline, monkeypatch, capsys):
    monkeypatch.setenv("DSTWARP_DATA_DIR", str(pipeline))
    monkeypatch.chdir(pipeline.parent)
    assert run(["stats", "acf", "--input", "obs.csv", "--max-lag", "2"]) == 0
    assert capsys.readouterr().out.count("\n") == 5


def test_report_skips_without_data(tmp_path, monkeypatch, capsys):
    monkeypatch.delenv("DSTWARP_DATA_DIR", raising=False)
    assert run(["report"]) == 0
    assert "skipped" in capsys.readouterr().err
    monkeypatch.setenv("DSTWARP_DATA_DIR", str(tmp_path))
    assert run(["report"]) == 0
    assert "skipped" in capsys.readouterr().err


def test_report_on_synthetic_data(synthetic_csv, tmp_path, monkeypatch, capsys):
    shutil.copy(synthetic_csv, tmp_path / "omni_2001_2016.csv")
    monkeypatch.setenv("DSTWARP_DATA_DIR", str(tmp_path))
    out = tmp_path / "report"
    assert run(["report", "--out", str(out), "--folds", "3"]) == 0
    data = json.loads((out / "report.json").read_text())
    assert data["structural_pass"] is True
    assert "[structural]" in capsys.readouterr().out
