"""Persistence-baseline report over an OMNI-derived table.

Runs the standard protocol (monthly split, 6 h input window, 6 h horizon)
and emits the persistence metric table, its shift histogram, the
persistence table for the differenced index, and 10-fold CV spread. Each
quantity with a published reference value gets a pass/fail check.

Checks come in two kinds. ``structural`` checks hold for any index-like
series (persistence is detected at its own horizon, persistence on the
differenced index has no skill). ``reference`` checks compare against the
published 2001-2016 numbers and are only meaningful on that data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .crossval import run_cv
from .forecasters import PersistenceForecaster, with_delta_dst
from .ingest import SplitSpec, month_frames, read_table, split_by_month, window_arrays
from .metrics import FIELDS, evaluate_table
from .timeseries import ForecastTable
from .warpmeasure import measure_all

# Published persistence values for 2001-2016 (test months Apr/Aug/Dec).
REFERENCE = {
    "rows": 139_944,
    "windows": {"train": 74_117, "valid": 19_596, "test": 32_166},
    "cv_rmse_mean": [4.75, 6.85, 9.00, 9.91, 10.94, 11.86],
    "cv_rmse_std": [0.47, 0.85, 1.10, 1.39, 1.56, 1.74],
    "cv_r_mean": [0.974, 0.934, 0.895, 0.860, 0.829, 0.799],
    "cv_r_std": [0.003, 0.009, 0.015, 0.019, 0.023, 0.026],
    "shift_fraction": [0.997, 0.994, 0.991, 0.988, 0.984, 0.981],
}


@dataclass(frozen=True)
class Check:
    name: str
    kind: str
    value: float
    expected: str
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "kind": self.kind, "value": self.value,
                "expected": self.expected, "passed": self.passed}


def _within(name, value, centre, tol) -> Check:
    return Check(name, "reference", float(value), f"{centre} +/- {tol:.4g}", bool(abs(value - centre) <= tol))


def _persistence_table(frames, target="dst") -> ForecastTable:
    model = PersistenceForecaster(target=target)
    tables = [model.forecast(f) for f in frames]
    return ForecastTable.concatenate([t for t in tables if len(t)])


def build_report(data_path, out_dir=None, seed: int = 0, folds: int = 10, config: dict | None = None) -> dict:
    """Build the report; writes ``report.json``/``report.md`` and CSV tables when ``out_dir`` is given."""
    frame = read_table(data_path)
    spec = SplitSpec(rng_seed=seed)
    split = split_by_month(frame, spec)

    windows = {name: sum(len(window_arrays(f)) for f in parts) for name, parts in zip(split._fields, split)}
    table = _persistence_table(split.test)
    metrics = evaluate_table(table)
    warp = measure_all(table)

    dframe = with_delta_dst(frame)
    dsplit = split_by_month(dframe, spec)
    dmetrics = evaluate_table(_persistence_table(dsplit.test, "delta_dst"))

    months = month_frames(frame)
    cv = None
    if len([k for k in months if k % 12 + 1 not in spec.test_months]) >= folds:
        cv = run_cv(frame, PersistenceForecaster(), folds, seed)

    checks = []
    for row in warp:
        checks.append(Check(f"shift histogram t+{row.horizon}h peaks at {row.horizon}h", "structural",
                            float(row.dominant_shift), str(row.horizon), bool(row.dominant_shift == row.horizon)))
    for h, m in enumerate(dmetrics, start=1):
        checks.append(Check(f"delta-Dst persistence PE t+{h}h < 0", "structural", m.pe, "< 0", bool(m.pe < 0)))

    ref = REFERENCE
    for h, m in enumerate(metrics, start=1):
        checks.append(_within(f"persistence RMSE t+{h}h", m.rmse, ref["cv_rmse_mean"][h - 1],
                              3 * ref["cv_rmse_std"][h - 1]))
        checks.append(_within(f"persistence R t+{h}h", m.r, ref["cv_r_mean"][h - 1], 3 * ref["cv_r_std"][h - 1]))
    for name, n in windows.items():
        target = ref["windows"][name]
        checks.append(_within(f"{name} window count", n, target, 0.01 * target))
    checks.append(_within("shift fraction t+6h at 6h", warp[6].fractions[6], ref["shift_fraction"][5], 0.005))
    if cv is not None:
        checks.append(_within("CV persistence RMSE t+1h", cv.mean["rmse"][0], ref["cv_rmse_mean"][0],
                              3 * ref["cv_rmse_std"][0]))

    report = {
        "data": str(data_path),
        "rows": len(frame),
        "split": spec.to_dict(),
        "windows": windows,
        "persistence": [m.to_dict() for m in metrics],
        "warp_measure": warp.to_dict(),
        "delta_dst_persistence": [m.to_dict() for m in dmetrics],
        "cv": None if cv is None else {"k": cv.k, "seed": cv.seed, "mean": cv.mean, "std": cv.std},
        "checks": [c.to_dict() for c in checks],
        "structural_pass": all(c.passed for c in checks if c.kind == "structural"),
        "reference_pass": all(c.passed for c in checks if c.kind == "reference"),
    }
    if config is not None:
        report = {"config": config, **report}
    if out_dir is not None:
        _write(report, metrics, dmetrics, warp, Path(out_dir))
    return report


def _metric_markdown(title, reports) -> list[str]:
    lines = [f"### {title}", "", "| horizon | " + " | ".join(FIELDS) + " | n |", "|---" * (len(FIELDS) + 2) + "|"]
    for h, m in enumerate(reports, start=1):
        lines.append(f"| t+{h}h | " + " | ".join(f"{getattr(m, f):.3f}" for f in FIELDS) + f" | {m.n} |")
    return lines + [""]


def _metric_csv(reports) -> str:
    out = ["horizon," + ",".join(FIELDS) + ",n"]
    for h, m in enumerate(reports, start=1):
        out.append(f"{h}," + ",".join(repr(getattr(m, f)) for f in FIELDS) + f",{m.n}")
    return "\n".join(out) + "\n"


def _write(report, metrics, dmetrics, warp, out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    (out_dir / "persistence_metrics.csv").write_text(_metric_csv(metrics))
    (out_dir / "delta_dst_persistence_metrics.csv").write_text(_metric_csv(dmetrics))
    (out_dir / "persistence_warp.csv").write_text(warp.to_csv())
    lines = ["# Persistence baseline report", "", f"data: `{report['data']}`, rows: {report['rows']}", ""]
    lines += _metric_markdown("Persistence, Dst", metrics)
    lines += ["### Shift histogram, persistence", "", warp.to_markdown()]
    lines += _metric_markdown("Persistence, delta-Dst", dmetrics)
    lines += ["### Checks", "", "| check | kind | value | expected | result |", "|---|---|---|---|---|"]
    for c in report["checks"]:
        lines.append(f"| {c['name']} | {c['kind']} | {c['value']:.4g} | {c['expected']} | "
                     f"{'PASS' if c['passed'] else 'FAIL'} |")
    (out_dir / "report.md").write_text("\n".join(lines) + "\n")
