"""Report serialization: deterministic JSON plus flat CSVs.

Serialization is the trust boundary for results, so the text form is
fully deterministic (sorted keys, round-trip float repr, no timestamps)
and the stored aggregates are recomputed from the per-query records
right before writing. Files land under a .partial name and are renamed
into place only once complete, so an interrupted run never leaves a
plausible-looking report behind.
"""
from __future__ import annotations

import csv
import io
import json
import os
from pathlib import Path

from .errors import ConfigError
from .labels import LabelSpace
from .metrics import accuracy, macro_f1
from .runner import PilotReport, RunReport


def format_metric(value: float) -> str:
    return f"{value:.4f}"


def atomic_write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    partial = path.with_name(path.name + ".partial")
    partial.write_text(text, encoding="utf-8")
    os.replace(partial, path)
    return path


def run_report_to_dict(report: RunReport) -> dict:
    return {
        "accuracy": report.accuracy,
        "aligned_labels": list(report.aligned_labels),
        "config": report.config,
        "failure_count": report.failure_count,
        "macro_f1": report.macro_f1,
        "per_class": [
            {
                "f1": s.f1,
                "false_negative": s.false_negative,
                "false_positive": s.false_positive,
                "label": s.label,
                "precision": s.precision,
                "recall": s.recall,
                "support": s.support,
                "true_positive": s.true_positive,
            }
            for s in report.per_class
        ],
        "records": [
            {
                "demos": [[sid, score] for sid, score in r.demos],
                "failure": r.failure,
                "gold": r.gold,
                "impossible": list(r.impossible),
                "possible": list(r.possible),
                "prediction": r.prediction,
                "query_id": r.query_id,
                "raw_response": r.raw_response,
                "soft_labels": [[[label, w] for label, w in entries]
                                for entries in r.soft_labels],
                "template_id": r.template_id,
            }
            for r in report.records
        ],
        "unparseable_count": report.unparseable_count,
    }


def serialize_run_report(report: RunReport) -> str:
    golds = [r.gold for r in report.records]
    preds = [r.prediction for r in report.records]
    space = LabelSpace.from_raw(report.aligned_labels, name="report")
    assert report.accuracy == accuracy(golds, preds), \
        "stored accuracy does not recompute from records"
    assert report.macro_f1 == macro_f1(space, golds, preds), \
        "stored macro_f1 does not recompute from records"
    return json.dumps(run_report_to_dict(report), sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"


def predictions_csv(report: RunReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "gold", "prediction", "correct", "top_score"])
    for r in report.records:
        writer.writerow([
            r.query_id,
            r.gold,
            r.prediction if r.prediction is not None else "",
            1 if r.prediction == r.gold else 0,
            repr(r.demos[0][1]) if r.demos else "",
        ])
    return buf.getvalue()


def write_run_outputs(report: RunReport, output_dir: str | Path,
                      stem: str = "run") -> list[Path]:
    outdir = Path(output_dir)
    return [
        atomic_write_text(outdir / f"{stem}.json", serialize_run_report(report)),
        atomic_write_text(outdir / f"{stem}-predictions.csv", predictions_csv(report)),
    ]


def format_axis_value(value) -> str:
    return f"{value:g}"


def sweep_summary_csv(axis: str, pairs: list[tuple[float, RunReport]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["axis", "value", "accuracy", "macro_f1",
                     "unparseable_count", "failure_count"])
    for value, report in pairs:
        writer.writerow([
            axis,
            format_axis_value(value),
            format_metric(report.accuracy),
            format_metric(report.macro_f1),
            report.unparseable_count,
            report.failure_count,
        ])
    return buf.getvalue()


def write_sweep_outputs(axis: str, pairs: list[tuple[float, RunReport]],
                        output_dir: str | Path) -> list[Path]:
    outdir = Path(output_dir)
    written = []
    for value, report in pairs:
        stem = f"run-{axis}-{format_axis_value(value)}"
        written.extend(write_run_outputs(report, outdir, stem=stem))
    written.append(atomic_write_text(outdir / f"sweep-{axis}.csv",
                                     sweep_summary_csv(axis, pairs)))
    return written


def pilot_report_to_dict(report: PilotReport) -> dict:
    return {
        "accuracy": report.accuracy,
        "bins": [
            {"accuracy": b.accuracy, "count": b.count, "high": b.high, "low": b.low}
            for b in report.bins
        ],
        "config": report.config,
        "macro_f1": report.macro_f1,
        "total_queries": report.total_queries,
    }


def serialize_pilot_report(report: PilotReport) -> str:
    assert sum(b.count for b in report.bins) == report.total_queries, \
        "pilot bin counts do not sum to the query total"
    return json.dumps(pilot_report_to_dict(report), sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"


def pilot_bins_csv(report: PilotReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["bin", "low", "high", "count", "accuracy"])
    for i, b in enumerate(report.bins):
        writer.writerow([
            i,
            repr(b.low),
            repr(b.high),
            b.count,
            format_metric(b.accuracy) if b.accuracy is not None else "",
        ])
    return buf.getvalue()


def write_pilot_outputs(report: PilotReport, output_dir: str | Path) -> list[Path]:
    outdir = Path(output_dir)
    return [
        atomic_write_text(outdir / "pilot.json", serialize_pilot_report(report)),
        atomic_write_text(outdir / "pilot-bins.csv", pilot_bins_csv(report)),
    ]


def load_report_dict(path: str | Path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read report '{path}': {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"report '{path}' is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"report '{path}' does not hold a JSON object")
    return data
