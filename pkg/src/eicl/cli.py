"""Command-line entry point.

Commands: validate, run, sweep, pilot, report. Configuration comes from
a JSON file (--config) with individual flags overriding file values.
run/sweep/pilot write their outputs atomically into the output directory
and finish stdout with exactly two fixed-format lines:

    accuracy=<value>
    macro_f1=<value>

(for a sweep, the metrics of the last axis value). Exit codes: 0 on
success, 1 for configuration or input-validation failures, 2 for runtime
failures. Only live-provider runs ever touch the network.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import MODES, RunConfig, load_run_config
from .errors import ConfigError, CorpusError, EiclError, StoreError, TemplateError
from .figures import render_per_class_f1, render_pilot_bins, render_sweep_curve
from .reporting import (atomic_write_text, format_metric, load_report_dict,
                        pilot_report_to_dict, run_report_to_dict,
                        serialize_pilot_report, write_pilot_outputs,
                        write_run_outputs, write_sweep_outputs)
from .runner import (SWEEP_AXES, run_experiment, run_pilot, run_sweep,
                     validate_inputs)

_INPUT_ERRORS = (ConfigError, CorpusError, StoreError, TemplateError)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--corpus", help="corpus JSONL path")
    parser.add_argument("--labels", help="label-space sidecar path")
    parser.add_argument("--emotion-store", help="emotion vector store path")
    parser.add_argument("--semantic-store", help="semantic vector store path")
    parser.add_argument("--mode", help="one of: " + ", ".join(MODES))
    parser.add_argument("--alpha", type=float, help="soft-label fusion weight")
    parser.add_argument("--k1", type=int, help="demonstrations per query")
    parser.add_argument("--k2", type=int, help="predicted emotions per soft label")
    parser.add_argument("--k3", type=int, help="possible-candidate count")
    parser.add_argument("--template", help="prompt template id or .txt path")
    parser.add_argument("--seed", type=int, help="seed for any sampled choice")
    parser.add_argument("--output", help="output directory")
    parser.add_argument("--max-queries", type=int, help="cap on test queries")
    parser.add_argument("--provider", help="provider id (mock name or live adapter)")
    parser.add_argument("--endpoint", help="live endpoint URL")
    parser.add_argument("--model", help="model identifier sent to the endpoint")
    parser.add_argument("--auth-env", help="env var holding the API key")
    parser.add_argument("--script", help="response script for the scripted mock")


def _config_from(args: argparse.Namespace) -> RunConfig:
    provider = {
        "provider_id": args.provider,
        "endpoint_url": args.endpoint,
        "model_id": args.model,
        "auth_env_var": args.auth_env,
        "script_path": args.script,
    }
    provider = {k: v for k, v in provider.items() if v is not None}
    overrides = {
        "corpus_path": args.corpus,
        "labels_path": args.labels,
        "emotion_store_path": args.emotion_store,
        "semantic_store_path": args.semantic_store,
        "mode": args.mode,
        "alpha": args.alpha,
        "k1": args.k1,
        "k2": args.k2,
        "k3": args.k3,
        "template_id": args.template,
        "seed": args.seed,
        "output_dir": args.output,
        "max_queries": args.max_queries,
        "provider": provider or None,
        "pilot_bins": getattr(args, "bins", None),
        "pilot_sets": getattr(args, "sets", None),
        "pilot_set_size": getattr(args, "set_size", None),
    }
    return load_run_config(args.config, overrides)


def _print_metrics(acc: float, f1: float) -> None:
    print(f"accuracy={format_metric(acc)}")
    print(f"macro_f1={format_metric(f1)}")


def cmd_validate(args: argparse.Namespace) -> int:
    config = _config_from(args)
    findings = validate_inputs(config)
    if findings:
        for finding in findings:
            print(finding)
        return 1
    print("OK")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    config = _config_from(args)
    traces: list[str] = []
    report = run_experiment(config, trace_sink=traces)
    outdir = Path(config.output_dir)
    written = write_run_outputs(report, outdir)
    written.append(atomic_write_text(outdir / "run-trace.jsonl",
                                     "".join(line + "\n" for line in traces)))
    written.append(render_per_class_f1(run_report_to_dict(report), outdir))
    for path in written:
        print(path)
    _print_metrics(report.accuracy, report.macro_f1)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _config_from(args)
    cast = float if args.axis == "alpha" else int
    try:
        values = [cast(v) for v in args.values.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad sweep value list '{args.values}': {exc}") from None
    pairs = run_sweep(config, args.axis, values)
    outdir = Path(config.output_dir)
    written = write_sweep_outputs(args.axis, pairs, outdir)
    rows = [(value, report.accuracy, report.macro_f1) for value, report in pairs]
    written.append(render_sweep_curve(args.axis, rows, outdir))
    for path in written:
        print(path)
    last = pairs[-1][1]
    _print_metrics(last.accuracy, last.macro_f1)
    return 0


def cmd_pilot(args: argparse.Namespace) -> int:
    config = _config_from(args)
    traces: list[str] = []
    report = run_pilot(config, trace_sink=traces)
    outdir = Path(config.output_dir)
    written = write_pilot_outputs(report, outdir)
    written.append(atomic_write_text(outdir / "pilot-trace.jsonl",
                                     "".join(line + "\n" for line in traces)))
    written.append(render_pilot_bins(pilot_report_to_dict(report), outdir))
    for path in written:
        print(path)
    _print_metrics(report.accuracy, report.macro_f1)
    return 0


def _print_run_summary(d: dict) -> None:
    cfg = d.get("config", {})
    print(f"mode={cfg.get('mode')} template={cfg.get('template_id')} "
          f"provider={cfg.get('provider', {}).get('provider_id')}")
    print(f"queries={len(d.get('records', []))} "
          f"unparseable={d.get('unparseable_count')} failures={d.get('failure_count')}")
    per_class = d.get("per_class", [])
    if per_class:
        label_width = max(len(row["label"]) for row in per_class)
        print(f"{'label'.ljust(label_width)}  support  precision  recall      f1")
        for row in per_class:
            print(f"{row['label'].ljust(label_width)}  {row['support']:7d}  "
                  f"{row['precision']:9.4f}  {row['recall']:6.4f}  {row['f1']:6.4f}")
    _print_metrics(d["accuracy"], d["macro_f1"])


def _print_pilot_summary(d: dict) -> None:
    print(f"total_queries={d.get('total_queries')}")
    print("bin  range                count  accuracy")
    for i, b in enumerate(d.get("bins", [])):
        acc = "-" if b["accuracy"] is None else format_metric(b["accuracy"])
        print(f"{i:3d}  [{b['low']:+.3f}, {b['high']:+.3f}]  {b['count']:5d}  {acc:>8}")
    _print_metrics(d["accuracy"], d["macro_f1"])


def cmd_report(args: argparse.Namespace) -> int:
    path = Path(args.report_path)
    d = load_report_dict(path)
    outdir = Path(args.output) if args.output else path.parent
    if "bins" in d:
        _print_pilot_summary(d)
        figure = render_pilot_bins(d, outdir)
    else:
        _print_run_summary(d)
        figure = render_per_class_f1(d, outdir, stem=path.stem)
    print(figure, file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eicl",
        description="Emotion-aware in-context learning pipeline over corpus "
                    "and vector-store files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check inputs for mutual consistency")
    _add_config_flags(p_validate)
    p_validate.set_defaults(func=cmd_validate)

    p_run = sub.add_parser("run", help="run one experiment")
    _add_config_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run once per hyperparameter value")
    _add_config_flags(p_sweep)
    p_sweep.add_argument("--axis", required=True, choices=SWEEP_AXES)
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated axis values, e.g. 0,0.2,0.5")
    p_sweep.set_defaults(func=cmd_sweep)

    p_pilot = sub.add_parser("pilot", help="similarity-bin accuracy probe")
    _add_config_flags(p_pilot)
    p_pilot.add_argument("--bins", type=int, help="similarity bin count")
    p_pilot.add_argument("--sets", type=int, help="number of example sets")
    p_pilot.add_argument("--set-size", type=int, help="examples per set")
    p_pilot.set_defaults(func=cmd_pilot)

    p_report = sub.add_parser("report", help="summarize an existing report file")
    p_report.add_argument("report_path")
    p_report.add_argument("--output", help="directory for rendered figures")
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except EiclError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - exit-code contract over tracebacks
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
