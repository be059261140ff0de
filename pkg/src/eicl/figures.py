"""Figure rendering for reports.

The delimited files stay the canonical plotting interface; these renders
are the quick-look view written next to them. Everything draws from the
serialized report dictionaries so the same code serves fresh runs and
`report` invocations on existing files. PNG writer metadata is stripped
to keep repeated renders of identical reports stable.
"""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_PNG_METADATA = {"Software": None}
_DPI = 120
_ACCENT = "#46629e"
_SECOND = "#b0583f"


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=_DPI, metadata=_PNG_METADATA, bbox_inches="tight")
    plt.close(fig)
    return path


def render_per_class_f1(report: dict, output_dir: str | Path,
                        stem: str = "run") -> Path:
    """Bar chart of per-class F1 for a run report dict."""
    per_class = report["per_class"]
    labels = [row["label"] for row in per_class]
    scores = [row["f1"] for row in per_class]
    width = max(4.0, 0.45 * len(labels) + 1.2)
    fig, ax = plt.subplots(figsize=(width, 3.4))
    ax.bar(range(len(labels)), scores, color=_ACCENT)
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels, rotation=55, ha="right", fontsize=7)
    ax.set_ylim(0.0, 1.0)
    ax.set_ylabel("F1")
    ax.set_title(f"per-class F1 (macro {report['macro_f1']:.4f})", fontsize=10)
    fig.tight_layout()
    return _save(fig, Path(output_dir) / f"{stem}-per-class-f1.png")


def render_sweep_curve(axis: str, rows: list[tuple[float, float, float]],
                       output_dir: str | Path) -> Path:
    """Accuracy and macro F1 against the swept value; rows are (value, acc, f1)."""
    values = [r[0] for r in rows]
    accs = [r[1] for r in rows]
    f1s = [r[2] for r in rows]
    fig, ax = plt.subplots(figsize=(4.8, 3.4))
    ax.plot(values, accs, marker="o", color=_ACCENT, label="accuracy")
    ax.plot(values, f1s, marker="s", color=_SECOND, label="macro F1")
    ax.set_xlabel(axis)
    ax.set_ylabel("score")
    ax.set_ylim(0.0, 1.0)
    ax.legend(fontsize=8)
    ax.set_title(f"sweep over {axis}", fontsize=10)
    fig.tight_layout()
    return _save(fig, Path(output_dir) / f"sweep-{axis}.png")


def render_pilot_bins(report: dict, output_dir: str | Path) -> Path:
    """Per-bin accuracy over similarity, with bin occupancy in the background."""
    bins = report["bins"]
    mids = [(b["low"] + b["high"]) / 2.0 for b in bins]
    counts = [b["count"] for b in bins]
    width = (bins[0]["high"] - bins[0]["low"]) * 0.85 if bins else 0.5
    fig, ax = plt.subplots(figsize=(4.8, 3.4))
    occupancy = ax.twinx()
    occupancy.bar(mids, counts, width=width, color="0.82", zorder=1)
    occupancy.set_ylabel("queries", color="0.45")
    occupancy.tick_params(axis="y", colors="0.45")
    occupied = [(m, b["accuracy"]) for m, b in zip(mids, bins)
                if b["accuracy"] is not None]
    if occupied:
        ax.plot([m for m, _ in occupied], [a for _, a in occupied],
                marker="o", color=_ACCENT, zorder=3)
    ax.set_xlim(-1.0, 1.0)
    ax.set_ylim(-0.02, 1.02)
    ax.set_xlabel("max cosine similarity to the example set")
    ax.set_ylabel("accuracy")
    ax.set_zorder(occupancy.get_zorder() + 1)
    ax.patch.set_visible(False)
    ax.set_title("accuracy by similarity bin", fontsize=10)
    fig.tight_layout()
    return _save(fig, Path(output_dir) / "pilot-bins.png")
