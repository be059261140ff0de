"""Scoring for single-label predictions over a fixed label space.

Unparseable predictions (None) are wrong for accuracy and act as a false
negative for the gold class while contributing a false positive to no
class. Macro F1 averages over every label in the space, including labels
that never occur in the gold set; any 0/0 ratio is defined as 0.
"""
from __future__ import annotations

from dataclasses import dataclass

from .labels import LabelSpace


@dataclass(frozen=True)
class ClassStats:
    label: str
    support: int
    true_positive: int
    false_positive: int
    false_negative: int
    precision: float
    recall: float
    f1: float


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def accuracy(golds: list[str], preds: list[str | None]) -> float:
    if len(golds) != len(preds):
        raise ValueError(f"gold/prediction length mismatch: {len(golds)} vs {len(preds)}")
    if not golds:
        raise ValueError("cannot score an empty prediction set")
    hits = sum(1 for g, p in zip(golds, preds) if p == g)
    return hits / len(golds)


def per_class_stats(space: LabelSpace, golds: list[str],
                    preds: list[str | None]) -> list[ClassStats]:
    if len(golds) != len(preds):
        raise ValueError(f"gold/prediction length mismatch: {len(golds)} vs {len(preds)}")
    for g in golds:
        if g not in space:
            raise ValueError(f"gold label '{g}' outside the label space")
    for p in preds:
        if p is not None and p not in space:
            raise ValueError(f"predicted label '{p}' outside the label space")
    out = []
    for label in space:
        tp = sum(1 for g, p in zip(golds, preds) if g == label and p == label)
        fp = sum(1 for g, p in zip(golds, preds) if g != label and p == label)
        fn = sum(1 for g, p in zip(golds, preds) if g == label and p != label)
        precision = _ratio(tp, tp + fp)
        recall = _ratio(tp, tp + fn)
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        out.append(ClassStats(
            label=label,
            support=golds.count(label),
            true_positive=tp,
            false_positive=fp,
            false_negative=fn,
            precision=precision,
            recall=recall,
            f1=f1,
        ))
    return out


def macro_f1(space: LabelSpace, golds: list[str], preds: list[str | None]) -> float:
    if not golds:
        raise ValueError("cannot score an empty prediction set")
    stats = per_class_stats(space, golds, preds)
    return sum(s.f1 for s in stats) / len(stats)
