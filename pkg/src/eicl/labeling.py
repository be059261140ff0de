"""Dynamic soft label construction for retrieved demonstrations.

A demonstration's soft label mixes its ground-truth label with the
auxiliary model's top-k2 predicted emotions. With predicted probabilities
p_j over labels other than the ground truth, and fusion weight alpha:

    weight(ground truth) = 1 - alpha * sum(p_j)
    weight(e_j)          = alpha * p_j

Zero-weight entries are dropped so prompt rendering never shows "(0.00)"
emotions. When the ground truth is absent from the predictions it is
inserted with weight 1 - alpha * S over all k2 predicted probabilities,
which keeps the weights summing to exactly 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .labels import LabelSpace

SUM_TOL = 1e-9


@dataclass(frozen=True)
class SoftLabel:
    """Weighted emotion entries, descending by weight, ground truth included."""

    entries: tuple[tuple[str, float], ...]
    gold: str

    def weight_of(self, label: str) -> float:
        for lab, w in self.entries:
            if lab == label:
                return w
        return 0.0


def top_k2_emotions(probs: np.ndarray, aligned: LabelSpace, k2: int) -> list[tuple[str, float]]:
    """The k2 highest-probability labels, ties broken by label order."""
    if k2 < 1:
        raise ValueError(f"k2 must be >= 1, got {k2}")
    n = len(aligned)
    if k2 > n:
        raise ValueError(f"k2={k2} exceeds the aligned space size {n}")
    probs = np.asarray(probs, dtype=np.float64)
    if probs.shape != (n,):
        raise ValueError(f"distribution length {probs.shape} does not match space size {n}")
    order = sorted(range(n), key=lambda i: (-probs[i], i))
    return [(aligned.labels[i], float(probs[i])) for i in order[:k2]]


def build_soft_label(gt: str, predicted: list[tuple[str, float]], alpha: float,
                     aligned: LabelSpace) -> SoftLabel:
    """Combine the ground truth with predicted emotions at fusion weight alpha."""
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must be in [0, 1), got {alpha}")
    if gt not in aligned:
        raise ValueError(f"ground truth '{gt}' not in the aligned space")
    others: list[tuple[str, float]] = []
    seen = {gt}
    for label, p in predicted:
        if label == gt:
            continue
        if label in seen:
            raise ValueError(f"duplicate predicted label '{label}'")
        if p < 0:
            raise ValueError(f"negative probability {p} for '{label}'")
        seen.add(label)
        others.append((label, p))
    spill = sum(p for _, p in others)
    gt_weight = 1.0 - alpha * spill
    if gt_weight <= 0.0:
        raise ValueError(
            f"ground-truth weight non-positive ({gt_weight:g}); "
            f"alpha={alpha} with off-truth mass {spill:g}"
        )
    entries = [(gt, gt_weight)]
    entries.extend((label, alpha * p) for label, p in others)
    entries = [(label, w) for label, w in entries if w > 0.0]
    entries.sort(key=lambda e: (-e[1], aligned.index(e[0])))
    total = sum(w for _, w in entries)
    assert abs(total - 1.0) <= SUM_TOL, f"soft label weights sum to {total!r}"
    return SoftLabel(entries=tuple(entries), gold=gt)
