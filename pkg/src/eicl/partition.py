"""Candidate emotion division into possible and impossible sets.

The k3 highest-probability labels for the query form the possible set,
ordered by descending probability so prompt rendering lists likelier
candidates first; everything else is the impossible set in label-space
order. The two sets are disjoint and cover the whole aligned space.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .labels import LabelSpace


@dataclass(frozen=True)
class CandidatePartition:
    possible: tuple[str, ...]
    impossible: tuple[str, ...]

    def resolution_order(self) -> tuple[str, ...]:
        """Possible labels first, then impossible, each in listed order."""
        return self.possible + self.impossible


def divide_candidates(probs: np.ndarray, k3: int, aligned: LabelSpace) -> CandidatePartition:
    """Split the aligned space into top-k3 possible labels and the rest."""
    n = len(aligned)
    if not 1 <= k3 <= n:
        raise ValueError(f"k3 must be in [1, {n}], got {k3}")
    probs = np.asarray(probs, dtype=np.float64)
    if probs.shape != (n,):
        raise ValueError(f"distribution length {probs.shape} does not match space size {n}")
    order = sorted(range(n), key=lambda i: (-probs[i], i))
    chosen = set(order[:k3])
    possible = tuple(aligned.labels[i] for i in order[:k3])
    impossible = tuple(aligned.labels[i] for i in range(n) if i not in chosen)
    return CandidatePartition(possible=possible, impossible=impossible)


def full_partition(aligned: LabelSpace) -> CandidatePartition:
    """Neutral partition: every label possible, in label-space order.

    Used by the zero-shot and plain-ICL baselines, which must not leak
    auxiliary-model preferences into the prompt.
    """
    return CandidatePartition(possible=tuple(aligned.labels), impossible=())
