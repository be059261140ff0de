"""Emotion-similar example retrieval: cosine scoring and exact top-k.

Retrieval is exact brute force over the candidate pool. Pools here are at
most O(10^5), and run-to-run determinism matters more than speed, so
every candidate is scored with the same double-precision kernel and ties
are broken by ascending sample id.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .store import AuxStore


@dataclass(frozen=True)
class ScoredNeighbor:
    sample_id: str
    score: float


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity of two vectors in double precision.

    Symmetric bit-for-bit: the summation order is the index order for
    both arguments, and the final product/division commute exactly.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ValueError("degenerate vector: zero norm")
    return float(np.dot(u, v)) / (nu * nv)


def top_k_similar(query_vec: np.ndarray, store: AuxStore, k1: int,
                  exclude_ids: Iterable[str] = ()) -> list[ScoredNeighbor]:
    """Exact top-k1 records by cosine to the query, descending score.

    Ties break by ascending sample id. `exclude_ids` is removed before
    ranking so a query can never retrieve itself when train and test
    share a store.
    """
    if k1 < 1:
        raise ValueError(f"k1 must be >= 1, got {k1}")
    excluded = set(exclude_ids)
    scored = (
        ScoredNeighbor(sample_id=rid, score=cosine(query_vec, rec.vector))
        for rid, rec in store.records.items()
        if rid not in excluded
    )
    # nsmallest == sorted(...)[:k], so tie handling matches a full sort
    top = heapq.nsmallest(k1, scored, key=lambda n: (-n.score, n.sample_id))
    if not top:
        raise ValueError("empty candidate pool after exclusions")
    return top
