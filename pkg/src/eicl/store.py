"""Per-sample emotion vectors and probability distributions.

The store file is line-delimited JSON. Line 1 is a header declaring the
label order and vector dimension:

    {"aux_labels": ["joyful", ...], "dimension": 16}

Every following line is one record:

    {"id": "tr-0001", "vector": [ ... D floats ... ], "probs": [ ... N floats ... ]}

Extra header keys (e.g. exporter provenance such as pooling or checkpoint)
are preserved in `AuxStore.meta`. Ingest is total-or-nothing: the first
invalid record aborts with its id and no store is returned.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import StoreError
from .labels import LabelSpace, canonical_label

PROB_SUM_TOL = 1e-4


@dataclass(frozen=True)
class AuxRecord:
    sample_id: str
    vector: np.ndarray
    probs: np.ndarray


@dataclass(frozen=True)
class AuxStore:
    """Immutable map from sample id to auxiliary vector + distribution."""

    aux_label_space: LabelSpace
    dimension: int
    records: dict[str, AuxRecord]
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.records)

    def __contains__(self, sample_id: str) -> bool:
        return sample_id in self.records

    def ids(self) -> set[str]:
        return set(self.records)


def get_record(store: AuxStore, sample_id: str) -> AuxRecord:
    """Fetch a record, failing loudly when the id has no auxiliary output."""
    try:
        return store.records[sample_id]
    except KeyError:
        raise StoreError(
            f"auxiliary output absent for sample '{sample_id}'"
        ) from None


def _validate_record(rid: str, vector: np.ndarray, probs: np.ndarray,
                     dimension: int, n_labels: int) -> None:
    if vector.shape != (dimension,):
        raise StoreError(
            f"record '{rid}': vector length {vector.shape[0] if vector.ndim == 1 else vector.shape}"
            f" does not match declared dimension {dimension}"
        )
    if not np.all(np.isfinite(vector)):
        raise StoreError(f"record '{rid}': vector has non-finite entries")
    if probs.shape != (n_labels,):
        raise StoreError(
            f"record '{rid}': {probs.shape[0] if probs.ndim == 1 else probs.shape} probabilities"
            f" for {n_labels} labels"
        )
    if not np.all(np.isfinite(probs)):
        raise StoreError(f"record '{rid}': distribution has non-finite entries")
    if np.any(probs < 0):
        raise StoreError(f"record '{rid}': distribution has negative entries")
    total = float(probs.sum())
    if not math.isclose(total, 1.0, abs_tol=PROB_SUM_TOL, rel_tol=0.0):
        raise StoreError(f"record '{rid}': distribution sum {total:g} not within {PROB_SUM_TOL:g} of 1")


def ingest_store(path: str | Path) -> AuxStore:
    """Read and validate a store file; any invalid record aborts the ingest."""
    path = Path(path)
    if not path.exists():
        raise StoreError(f"store file not found: {path}")
    with path.open(encoding="utf-8") as fh:
        header_line = fh.readline()
        try:
            header = json.loads(header_line)
            aux_labels = header["aux_labels"]
            dimension = int(header["dimension"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise StoreError(f"{path}: malformed header line ({exc})") from exc
        if dimension < 1:
            raise StoreError(f"{path}: declared dimension {dimension} must be positive")
        space = LabelSpace.from_raw(aux_labels, name=f"{path.stem}-aux")
        meta = {k: v for k, v in header.items() if k not in ("aux_labels", "dimension")}
        records: dict[str, AuxRecord] = {}
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise StoreError(f"{path}:{lineno}: invalid JSON ({exc})") from exc
            rid = rec.get("id")
            if not rid:
                raise StoreError(f"{path}:{lineno}: record has no id")
            if rid in records:
                raise StoreError(f"{path}:{lineno}: duplicate id '{rid}'")
            try:
                vector = np.asarray(rec["vector"], dtype=np.float64)
                probs = np.asarray(rec["probs"], dtype=np.float64)
            except (KeyError, ValueError) as exc:
                raise StoreError(f"record '{rid}': malformed vector/probs ({exc})") from exc
            _validate_record(rid, vector, probs, dimension, len(space))
            vector.setflags(write=False)
            probs.setflags(write=False)
            records[rid] = AuxRecord(sample_id=str(rid), vector=vector, probs=probs)
    return AuxStore(aux_label_space=space, dimension=dimension, records=records, meta=meta)


def write_store(path: str | Path, aux_labels: Iterable[str], dimension: int,
                records: Iterable[tuple[str, np.ndarray, np.ndarray]],
                meta: dict | None = None) -> None:
    """Write a store file in the documented format (used for fixtures and tooling)."""
    header = {"aux_labels": [canonical_label(l) for l in aux_labels], "dimension": int(dimension)}
    if meta:
        header.update(meta)
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, ensure_ascii=False) + "\n")
        for rid, vector, probs in records:
            rec = {
                "id": rid,
                "vector": [float(x) for x in vector],
                "probs": [float(p) for p in probs],
            }
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def project_distribution(probs: np.ndarray, aux_space: LabelSpace,
                         aligned: LabelSpace) -> np.ndarray:
    """Restrict a distribution to the aligned labels and renormalize to sum 1.

    Renormalization preserves ratios between retained labels, hence also
    the argmax among them.
    """
    idx = [aux_space.index(label) for label in aligned.labels]
    sub = np.asarray(probs, dtype=np.float64)[idx]
    mass = float(sub.sum())
    if mass <= 0.0:
        raise StoreError("no probability mass on aligned labels")
    out = sub / mass
    out.setflags(write=False)
    return out
