"""Writer for the vector store exchange format.

Line one is a JSON header with "aux_labels" and "dimension" plus any
extra provenance keys; every following line is one record with "id",
"vector", and "probs". Floats are serialized at full repr precision so
a reader recovers them bit for bit.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ExportError


def write_store_file(path: str | Path, aux_labels: Sequence[str], dimension: int,
                     records: Iterable[tuple[str, np.ndarray, np.ndarray]],
                     meta: dict | None = None) -> int:
    """Write the store file; returns the number of records written."""
    if len(aux_labels) < 2:
        raise ExportError(f"need at least 2 labels, got {len(aux_labels)}")
    if dimension < 1:
        raise ExportError(f"vector dimension must be positive, got {dimension}")
    header: dict = {"aux_labels": list(aux_labels), "dimension": int(dimension)}
    if meta:
        header.update(meta)
    count = 0
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps(header, ensure_ascii=False) + "\n")
        for sample_id, vector, probs in records:
            if len(vector) != dimension:
                raise ExportError(
                    f"record '{sample_id}': vector length {len(vector)} != {dimension}")
            if len(probs) != len(aux_labels):
                raise ExportError(
                    f"record '{sample_id}': {len(probs)} probabilities for "
                    f"{len(aux_labels)} labels")
            total = float(np.asarray(probs).sum())
            if abs(total - 1.0) > 1e-4:
                raise ExportError(
                    f"record '{sample_id}': probabilities sum to {total!r}")
            rec = {
                "id": sample_id,
                "vector": [float(x) for x in vector],
                "probs": [float(p) for p in probs],
            }
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
            count += 1
    return count
