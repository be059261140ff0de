"""Minimal reader for the corpus exchange format.

One JSON object per line with "id", "text", "label", and "split" keys.
This tool never imports the consumer pipeline; the file format is the
only contract between the two, so the reader here is intentionally
self-contained.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import ExportError


@dataclass(frozen=True)
class CorpusRow:
    sample_id: str
    text: str
    label: str
    split: str


def load_corpus_rows(path: str | Path) -> list[CorpusRow]:
    path = Path(path)
    if not path.is_file():
        raise ExportError(f"corpus file not found: {path}")
    rows: list[CorpusRow] = []
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ExportError(f"{path}:{lineno}: invalid JSON ({exc})") from exc
            try:
                row = CorpusRow(sample_id=str(raw["id"]), text=str(raw["text"]),
                                label=str(raw["label"]), split=str(raw["split"]))
            except KeyError as exc:
                raise ExportError(f"{path}:{lineno}: missing key {exc}") from exc
            if not row.sample_id:
                raise ExportError(f"{path}:{lineno}: empty sample id")
            if row.sample_id in seen:
                raise ExportError(f"{path}:{lineno}: duplicate id '{row.sample_id}'")
            seen.add(row.sample_id)
            rows.append(row)
    if not rows:
        raise ExportError(f"corpus file is empty: {path}")
    return rows
