"""Run a checkpoint over a corpus and write the vector store file.

Two modes share one batching loop. "classifier" runs a sequence
classification checkpoint and writes softmax probabilities next to a
pooled hidden-state vector, which yields the emotion store the consumer
pipeline retrieves and soft-labels from. "encoder" runs a bare encoder
for the semantic store used by retrieval baselines; a plain encoder
expresses no label preference, so every record carries the uniform
distribution over the corpus's own label set.

Inference is eval-mode and batch-size invariant: padding positions are
masked out of mean pooling, so the same sample produces the same vector
regardless of its batch neighbors.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .corpus import CorpusRow, load_corpus_rows
from .errors import ExportError
from .storefile import write_store_file

POOLING_CHOICES = ("mean", "cls")
MODE_CHOICES = ("classifier", "encoder")


@dataclass(frozen=True)
class ExportSpec:
    corpus_path: str
    checkpoint: str
    output_path: str
    pooling: str = "mean"
    batch_size: int = 16
    mode: str = "classifier"
    max_length: int = 128

    def __post_init__(self) -> None:
        if self.pooling not in POOLING_CHOICES:
            raise ExportError(
                f"pooling must be one of {POOLING_CHOICES}, got '{self.pooling}'")
        if self.mode not in MODE_CHOICES:
            raise ExportError(
                f"mode must be one of {MODE_CHOICES}, got '{self.mode}'")
        if self.batch_size < 1:
            raise ExportError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.max_length < 8:
            raise ExportError(f"max_length must be >= 8, got {self.max_length}")


@dataclass(frozen=True)
class ExportResult:
    output_path: str
    record_count: int
    dimension: int
    labels: tuple[str, ...] = field(repr=False)


def _quiet_transformers() -> None:
    from transformers.utils import logging as hf_logging

    hf_logging.set_verbosity_error()
    hf_logging.disable_progress_bar()


def _classifier_labels(config) -> list[str]:
    id2label = getattr(config, "id2label", None) or {}
    try:
        return [str(id2label[key]) for key in
                sorted(id2label, key=lambda k: int(k))]
    except (TypeError, ValueError) as exc:
        raise ExportError(f"checkpoint has unusable id2label mapping: {exc}") from exc


class Exporter:
    """Loaded tokenizer and model, driving batched eval-mode inference."""

    def __init__(self, spec: ExportSpec):
        _quiet_transformers()
        import torch
        from transformers import (AutoModel, AutoModelForSequenceClassification,
                                  AutoTokenizer)

        self.spec = spec
        self.torch = torch
        try:
            self.tokenizer = AutoTokenizer.from_pretrained(spec.checkpoint)
            if spec.mode == "classifier":
                self.model = AutoModelForSequenceClassification.from_pretrained(
                    spec.checkpoint)
            else:
                self.model = AutoModel.from_pretrained(spec.checkpoint)
        except Exception as exc:
            raise ExportError(
                f"cannot load checkpoint '{spec.checkpoint}': {exc}") from exc
        self.model.eval()

    def _pool(self, hidden, attention_mask):
        if self.spec.pooling == "cls":
            return hidden[:, 0, :]
        mask = attention_mask.unsqueeze(-1).to(hidden.dtype)
        summed = (hidden * mask).sum(dim=1)
        counts = mask.sum(dim=1).clamp(min=1.0)
        return summed / counts

    def _forward_batch(self, texts: Sequence[str]):
        """Vectors and (for classifier mode) probabilities for one batch."""
        torch = self.torch
        enc = self.tokenizer(list(texts), return_tensors="pt", padding=True,
                             truncation=True, max_length=self.spec.max_length)
        with torch.no_grad():
            if self.spec.mode == "classifier":
                out = self.model(**enc, output_hidden_states=True)
                probs = torch.softmax(out.logits.to(torch.float64), dim=-1)
                hidden = out.hidden_states[-1]
            else:
                out = self.model(**enc)
                probs = None
                hidden = out.last_hidden_state
            pooled = self._pool(hidden, enc["attention_mask"])
        vectors = pooled.to(torch.float64).cpu().numpy()
        return vectors, None if probs is None else probs.cpu().numpy()

    def run(self, rows: Sequence[CorpusRow]):
        """Yield (id, vector, probs-or-None) per row, naming any failing sample."""
        batch_size = self.spec.batch_size
        for start in range(0, len(rows), batch_size):
            batch = rows[start:start + batch_size]
            texts = [row.text for row in batch]
            try:
                vectors, probs = self._forward_batch(texts)
            except Exception:
                # isolate the culprit so the error names a sample, not a batch
                for row in batch:
                    try:
                        self._forward_batch([row.text])
                    except Exception as exc:
                        raise ExportError(
                            f"inference failed for sample "
                            f"'{row.sample_id}': {exc}") from exc
                raise
            for i, row in enumerate(batch):
                yield row.sample_id, vectors[i], None if probs is None else probs[i]


def export(spec: ExportSpec) -> ExportResult:
    rows = load_corpus_rows(spec.corpus_path)
    exporter = Exporter(spec)

    if spec.mode == "classifier":
        labels = _classifier_labels(exporter.model.config)
        if len(labels) < 2:
            raise ExportError(
                f"checkpoint declares {len(labels)} labels; need at least 2")
        known = {label.casefold() for label in labels}
        stray = sorted({row.label for row in rows
                        if row.label.casefold() not in known})
        if stray:
            warnings.warn(
                "corpus labels absent from the checkpoint's label set: "
                + ", ".join(stray), stacklevel=2)
    else:
        labels = sorted({row.label for row in rows})
        if len(labels) < 2:
            raise ExportError(
                f"corpus has {len(labels)} distinct labels; need at least 2 "
                "for the uniform distributions of encoder mode")

    uniform = np.full(len(labels), 1.0 / len(labels))

    def records():
        for sample_id, vector, probs in exporter.run(rows):
            yield sample_id, vector, uniform if probs is None else probs

    dimension = int(exporter.model.config.hidden_size)
    meta = {
        "checkpoint": spec.checkpoint,
        "pooling": spec.pooling,
        "mode": spec.mode,
    }
    count = write_store_file(spec.output_path, labels, dimension,
                             records(), meta=meta)
    return ExportResult(output_path=spec.output_path, record_count=count,
                        dimension=dimension, labels=tuple(labels))
