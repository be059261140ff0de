"""Labeled corpus loading, label-space alignment, and filtering.

Corpus files are line-delimited JSON with fields id, text, label, split.
Splits are declared in the file, never inferred, so a run is reproducible
byte-for-byte. An optional sidecar label-space file (one label per line,
order significant) pins the label order; otherwise the space is the
sorted set of distinct labels encountered.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import CorpusError
from .labels import LabelSpace, canonical_label

_SPLITS = ("train", "test")


@dataclass(frozen=True)
class Sample:
    id: str
    text: str
    gold: str


@dataclass(frozen=True)
class Corpus:
    """Immutable train/test corpus over a fixed label space."""

    name: str
    label_space: LabelSpace
    train: tuple[Sample, ...]
    test: tuple[Sample, ...]

    def __post_init__(self):
        seen: set[str] = set()
        for sample in self.train + self.test:
            if sample.id in seen:
                raise CorpusError(f"duplicate sample id '{sample.id}'")
            seen.add(sample.id)
            if sample.gold not in self.label_space:
                raise CorpusError(
                    f"sample '{sample.id}' has gold '{sample.gold}' outside the label space"
                )

    @property
    def samples(self) -> tuple[Sample, ...]:
        return self.train + self.test

    def sample_ids(self) -> set[str]:
        return {s.id for s in self.samples}


def load_label_space(path: str | Path, name: str = "labels") -> LabelSpace:
    """Read a sidecar label-space file: one label per line, order significant."""
    lines = [ln.strip() for ln in Path(path).read_text(encoding="utf-8").splitlines()]
    return LabelSpace.from_raw([ln for ln in lines if ln], name=name)


def load_corpus(path: str | Path, label_space: LabelSpace | None = None) -> Corpus:
    """Load a line-delimited JSON corpus, canonicalizing labels.

    Rejects missing/duplicate ids, unknown split tags, empty text, and an
    empty corpus, naming the offending line or id.
    """
    path = Path(path)
    if not path.exists():
        raise CorpusError(f"corpus file not found: {path}")
    train: list[Sample] = []
    test: list[Sample] = []
    seen_ids: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{lineno}: invalid JSON ({exc})") from exc
            rid = rec.get("id")
            if not rid:
                raise CorpusError(f"{path}:{lineno}: record has no id")
            if rid in seen_ids:
                raise CorpusError(f"{path}:{lineno}: duplicate id '{rid}'")
            seen_ids.add(rid)
            text = rec.get("text")
            if not text:
                raise CorpusError(f"{path}:{lineno}: record '{rid}' has empty text")
            if "label" not in rec:
                raise CorpusError(f"{path}:{lineno}: record '{rid}' has no label")
            gold = canonical_label(rec["label"])
            split = rec.get("split")
            if split not in _SPLITS:
                raise CorpusError(
                    f"{path}:{lineno}: record '{rid}' has unknown split tag {split!r}"
                )
            sample = Sample(id=str(rid), text=text, gold=gold)
            (train if split == "train" else test).append(sample)
    if not train and not test:
        raise CorpusError(f"{path}: corpus is empty")
    if label_space is None:
        golds = sorted({s.gold for s in train + test})
        label_space = LabelSpace(tuple(golds), name=path.stem)
    return Corpus(
        name=path.stem,
        label_space=label_space,
        train=tuple(train),
        test=tuple(test),
    )


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus back to the line-delimited JSON format."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for split, samples in (("train", corpus.train), ("test", corpus.test)):
            for s in samples:
                rec = {"id": s.id, "text": s.text, "label": s.gold, "split": split}
                fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def align_label_spaces(aux: LabelSpace, target: LabelSpace) -> LabelSpace:
    """Intersect two label spaces, keeping the target's order.

    The target order is kept so emotion lists in prompts follow the
    dataset's published taxonomy.
    """
    aux_set = set(aux.labels)
    common = tuple(label for label in target.labels if label in aux_set)
    if len(common) < 2:
        raise CorpusError(
            f"label spaces incompatible: '{aux.name}' and '{target.name}' share "
            f"{len(common)} label(s), need at least 2"
        )
    return LabelSpace(common, name=f"{target.name}-aligned")


def filter_corpus(corpus: Corpus, aligned: LabelSpace) -> Corpus:
    """Keep exactly the samples whose gold is in the aligned space."""
    missing = [label for label in aligned.labels if label not in corpus.label_space]
    if missing:
        raise CorpusError(
            f"aligned space has labels outside corpus '{corpus.name}': {missing}"
        )
    train = tuple(s for s in corpus.train if s.gold in aligned)
    test = tuple(s for s in corpus.test if s.gold in aligned)
    if not train:
        raise CorpusError(f"filtering corpus '{corpus.name}' left an empty train split")
    if not test:
        raise CorpusError(f"filtering corpus '{corpus.name}' left an empty test split")
    return Corpus(name=corpus.name, label_space=aligned, train=train, test=test)
