"""Emotion label canonicalization and ordered label spaces.

Labels are plain strings once canonicalized: trimmed, case-folded, with
underscores and internal whitespace runs collapsed to single spaces. The
order of a LabelSpace is load-bearing: it fixes the indexing of every
probability vector built over it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CorpusError


def canonical_label(raw: str) -> str:
    """Return the canonical form of an emotion label.

    Idempotent: canonical_label(canonical_label(x)) == canonical_label(x).
    """
    folded = raw.replace("_", " ").casefold()
    canon = " ".join(folded.split())
    if not canon:
        raise CorpusError(f"label {raw!r} is empty after canonicalization")
    return canon


@dataclass(frozen=True)
class LabelSpace:
    """Ordered, distinct set of canonical emotion labels."""

    labels: tuple[str, ...]
    name: str = "labels"
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.labels) < 2:
            raise CorpusError(
                f"label space '{self.name}' needs at least 2 labels, got {len(self.labels)}"
            )
        index: dict[str, int] = {}
        for i, label in enumerate(self.labels):
            if canonical_label(label) != label:
                raise CorpusError(f"label {label!r} is not canonical")
            if label in index:
                raise CorpusError(f"duplicate label {label!r} in space '{self.name}'")
            index[label] = i
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise CorpusError(f"label {label!r} not in space '{self.name}'") from None

    @classmethod
    def from_raw(cls, raw_labels, name: str = "labels") -> "LabelSpace":
        """Build a space from raw strings, canonicalizing each in order."""
        return cls(tuple(canonical_label(r) for r in raw_labels), name=name)
