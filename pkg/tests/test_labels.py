from __future__ import annotations

import pytest

from eicl.errors import CorpusError
from eicl.labels import LabelSpace, canonical_label


def test_canonical_label_folds_case_and_separators():
    assert canonical_label("Joyful") == "joyful"
    assert canonical_label("not_impressed") == "not impressed"
    assert canonical_label("  very   Happy ") == "very happy"


def test_canonical_label_rejects_empty():
    with pytest.raises(CorpusError):
        canonical_label("   ")


def test_space_keeps_given_order():
    space = LabelSpace.from_raw(["surprised", "angry", "joyful"])
    assert space.labels == ("surprised", "angry", "joyful")
    assert space.index("angry") == 1
    assert list(space) == ["surprised", "angry", "joyful"]
    assert "joyful" in space and "bored" not in space


def test_space_canonicalizes_members():
    space = LabelSpace.from_raw(["Joyful", "SAD"])
    assert space.labels == ("joyful", "sad")


def test_space_rejects_duplicates_after_canonicalization():
    with pytest.raises(CorpusError):
        LabelSpace.from_raw(["joyful", "Joyful"])


def test_space_needs_two_labels():
    with pytest.raises(CorpusError):
        LabelSpace.from_raw(["joyful"])


def test_index_of_unknown_label_raises():
    space = LabelSpace.from_raw(["joyful", "sad"])
    with pytest.raises(CorpusError):
        space.index("angry")
