"""Shared fixtures: committed corpus/store paths and tiny builders."""
from __future__ import annotations

import pytest

from eicl.config import RunConfig
from eicl.gateway import ProviderConfig
from eicl.labels import LabelSpace

from helpers import FIXTURES, store_for_rows, tiny_corpus_rows, write_corpus


@pytest.fixture(scope="session")
def fixture_dir():
    return FIXTURES


@pytest.fixture
def space4() -> LabelSpace:
    return LabelSpace.from_raw(["joyful", "sad", "angry", "afraid"])


@pytest.fixture
def tiny_setup(tmp_path):
    """Small self-consistent corpus + emotion store + config."""
    labels = ("joyful", "sad", "angry", "afraid")
    rows = tiny_corpus_rows(labels=labels)
    corpus_path = write_corpus(tmp_path / "corpus.jsonl", rows)
    store_path = store_for_rows(tmp_path / "emo.jsonl", rows, list(labels))
    config = RunConfig(
        corpus_path=str(corpus_path),
        emotion_store_path=str(store_path),
        output_dir=str(tmp_path / "out"),
        k1=2,
        k2=2,
    )
    return {"rows": rows, "labels": labels, "corpus_path": corpus_path,
            "store_path": store_path, "config": config, "dir": tmp_path}


@pytest.fixture
def fixture_config(tmp_path) -> RunConfig:
    """Config over the committed synthetic fixture."""
    return RunConfig(
        corpus_path=str(FIXTURES / "corpus.jsonl"),
        labels_path=str(FIXTURES / "labels.txt"),
        emotion_store_path=str(FIXTURES / "emotion-store.jsonl"),
        semantic_store_path=str(FIXTURES / "semantic-store.jsonl"),
        output_dir=str(tmp_path / "out"),
    )


@pytest.fixture
def scripted_provider_config() -> ProviderConfig:
    return ProviderConfig(provider_id="scripted",
                          script_path=str(FIXTURES / "script.json"))
