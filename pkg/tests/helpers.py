"""Shared builders for corpus, store, and pilot fixtures."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from eicl.config import RunConfig
from eicl.gateway import ProviderConfig
from eicl.store import write_store

REPO = Path(__file__).resolve().parents[1]
FIXTURES = REPO / "fixtures"


def write_corpus(path: Path, rows: list[dict]) -> Path:
    with path.open("w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    return path


def tiny_corpus_rows(n_train: int = 8, n_test: int = 4,
                     labels: tuple[str, ...] = ("joyful", "sad", "angry", "afraid")) -> list[dict]:
    rows = []
    for i in range(n_train):
        rows.append({"id": f"tr-{i:02d}", "text": f"train text {i}",
                     "label": labels[i % len(labels)], "split": "train"})
    for i in range(n_test):
        rows.append({"id": f"te-{i:02d}", "text": f"test text {i}",
                     "label": labels[i % len(labels)], "split": "test"})
    return rows


def store_for_rows(path: Path, rows: list[dict], aux_labels: list[str],
                   dim: int = 4, seed: int = 11) -> Path:
    """A store covering every corpus row: gold gets the probability peak."""
    rng = np.random.default_rng(seed)
    records = []
    for row in rows:
        vec = rng.standard_normal(dim)
        probs = np.full(len(aux_labels), 0.4 / (len(aux_labels) - 1))
        probs[aux_labels.index(row["label"])] = 0.6
        records.append((row["id"], vec, probs / probs.sum()))
    write_store(path, aux_labels, dim, records)
    return path


def build_step_world(dirpath: Path) -> dict:
    """Corpus and store where similarity fully determines correctness.

    Every train vector sits on the anchor direction, so the best cosine
    between any sampled example set and a query is the query's own cosine
    to the anchor. Queries are planted mid-bin at -0.75, -0.25, +0.25 and
    +0.75, two per placement, and the scripted answers are right exactly
    when that cosine is positive. Four equal-width bins then read 0, 0,
    1, 1.
    """
    labels = ["joyful", "sad", "angry", "afraid"]

    def peaked(label: str) -> np.ndarray:
        probs = np.full(4, 0.4 / 3)
        probs[labels.index(label)] = 0.6
        return probs / probs.sum()

    def vector_at(c: float) -> np.ndarray:
        return np.array([c, np.sqrt(max(0.0, 1.0 - c * c)), 0.0, 0.0])

    rows = []
    for i in range(6):
        rows.append({"id": f"tr-{i:02d}", "text": f"train {i}",
                     "label": labels[i % 4], "split": "train"})
    placements = [-0.75, -0.25, 0.25, 0.75]
    script = {}
    for j, cos_target in enumerate(placements):
        for rep in range(2):
            qid = f"te-{j}{rep}"
            gold = labels[(j + rep) % 4]
            rows.append({"id": qid, "text": f"query {j}.{rep}",
                         "label": gold, "split": "test"})
            wrong = labels[(labels.index(gold) + 1) % 4]
            script[qid] = gold if cos_target > 0 else wrong
    corpus_path = write_corpus(dirpath / "corpus.jsonl", rows)

    records = []
    for row in rows:
        if row["split"] == "train":
            vec = vector_at(1.0)
        else:
            vec = vector_at(placements[int(row["id"][3])])
        records.append((row["id"], vec, peaked(row["label"])))
    store_path = dirpath / "emo.jsonl"
    write_store(store_path, labels, 4, records)

    config = RunConfig(corpus_path=str(corpus_path),
                       emotion_store_path=str(store_path),
                       output_dir=str(dirpath / "out"),
                       k1=2, k2=2, seed=9,
                       pilot_bins=4, pilot_sets=3, pilot_set_size=2,
                       provider=ProviderConfig(provider_id="scripted"))
    return {"config": config, "script": script}
