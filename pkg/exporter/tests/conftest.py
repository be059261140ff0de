"""Offline fixtures: a hand-rolled tiny checkpoint and a matching corpus."""
from __future__ import annotations

import json
from pathlib import Path

import pytest

VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "the", "a", "my", "i", "was", "felt", "so", "very", "today",
    "happy", "glad", "sad", "lost", "angry", "mad", "afraid", "scared",
    "dog", "cat", "rain", "sun", "friend", "news", "day", "night",
    "##s", "##ed", "##ly",
]

LABELS = ["joyful", "sad", "angry", "afraid"]

TEXTS = [
    "i felt so happy today",
    "the sun was very glad",
    "my friend was sad",
    "i lost the dog",
    "the news made me mad",
    "i was so angry today",
    "the night was scary",
    "i felt afraid of the rain",
    "a glad day with my cat",
    "the rain felt very sad",
]


@pytest.fixture(scope="session")
def checkpoint_dir(tmp_path_factory) -> Path:
    """A complete sequence-classification checkpoint built from scratch."""
    import torch
    from transformers import BertConfig, BertForSequenceClassification, BertTokenizer
    from transformers.utils import logging as hf_logging

    hf_logging.set_verbosity_error()
    hf_logging.disable_progress_bar()

    target = tmp_path_factory.mktemp("checkpoint")
    vocab_file = target / "vocab.txt"
    vocab_file.write_text("\n".join(VOCAB) + "\n", encoding="utf-8")
    tokenizer = BertTokenizer(vocab_file=str(vocab_file), do_lower_case=True)

    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=16,
        num_hidden_layers=1,
        num_attention_heads=2,
        intermediate_size=32,
        max_position_embeddings=32,
        num_labels=len(LABELS),
        id2label=dict(enumerate(LABELS)),
        label2id={label: i for i, label in enumerate(LABELS)},
    )
    torch.manual_seed(1234)
    model = BertForSequenceClassification(config)
    model.save_pretrained(target)
    tokenizer.save_pretrained(target)
    return target


@pytest.fixture(scope="session")
def corpus_path(tmp_path_factory) -> Path:
    """Ten rows whose words all tokenize against the tiny vocabulary."""
    target = tmp_path_factory.mktemp("corpus") / "corpus.jsonl"
    with target.open("w", encoding="utf-8") as fh:
        for i, text in enumerate(TEXTS):
            row = {
                "id": f"s-{i:03d}",
                "text": text,
                "label": LABELS[i % len(LABELS)],
                "split": "train" if i < 7 else "test",
            }
            fh.write(json.dumps(row) + "\n")
    return target
