#!/usr/bin/env python3
"""Regenerate the synthetic fixture files under fixtures/.

The fixture is built to exercise every seam at once: the corpus has 8
labels while the vector stores declare 10, so label alignment always has
something to drop; the sidecar pins a deliberately non-alphabetical label
order; emotion vectors cluster by gold label so retrieval and similarity
binning behave sensibly; and roughly 70% of emotion-store records place
their probability argmax on the gold label, which pins the expected
echo-mock accuracy strictly between 0 and 1.

Deterministic for a fixed SEED; rerunning must reproduce the committed
files byte for byte.
"""
from __future__ import annotations

import json
import random
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from eicl.store import write_store  # noqa: E402

SEED = 20240817
TRAIN_N = 524
TEST_N = 120
EMOTION_DIM = 16
SEMANTIC_DIM = 24
ARGMAX_MATCH_RATE = 0.7

AUX_LABELS = [
    "joyful", "sad", "angry", "afraid", "surprised", "disgusted",
    "proud", "ashamed", "grateful", "lonely",
]

# Non-alphabetical on purpose: the sidecar order is significant and the
# aligned space must inherit it, not a sort.
CORPUS_LABELS = [
    "surprised", "joyful", "lonely", "angry",
    "grateful", "sad", "afraid", "proud",
]

OPENERS = {
    "surprised": ["Did not see that coming at all,", "Out of nowhere,", "I froze when"],
    "joyful": ["Best day in ages,", "I cannot stop smiling because", "Everything clicked and"],
    "lonely": ["The flat feels empty again,", "Nobody called and", "Another weekend alone,"],
    "angry": ["I am done being polite,", "They crossed the line when", "It boils my blood that"],
    "grateful": ["I owe them so much,", "Thankful beyond words that", "It meant everything when"],
    "sad": ["It still hurts that", "I keep replaying the moment", "Heavy heart today,"],
    "afraid": ["My hands would not stop shaking,", "I could not breathe when", "Something felt wrong and"],
    "proud": ["Years of work paid off,", "I finally pulled it off,", "Watching her succeed,"],
}

FILLERS = [
    "the news landed in my inbox", "the call came through", "everyone turned to look",
    "the door finally opened", "the results went up", "my neighbour dropped by",
    "the message arrived", "the meeting wrapped up", "the train pulled away",
    "the lights went out",
]


def unit(vec: np.ndarray) -> np.ndarray:
    return vec / np.linalg.norm(vec)


def sample_probs(nrng: np.random.Generator, target: str) -> np.ndarray:
    """Distribution over AUX_LABELS with a clear argmax at `target`."""
    target_mass = 0.35 + 0.25 * nrng.random()
    while True:
        rest = nrng.dirichlet(np.ones(len(AUX_LABELS) - 1)) * (1.0 - target_mass)
        if rest.max() <= target_mass - 0.02:
            break
    probs = np.empty(len(AUX_LABELS))
    ti = AUX_LABELS.index(target)
    probs[ti] = target_mass
    probs[[i for i in range(len(AUX_LABELS)) if i != ti]] = rest
    return probs / probs.sum()


def build_text(rng: random.Random, gold: str, index: int) -> str:
    opener = rng.choice(OPENERS[gold])
    filler = rng.choice(FILLERS)
    text = f"{opener} {filler} (case {index})."
    if index % 97 == 0:
        # a few texts carry the section delimiter to exercise escaping
        text += " ### raw transcript marker"
    return text


def main() -> None:
    rng = random.Random(SEED)
    nrng = np.random.default_rng(SEED)
    out = Path(__file__).resolve().parents[1] / "fixtures"
    out.mkdir(exist_ok=True)

    (out / "labels.txt").write_text("\n".join(CORPUS_LABELS) + "\n", encoding="utf-8")

    samples = []
    for i in range(TRAIN_N + TEST_N):
        split = "train" if i < TRAIN_N else "test"
        sid = f"tr-{i:04d}" if split == "train" else f"te-{i - TRAIN_N:04d}"
        gold = CORPUS_LABELS[i % len(CORPUS_LABELS)]
        written_label = gold
        if i % 131 == 0:
            written_label = gold.capitalize()  # loader canonicalizes case
        samples.append({
            "id": sid,
            "text": build_text(rng, gold, i),
            "label": written_label,
            "split": split,
            "gold": gold,
        })

    with (out / "corpus.jsonl").open("w", encoding="utf-8") as fh:
        for s in samples:
            row = {k: s[k] for k in ("id", "text", "label", "split")}
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")

    emotion_centers = {lab: unit(nrng.standard_normal(EMOTION_DIM))
                       for lab in CORPUS_LABELS}
    topic_centers = [unit(nrng.standard_normal(SEMANTIC_DIM)) for _ in range(6)]

    emotion_records = []
    semantic_records = []
    uniform = np.full(len(AUX_LABELS), 1.0 / len(AUX_LABELS))
    for i, s in enumerate(samples):
        vec = unit(emotion_centers[s["gold"]] + 0.55 * nrng.standard_normal(EMOTION_DIM))
        if nrng.random() < ARGMAX_MATCH_RATE:
            target = s["gold"]
        else:
            target = rng.choice([lab for lab in CORPUS_LABELS if lab != s["gold"]])
        emotion_records.append((s["id"], vec, sample_probs(nrng, target)))

        sem = unit(topic_centers[i % 6] + 0.5 * nrng.standard_normal(SEMANTIC_DIM))
        semantic_records.append((s["id"], sem, uniform))

    write_store(out / "emotion-store.jsonl", AUX_LABELS, EMOTION_DIM,
                emotion_records, meta={"source": "synthetic-fixture", "pooling": "none"})
    write_store(out / "semantic-store.jsonl", AUX_LABELS, SEMANTIC_DIM,
                semantic_records, meta={"source": "synthetic-fixture", "pooling": "none"})

    # canned replies for the scripted mock: a deterministic mix of correct,
    # wrong-but-parseable, and unparseable answers
    script = {}
    for j, s in enumerate(s for s in samples if s["split"] == "test"):
        if j % 3 == 0:
            script[s["id"]] = f"I would say {s['gold']}."
        elif j % 3 == 1:
            wrong = CORPUS_LABELS[(CORPUS_LABELS.index(s["gold"]) + 3) % len(CORPUS_LABELS)]
            script[s["id"]] = f"The emotion here is {wrong}, mostly."
        else:
            script[s["id"]] = "Honestly it is hard to tell."
    (out / "script.json").write_text(
        json.dumps(script, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )

    print(f"wrote fixtures for {len(samples)} samples to {out}")


if __name__ == "__main__":
    main()
