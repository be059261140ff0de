from __future__ import annotations

import json
import shutil
import subprocess

import numpy as np
import pytest

from eicl_exporter import ExportError, ExportSpec, export
from eicl_exporter.export import Exporter


def spec_for(corpus_path, checkpoint_dir, out, **kw):
    return ExportSpec(corpus_path=str(corpus_path),
                      checkpoint=str(checkpoint_dir),
                      output_path=str(out), **kw)


def read_store(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    return json.loads(lines[0]), [json.loads(line) for line in lines[1:]]


def test_spec_validation(tmp_path):
    with pytest.raises(ExportError, match="pooling"):
        ExportSpec("c", "m", "o", pooling="max")
    with pytest.raises(ExportError, match="mode"):
        ExportSpec("c", "m", "o", mode="regressor")
    with pytest.raises(ExportError, match="batch_size"):
        ExportSpec("c", "m", "o", batch_size=0)


def test_classifier_export_shape(corpus_path, checkpoint_dir, tmp_path):
    out = tmp_path / "emotion.jsonl"
    result = export(spec_for(corpus_path, checkpoint_dir, out))
    assert result.record_count == 10
    assert result.dimension == 16
    assert result.labels == ("joyful", "sad", "angry", "afraid")

    header, records = read_store(out)
    assert header["aux_labels"] == ["joyful", "sad", "angry", "afraid"]
    assert header["dimension"] == 16
    assert header["pooling"] == "mean"
    assert header["mode"] == "classifier"
    assert header["checkpoint"] == str(checkpoint_dir)
    assert len(records) == 10
    corpus_ids = [f"s-{i:03d}" for i in range(10)]
    assert [r["id"] for r in records] == corpus_ids
    for record in records:
        assert len(record["vector"]) == 16
        assert len(record["probs"]) == 4
        assert abs(sum(record["probs"]) - 1.0) <= 1e-4
        assert all(p >= 0 for p in record["probs"])


def test_encoder_export_uniform_probs(corpus_path, checkpoint_dir, tmp_path):
    out = tmp_path / "semantic.jsonl"
    result = export(spec_for(corpus_path, checkpoint_dir, out, mode="encoder"))
    assert result.record_count == 10
    header, records = read_store(out)
    assert header["mode"] == "encoder"
    # label set falls back to the corpus's own labels, sorted
    assert header["aux_labels"] == ["afraid", "angry", "joyful", "sad"]
    for record in records:
        assert record["probs"] == pytest.approx([0.25] * 4, abs=0)
        assert any(v != 0 for v in record["vector"])


def test_cls_pooling_recorded_and_differs(corpus_path, checkpoint_dir, tmp_path):
    mean_out = tmp_path / "mean.jsonl"
    cls_out = tmp_path / "cls.jsonl"
    export(spec_for(corpus_path, checkpoint_dir, mean_out))
    export(spec_for(corpus_path, checkpoint_dir, cls_out, pooling="cls"))
    mean_header, mean_records = read_store(mean_out)
    cls_header, cls_records = read_store(cls_out)
    assert mean_header["pooling"] == "mean"
    assert cls_header["pooling"] == "cls"
    assert mean_records[0]["vector"] != cls_records[0]["vector"]
    # probabilities come from the same logits either way
    assert mean_records[0]["probs"] == cls_records[0]["probs"]


def test_re_export_is_identical(corpus_path, checkpoint_dir, tmp_path):
    first = tmp_path / "first.jsonl"
    second = tmp_path / "second.jsonl"
    export(spec_for(corpus_path, checkpoint_dir, first))
    export(spec_for(corpus_path, checkpoint_dir, second))
    assert first.read_bytes() == second.read_bytes()


def test_batch_size_does_not_change_vectors(corpus_path, checkpoint_dir, tmp_path):
    big = tmp_path / "big.jsonl"
    small = tmp_path / "small.jsonl"
    export(spec_for(corpus_path, checkpoint_dir, big, batch_size=16))
    export(spec_for(corpus_path, checkpoint_dir, small, batch_size=3))
    _, big_records = read_store(big)
    _, small_records = read_store(small)
    for a, b in zip(big_records, small_records):
        assert a["id"] == b["id"]
        diff = np.max(np.abs(np.array(a["vector"]) - np.array(b["vector"])))
        assert diff <= 1e-5
        assert np.max(np.abs(np.array(a["probs"]) - np.array(b["probs"]))) <= 1e-6


def test_label_mismatch_warns_but_exports(corpus_path, checkpoint_dir, tmp_path):
    rows = [json.loads(line) for line in
            corpus_path.read_text().splitlines()]
    rows[0]["label"] = "bewildered"
    odd_corpus = tmp_path / "odd.jsonl"
    odd_corpus.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
    out = tmp_path / "store.jsonl"
    with pytest.warns(UserWarning, match="bewildered"):
        result = export(spec_for(odd_corpus, checkpoint_dir, out))
    assert result.record_count == 10


def test_inference_failure_names_the_sample(corpus_path, checkpoint_dir,
                                            tmp_path, monkeypatch):
    real = Exporter._forward_batch

    def poisoned(self, texts):
        if any("news" in t for t in texts):
            raise RuntimeError("tensor went sideways")
        return real(self, texts)

    monkeypatch.setattr(Exporter, "_forward_batch", poisoned)
    with pytest.raises(ExportError, match="'s-004'"):
        export(spec_for(corpus_path, checkpoint_dir, tmp_path / "out.jsonl",
                        batch_size=4))


def test_missing_corpus_or_checkpoint(tmp_path, checkpoint_dir, corpus_path):
    with pytest.raises(ExportError, match="not found"):
        export(spec_for(tmp_path / "ghost.jsonl", checkpoint_dir,
                        tmp_path / "o.jsonl"))
    with pytest.raises(ExportError, match="checkpoint"):
        export(spec_for(corpus_path, tmp_path / "no-model",
                        tmp_path / "o.jsonl"))


@pytest.mark.skipif(shutil.which("eicl") is None,
                    reason="consumer CLI not on PATH")
def test_round_trip_through_consumer_validation(corpus_path, checkpoint_dir,
                                                tmp_path):
    """The contract test: exported files satisfy the consumer unmodified."""
    emotion = tmp_path / "emotion.jsonl"
    semantic = tmp_path / "semantic.jsonl"
    export(spec_for(corpus_path, checkpoint_dir, emotion))
    export(spec_for(corpus_path, checkpoint_dir, semantic, mode="encoder"))

    checks = [
        ["eicl", "validate", "--corpus", str(corpus_path),
         "--emotion-store", str(emotion),
         "--output", str(tmp_path / "out-a")],
        ["eicl", "validate", "--corpus", str(corpus_path),
         "--emotion-store", str(semantic),
         "--output", str(tmp_path / "out-b")],
        ["eicl", "validate", "--corpus", str(corpus_path),
         "--mode", "icl-baseline", "--semantic-store", str(semantic),
         "--output", str(tmp_path / "out-c")],
    ]
    for cmd in checks:
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=120)
        assert proc.returncode == 0, f"{cmd}: {proc.stdout}{proc.stderr}"
        assert proc.stdout.strip() == "OK"
