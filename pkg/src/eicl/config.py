"""Declarative run configuration.

A run is described by a JSON config file; command-line flags override
file values field by field. Range checks happen at construction time, so
a bad hyperparameter fails before any corpus or store file is touched.

The `effective` view resolves everything mode-dependent: the two label
ablations collapse onto the full pipeline with forced knobs (alpha 0, or
k3 equal to the aligned size), which is what makes their prompts and
reports bit-comparable with the equivalent full-pipeline run.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigError
from .gateway import ProviderConfig

MODES = ("e-icl", "w/o ese", "w/o dsl", "w/o eep", "icl-baseline", "zero-shot")

_MODE_ALIASES = {
    "e-icl": "e-icl",
    "eicl": "e-icl",
    "w/o ese": "w/o ese",
    "w/o-ese": "w/o ese",
    "wo ese": "w/o ese",
    "wo-ese": "w/o ese",
    "without ese": "w/o ese",
    "w/o dsl": "w/o dsl",
    "w/o-dsl": "w/o dsl",
    "wo dsl": "w/o dsl",
    "wo-dsl": "w/o dsl",
    "without dsl": "w/o dsl",
    "w/o eep": "w/o eep",
    "w/o-eep": "w/o eep",
    "wo eep": "w/o eep",
    "wo-eep": "w/o eep",
    "without eep": "w/o eep",
    "icl-baseline": "icl-baseline",
    "icl baseline": "icl-baseline",
    "zero-shot": "zero-shot",
    "zero shot": "zero-shot",
    "zeroshot": "zero-shot",
}

# Modes that build demonstrations from auxiliary-model distributions.
AUX_LABEL_MODES = ("e-icl", "w/o ese", "w/o dsl", "w/o eep")


def normalize_mode(raw: str) -> str:
    key = " ".join(str(raw).strip().lower().split())
    try:
        return _MODE_ALIASES[key]
    except KeyError:
        raise ConfigError(
            f"unknown mode '{raw}'; expected one of: {', '.join(MODES)}"
        ) from None


@dataclass(frozen=True)
class RunConfig:
    corpus_path: str
    labels_path: str = ""
    emotion_store_path: str = ""
    semantic_store_path: str = ""
    mode: str = "e-icl"
    alpha: float = 0.2
    k1: int = 5
    k2: int = 3
    k3: int | None = None
    template_id: str = "default"
    provider: ProviderConfig = field(
        default_factory=lambda: ProviderConfig(provider_id="echo-first-possible")
    )
    output_dir: str = "out"
    seed: int | None = None
    max_queries: int | None = None
    pilot_bins: int = 4
    pilot_sets: int = 8
    pilot_set_size: int = 5

    def __post_init__(self):
        object.__setattr__(self, "mode", normalize_mode(self.mode))
        if not self.corpus_path:
            raise ConfigError("corpus_path is required")
        if not 0.0 <= self.alpha < 1.0:
            raise ConfigError(f"alpha must be in [0, 1), got {self.alpha}")
        for name in ("k1", "k2", "pilot_bins", "pilot_sets", "pilot_set_size"):
            value = getattr(self, name)
            if value < 1:
                raise ConfigError(f"{name} must be >= 1, got {value}")
        if self.k3 is not None and self.k3 < 1:
            raise ConfigError(f"k3 must be >= 1, got {self.k3}")
        if self.max_queries is not None and self.max_queries < 1:
            raise ConfigError(f"max_queries must be >= 1, got {self.max_queries}")
        if self.mode in AUX_LABEL_MODES and not self.emotion_store_path:
            raise ConfigError(f"mode '{self.mode}' needs emotion_store_path")
        if self.mode == "icl-baseline" and not self.semantic_store_path:
            raise ConfigError("mode 'icl-baseline' needs semantic_store_path")
        if self.mode == "w/o ese" and not self.semantic_store_path and self.seed is None:
            raise ConfigError(
                "mode 'w/o ese' without a semantic store retrieves at random "
                "and therefore needs an explicit seed"
            )

    def effective(self, aligned_size: int) -> "RunConfig":
        """Resolve mode-forced knobs and defaults against the aligned space.

        The label-side ablations are literally the full pipeline with one
        knob forced, so they normalize to mode 'e-icl' here; the retrieval
        ablation is a genuinely different experiment and keeps its name.
        """
        mode, alpha, k3 = self.mode, self.alpha, self.k3
        template_id = self.template_id
        if mode == "w/o dsl":
            mode, alpha = "e-icl", 0.0
        elif mode == "w/o eep":
            mode, k3 = "e-icl", aligned_size
        if mode in ("icl-baseline", "zero-shot"):
            k3 = aligned_size
        if mode == "zero-shot" and template_id == "default":
            template_id = "zero-shot"
        if k3 is None:
            k3 = math.ceil(aligned_size / 4)
        if k3 > aligned_size:
            raise ConfigError(f"k3={k3} exceeds the aligned space size {aligned_size}")
        if self.k2 > aligned_size:
            raise ConfigError(f"k2={self.k2} exceeds the aligned space size {aligned_size}")
        return replace(self, mode=mode, alpha=alpha, k3=k3, template_id=template_id)

    def snapshot(self) -> dict:
        """Everything needed to re-run the experiment.

        The output directory is deliberately not part of the snapshot: it
        is where results land, not what the experiment is, and equivalent
        runs written to different directories must stay bit-comparable.
        """
        return {
            "alpha": self.alpha,
            "corpus_path": self.corpus_path,
            "emotion_store_path": self.emotion_store_path,
            "k1": self.k1,
            "k2": self.k2,
            "k3": self.k3,
            "labels_path": self.labels_path,
            "max_queries": self.max_queries,
            "mode": self.mode,
            "provider": self.provider.snapshot(),
            "seed": self.seed,
            "semantic_store_path": self.semantic_store_path,
            "template_id": self.template_id,
        }


_TOP_LEVEL_KEYS = {f.name for f in fields(RunConfig)}


def load_run_config(config_path: str | Path | None = None,
                    overrides: dict | None = None) -> RunConfig:
    """Merge a JSON config file with flag overrides (flags win)."""
    raw: dict = {}
    if config_path:
        path = Path(config_path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: config root must be a JSON object")
    unknown = set(raw) - _TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    provider_raw = dict(raw.pop("provider", {}) or {})
    if overrides:
        for key, value in overrides.items():
            if value is None:
                continue
            if key == "provider":
                provider_raw.update(value)
            elif key in _TOP_LEVEL_KEYS:
                raw[key] = value
            else:
                raise ConfigError(f"unknown config override '{key}'")
    if not provider_raw:
        provider_raw = {"provider_id": "echo-first-possible"}
    provider = (provider_raw if isinstance(provider_raw, ProviderConfig)
                else ProviderConfig.from_dict(provider_raw))
    raw["provider"] = provider
    if "corpus_path" not in raw:
        raise ConfigError("corpus_path is required")
    return RunConfig(**raw)
