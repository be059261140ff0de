"""Prompt rendering and response parsing.

Templates are versioned text files shipped in-repo (``templates/<id>.txt``)
with named placeholders {instruction}{demos}{possible}{impossible}{query};
an optional ``<id>.system.txt`` supplies the system message. Rendering is
deterministic: identical inputs yield byte-identical prompts, and runs
record the template id so prompt changes stay auditable.

Payload text (demonstrations, query) is escaped so it can never fake a
section break: every occurrence of the section delimiter is prefixed with
a backslash, never dropped.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .corpus import Sample
from .errors import TemplateError
from .labeling import SoftLabel
from .labels import LabelSpace
from .partition import CandidatePartition

SECTION_DELIMITER = "###"

# Line prefixes the stock templates use for the candidate lists; the
# echo-first-possible mock provider locates the list through these.
POSSIBLE_LINE_PREFIX = "Candidate emotions (most likely first): "
IMPOSSIBLE_LINE_PREFIX = "Excluded emotions (pick one only if no candidate fits): "
FULL_LIST_LINE_PREFIX = "Emotion categories: "

# How each stock template renders a demonstration's soft label.
_DEMO_STYLES = {"default": "weighted", "multilabel": "plain", "zero-shot": "weighted"}

_EMPTY_LIST_TEXT = "(none)"


@dataclass(frozen=True)
class Demonstration:
    sample: Sample
    soft_label: SoftLabel
    score: float


@dataclass(frozen=True)
class RenderedPrompt:
    system_text: str
    user_text: str
    template_id: str
    byte_length: int


@dataclass(frozen=True)
class ParsedPrediction:
    """Either a label from the aligned space or the unparseable raw text."""

    label: str | None
    raw: str

    @property
    def is_unparseable(self) -> bool:
        return self.label is None


def escape_payload(text: str) -> str:
    """Escape the section delimiter inside user-supplied text."""
    return text.replace(SECTION_DELIMITER, "\\" + SECTION_DELIMITER)


def _template_dir() -> Path:
    return Path(resources.files("eicl").joinpath("templates"))  # type: ignore[arg-type]


def load_template(template_id: str) -> tuple[str, str]:
    """Return (user_template, system_text) for a template id or file path."""
    as_path = Path(template_id)
    if as_path.suffix == ".txt" and as_path.exists():
        body = as_path.read_text(encoding="utf-8")
        system_path = as_path.with_name(as_path.stem + ".system.txt")
    else:
        base = _template_dir()
        body_path = base / f"{template_id}.txt"
        if not body_path.exists():
            raise TemplateError(f"unknown template id '{template_id}'")
        body = body_path.read_text(encoding="utf-8")
        system_path = base / f"{template_id}.system.txt"
    system = system_path.read_text(encoding="utf-8").strip() if system_path.exists() else ""
    return body, system


def format_weight(w: float) -> str:
    return f"{w:.2f}"


def render_soft_label(soft: SoftLabel, style: str = "weighted") -> str:
    """Comma-joined label list, descending weight; weights to 2 decimals."""
    if style == "plain":
        return ", ".join(label for label, _ in soft.entries)
    return ", ".join(f"{label} ({format_weight(w)})" for label, w in soft.entries)


def _render_demo(demo: Demonstration, style: str) -> str:
    return (
        f"Text: {escape_payload(demo.sample.text)}\n"
        f"Emotions: {render_soft_label(demo.soft_label, style)}"
    )


def _render_label_list(labels: tuple[str, ...]) -> str:
    return ", ".join(labels) if labels else _EMPTY_LIST_TEXT


def render_prompt(query: Sample, demos: list[Demonstration],
                  partition: CandidatePartition, template_id: str,
                  demo_style: str | None = None) -> RenderedPrompt:
    """Fill the template's sections in fixed order; byte-deterministic."""
    body, system = load_template(template_id)
    if not demos and "{demos}" in body:
        raise ValueError(f"template '{template_id}' needs at least one demonstration")
    style = demo_style or _DEMO_STYLES.get(template_id, "weighted")
    n = len(partition.possible) + len(partition.impossible)
    fields = {
        "instruction": (
            f"Classify the emotion expressed in a short text into exactly one of "
            f"{n} emotion categories."
        ),
        "demos": "\n\n".join(_render_demo(d, style) for d in demos),
        "possible": _render_label_list(partition.possible),
        "impossible": _render_label_list(partition.impossible),
        "query": escape_payload(query.text),
    }
    try:
        user_text = body.format(**fields)
    except (KeyError, IndexError, ValueError) as exc:
        raise TemplateError(f"template '{template_id}' has a bad placeholder: {exc}") from exc
    return RenderedPrompt(
        system_text=system,
        user_text=user_text,
        template_id=template_id,
        byte_length=len(system.encode("utf-8")) + len(user_text.encode("utf-8")),
    )


def _canonicalize_free_text(raw: str) -> str:
    return " ".join(raw.replace("_", " ").casefold().split())


def parse_response(raw: str, aligned: LabelSpace,
                   partition: CandidatePartition) -> ParsedPrediction:
    """Map free-form endpoint text back into the aligned label space.

    Exact match (after canonicalization and stripping surrounding
    punctuation) wins; otherwise whole-word label mentions are collected
    and ambiguity is resolved by partition order, possible labels first.
    Unparseable text is a value, not an error, so evaluation can count it.
    """
    canon = _canonicalize_free_text(raw)
    exact = canon.strip(".,;:!?\"'`()[]")
    if exact in aligned:
        return ParsedPrediction(label=exact, raw=raw)
    found = {
        label
        for label in aligned.labels
        if re.search(rf"(?<!\w){re.escape(label)}(?!\w)", canon)
    }
    if found:
        for label in partition.resolution_order():
            if label in found:
                return ParsedPrediction(label=label, raw=raw)
    return ParsedPrediction(label=None, raw=raw)
