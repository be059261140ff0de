"""End-to-end experiment driver.

A run walks every test query through the full pipeline: fetch the query's
auxiliary record, retrieve demonstrations from the train split, build
each demonstration's soft label, split the query's candidate labels into
possible and impossible sets, render the prompt, dispatch it, and parse
the reply back into the label space. Aggregation happens once per run,
single-threaded, over the per-query records.

Modes select data sources, not code paths. The label-side ablations
(alpha forced to 0, k3 forced to the aligned size) resolve onto the full
pipeline inside RunConfig.effective, so their reports are bit-comparable
with explicitly configured equivalents. The retrieval ablation swaps the
vector file (or falls back to seeded random choice); the plain-ICL
baseline uses semantic vectors, hard labels, and the full label list; the
zero-shot baseline sends no demonstrations at all.

The sweep driver shares one retrieval pass across all axis values, since
none of the swept knobs (alpha, k2, k3) influence which demonstrations
are retrieved. The pilot harness answers every query against each fixed
example set and aggregates per-bin accuracy over equal-width cosine
similarity bins spanning [-1, 1].
"""
from __future__ import annotations

import random
from dataclasses import dataclass, replace

from .config import RunConfig
from .corpus import (Corpus, Sample, align_label_spaces, filter_corpus,
                     load_corpus, load_label_space)
from .errors import ConfigError, EiclError, StoreError
from .gateway import (ChatRequest, ChatResponse, build_provider,
                      complete_batch, trace_line)
from .labeling import SoftLabel, build_soft_label, top_k2_emotions
from .labels import LabelSpace
from .metrics import ClassStats, accuracy, macro_f1, per_class_stats
from .partition import CandidatePartition, divide_candidates, full_partition
from .prompting import ParsedPrediction, Demonstration, parse_response, render_prompt
from .retrieval import cosine, top_k_similar
from .store import AuxStore, get_record, ingest_store, project_distribution

SWEEP_AXES = ("alpha", "k2", "k3")

# Effective modes whose demonstrations and candidate partitions consume
# the emotion store's distributions.
_AUX_CONSUMING_MODES = ("e-icl", "w/o ese")


@dataclass(frozen=True)
class RunRecord:
    """Per-query trace: every pipeline stage's output, in order."""

    query_id: str
    gold: str
    demos: tuple[tuple[str, float], ...]
    soft_labels: tuple[tuple[tuple[str, float], ...], ...]
    possible: tuple[str, ...]
    impossible: tuple[str, ...]
    template_id: str
    raw_response: str
    prediction: str | None
    failure: str = ""


@dataclass(frozen=True)
class RunReport:
    config: dict
    aligned_labels: tuple[str, ...]
    accuracy: float
    macro_f1: float
    per_class: tuple[ClassStats, ...]
    unparseable_count: int
    failure_count: int
    records: tuple[RunRecord, ...]


@dataclass(frozen=True)
class PilotBin:
    low: float
    high: float
    count: int
    accuracy: float | None


@dataclass(frozen=True)
class PilotReport:
    config: dict
    bins: tuple[PilotBin, ...]
    total_queries: int
    accuracy: float
    macro_f1: float


@dataclass(frozen=True)
class RunContext:
    """Loaded, aligned, coverage-checked inputs plus the resolved config."""

    config: RunConfig
    corpus: Corpus
    aligned: LabelSpace
    emotion_store: AuxStore | None
    retrieval_store: AuxStore | None
    retrieval_kind: str


def prepare_run(config: RunConfig) -> RunContext:
    space = load_label_space(config.labels_path) if config.labels_path else None
    corpus = load_corpus(config.corpus_path, space)
    emotion_store = (ingest_store(config.emotion_store_path)
                     if config.emotion_store_path else None)
    semantic_store = (ingest_store(config.semantic_store_path)
                      if config.semantic_store_path else None)
    if emotion_store is not None:
        aligned = align_label_spaces(emotion_store.aux_label_space, corpus.label_space)
        corpus = filter_corpus(corpus, aligned)
    else:
        aligned = corpus.label_space
    cfg = config.effective(len(aligned))
    if cfg.mode == "zero-shot":
        kind, retrieval_store = "none", None
    elif cfg.mode == "icl-baseline":
        kind, retrieval_store = "semantic", semantic_store
    elif cfg.mode == "w/o ese":
        if semantic_store is not None:
            kind, retrieval_store = "semantic", semantic_store
        else:
            kind, retrieval_store = "random", None
    else:
        kind, retrieval_store = "emotion", emotion_store
    ctx = RunContext(
        config=cfg,
        corpus=corpus,
        aligned=aligned,
        emotion_store=emotion_store,
        retrieval_store=retrieval_store,
        retrieval_kind=kind,
    )
    _check_coverage(ctx)
    return ctx


def _check_coverage(ctx: RunContext) -> None:
    """Every corpus id a mode will dereference must exist in its store."""
    cfg = ctx.config
    wanted = [s.id for s in ctx.corpus.train] + [s.id for s in ctx.corpus.test]
    checks: list[tuple[str, AuxStore | None]] = []
    if cfg.mode in _AUX_CONSUMING_MODES:
        checks.append(("emotion", ctx.emotion_store))
    if ctx.retrieval_kind == "semantic":
        checks.append(("semantic", ctx.retrieval_store))
    for name, store in checks:
        if store is None:
            raise ConfigError(f"mode '{cfg.mode}' needs a {name} store")
        for sid in wanted:
            if sid not in store:
                raise StoreError(
                    f"{name} store: auxiliary output absent for sample '{sid}'"
                )


def validate_inputs(config: RunConfig) -> list[str]:
    """Collect every input inconsistency instead of stopping at the first."""
    findings: list[str] = []
    space = None
    if config.labels_path:
        try:
            space = load_label_space(config.labels_path)
        except EiclError as exc:
            return [str(exc)]
    try:
        corpus = load_corpus(config.corpus_path, space)
    except EiclError as exc:
        return findings + [str(exc)]

    stores: dict[str, AuxStore] = {}
    for name, path in (("emotion", config.emotion_store_path),
                       ("semantic", config.semantic_store_path)):
        if not path:
            continue
        try:
            stores[name] = ingest_store(path)
        except EiclError as exc:
            findings.append(f"{name} store: {exc}")

    aligned = corpus.label_space
    if "emotion" in stores:
        try:
            aligned = align_label_spaces(stores["emotion"].aux_label_space,
                                         corpus.label_space)
            corpus = filter_corpus(corpus, aligned)
        except EiclError as exc:
            findings.append(str(exc))
            return findings
    try:
        config.effective(len(aligned))
    except EiclError as exc:
        findings.append(str(exc))

    wanted = [s.id for s in corpus.train] + [s.id for s in corpus.test]
    for name, store in sorted(stores.items()):
        missing = [sid for sid in wanted if sid not in store]
        for sid in missing[:20]:
            findings.append(f"{name} store: auxiliary output absent for sample '{sid}'")
        if len(missing) > 20:
            findings.append(f"{name} store: {len(missing) - 20} further ids absent")
    return findings


def _query_pool(ctx: RunContext) -> tuple[Sample, ...]:
    queries = ctx.corpus.test
    if ctx.config.max_queries is not None:
        queries = queries[:ctx.config.max_queries]
    return queries


def _retrieve_all(ctx: RunContext) -> dict[str, tuple[tuple[str, float], ...]]:
    """Demonstration ids and scores per query id.

    Random fallback retrieval seeds one generator per query from the run
    seed and the query id, so results are independent of query order.
    """
    cfg = ctx.config
    queries = _query_pool(ctx)
    if cfg.mode == "zero-shot":
        return {q.id: () for q in queries}
    out: dict[str, tuple[tuple[str, float], ...]] = {}
    if ctx.retrieval_kind == "random":
        train_ids = sorted(s.id for s in ctx.corpus.train)
        k = min(cfg.k1, len(train_ids))
        for q in queries:
            rng = random.Random(f"{cfg.seed}:{q.id}")
            out[q.id] = tuple((sid, 0.0) for sid in rng.sample(train_ids, k))
        return out
    store = ctx.retrieval_store
    assert store is not None
    exclude = store.ids() - {s.id for s in ctx.corpus.train}
    for q in queries:
        vec = get_record(store, q.id).vector
        neighbors = top_k_similar(vec, store, cfg.k1, exclude_ids=exclude)
        out[q.id] = tuple((n.sample_id, n.score) for n in neighbors)
    return out


def _soft_label_for(ctx: RunContext, sample: Sample) -> SoftLabel:
    cfg = ctx.config
    if cfg.mode == "icl-baseline":
        return SoftLabel(entries=((sample.gold, 1.0),), gold=sample.gold)
    assert ctx.emotion_store is not None
    rec = get_record(ctx.emotion_store, sample.id)
    projected = project_distribution(rec.probs, ctx.emotion_store.aux_label_space,
                                     ctx.aligned)
    predicted = top_k2_emotions(projected, ctx.aligned, cfg.k2)
    return build_soft_label(sample.gold, predicted, cfg.alpha, ctx.aligned)


def _demonstrations(ctx: RunContext, refs: tuple[tuple[str, float], ...],
                    train_by_id: dict[str, Sample]) -> list[Demonstration]:
    return [
        Demonstration(sample=train_by_id[sid], soft_label=_soft_label_for(ctx, train_by_id[sid]),
                      score=score)
        for sid, score in refs
    ]


def _partition_for(ctx: RunContext, query: Sample) -> CandidatePartition:
    cfg = ctx.config
    if cfg.mode in ("zero-shot", "icl-baseline"):
        return full_partition(ctx.aligned)
    assert ctx.emotion_store is not None
    rec = get_record(ctx.emotion_store, query.id)
    projected = project_distribution(rec.probs, ctx.emotion_store.aux_label_space,
                                     ctx.aligned)
    return divide_candidates(projected, cfg.k3, ctx.aligned)


def _demo_style(ctx: RunContext) -> str | None:
    return "plain" if ctx.config.mode == "icl-baseline" else None


def _chat_request(ctx: RunContext, system_text: str, user_text: str,
                  tag: str) -> ChatRequest:
    p = ctx.config.provider
    return ChatRequest(
        model_id=p.model_id or p.provider_id,
        system_text=system_text,
        user_text=user_text,
        temperature=p.temperature,
        max_tokens=p.max_tokens,
        request_tag=tag,
    )


def build_provider_for(ctx: RunContext):
    """Provider from the run config; the oracle mock gets the gold map."""
    golds = {s.id: s.gold for s in ctx.corpus.test}
    return build_provider(ctx.config.provider, oracle_golds=golds)


def run_on_context(ctx: RunContext, provider,
                   retrieval: dict[str, tuple[tuple[str, float], ...]] | None = None,
                   trace_sink: list[str] | None = None) -> RunReport:
    cfg = ctx.config
    if retrieval is None:
        retrieval = _retrieve_all(ctx)
    train_by_id = {s.id: s for s in ctx.corpus.train}
    style = _demo_style(ctx)
    queries = _query_pool(ctx)
    plans = []
    reqs = []
    for q in queries:
        refs = retrieval[q.id]
        demos = _demonstrations(ctx, refs, train_by_id)
        part = _partition_for(ctx, q)
        prompt = render_prompt(q, demos, part, cfg.template_id, demo_style=style)
        plans.append((q, refs, demos, part))
        reqs.append(_chat_request(ctx, prompt.system_text, prompt.user_text, q.id))
    results = complete_batch(provider, reqs)

    records = []
    for (q, refs, demos, part), req, res in zip(plans, reqs, results):
        if trace_sink is not None:
            trace_sink.append(trace_line(req, res))
        if isinstance(res, ChatResponse):
            parsed = parse_response(res.text, ctx.aligned, part)
            raw, failure = res.text, ""
        else:
            parsed, raw, failure = ParsedPrediction(label=None, raw=""), "", str(res)
        records.append(RunRecord(
            query_id=q.id,
            gold=q.gold,
            demos=refs,
            soft_labels=tuple(d.soft_label.entries for d in demos),
            possible=part.possible,
            impossible=part.impossible,
            template_id=cfg.template_id,
            raw_response=raw,
            prediction=parsed.label,
            failure=failure,
        ))

    golds = [r.gold for r in records]
    preds = [r.prediction for r in records]
    return RunReport(
        config=cfg.snapshot(),
        aligned_labels=ctx.aligned.labels,
        accuracy=accuracy(golds, preds),
        macro_f1=macro_f1(ctx.aligned, golds, preds),
        per_class=tuple(per_class_stats(ctx.aligned, golds, preds)),
        unparseable_count=sum(1 for r in records if not r.failure and r.prediction is None),
        failure_count=sum(1 for r in records if r.failure),
        records=tuple(records),
    )


def run_experiment(config: RunConfig, provider=None,
                   trace_sink: list[str] | None = None) -> RunReport:
    ctx = prepare_run(config)
    if provider is None:
        provider = build_provider_for(ctx)
    return run_on_context(ctx, provider, trace_sink=trace_sink)


def run_sweep(config: RunConfig, axis: str, values,
              provider=None) -> list[tuple[float, RunReport]]:
    """One full run per axis value over a shared retrieval pass."""
    if axis not in SWEEP_AXES:
        raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}, got '{axis}'")
    values = list(values)
    if not values:
        raise ConfigError("sweep needs at least one value")
    ctx = prepare_run(config)
    if provider is None:
        provider = build_provider_for(ctx)
    retrieval = _retrieve_all(ctx)
    out = []
    for value in values:
        if axis == "alpha":
            varied = replace(config, alpha=float(value))
        else:
            varied = replace(config, **{axis: int(value)})
        ctx_v = replace(ctx, config=varied.effective(len(ctx.aligned)))
        out.append((value, run_on_context(ctx_v, provider, retrieval=retrieval)))
    return out


def run_pilot(config: RunConfig, provider=None,
              trace_sink: list[str] | None = None) -> PilotReport:
    """Fixed-demonstration probe of accuracy as a function of similarity.

    Example sets are sampled from the train split with the run seed. Each
    query is answered once per set, assigned to an equal-width similarity
    bin by its maximum cosine to the set's members, and per-bin accuracy
    is aggregated across sets. Empty bins stay in the report with a null
    accuracy so bin indices always line up across configurations.
    """
    ctx = prepare_run(config)
    cfg = ctx.config
    if ctx.retrieval_store is None:
        raise ConfigError(
            f"pilot needs a vector store to score similarity; mode '{cfg.mode}' has none"
        )
    if cfg.seed is None:
        raise ConfigError("pilot example-set sampling needs an explicit seed")
    if provider is None:
        provider = build_provider_for(ctx)
    store = ctx.retrieval_store
    train_by_id = {s.id: s for s in ctx.corpus.train}
    train_ids = sorted(train_by_id)
    set_size = min(cfg.pilot_set_size, len(train_ids))
    rng = random.Random(f"{cfg.seed}:pilot")
    example_sets = [tuple(rng.sample(train_ids, set_size))
                    for _ in range(cfg.pilot_sets)]

    queries = _query_pool(ctx)
    parts = {q.id: _partition_for(ctx, q) for q in queries}
    style = _demo_style(ctx)

    plans = []
    reqs = []
    for sset in example_sets:
        member_vecs = [get_record(store, sid).vector for sid in sset]
        for q in queries:
            qvec = get_record(store, q.id).vector
            pairs = tuple((sid, cosine(qvec, mv))
                          for sid, mv in zip(sset, member_vecs))
            best = max(score for _, score in pairs)
            demos = _demonstrations(ctx, pairs, train_by_id)
            prompt = render_prompt(q, demos, parts[q.id], cfg.template_id,
                                   demo_style=style)
            plans.append((q, best))
            reqs.append(_chat_request(ctx, prompt.system_text, prompt.user_text, q.id))
    results = complete_batch(provider, reqs)

    bins = cfg.pilot_bins
    width = 2.0 / bins
    counts = [0] * bins
    hits = [0] * bins
    golds: list[str] = []
    preds: list[str | None] = []
    for (q, best), req, res in zip(plans, reqs, results):
        if trace_sink is not None:
            trace_sink.append(trace_line(req, res))
        idx = min(max(int((best + 1.0) / width), 0), bins - 1)
        counts[idx] += 1
        pred = None
        if isinstance(res, ChatResponse):
            pred = parse_response(res.text, ctx.aligned, parts[q.id]).label
        golds.append(q.gold)
        preds.append(pred)
        if pred == q.gold:
            hits[idx] += 1

    rows = []
    for b in range(bins):
        low = -1.0 + b * width
        high = 1.0 if b == bins - 1 else -1.0 + (b + 1) * width
        acc = hits[b] / counts[b] if counts[b] else None
        rows.append(PilotBin(low=low, high=high, count=counts[b], accuracy=acc))
    snapshot = cfg.snapshot()
    snapshot["pilot"] = {"bins": bins, "sets": cfg.pilot_sets, "set_size": set_size}
    return PilotReport(config=snapshot, bins=tuple(rows),
                       total_queries=sum(counts),
                       accuracy=accuracy(golds, preds),
                       macro_f1=macro_f1(ctx.aligned, golds, preds))
