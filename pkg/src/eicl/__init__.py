"""Emotion-aware in-context learning over precomputed auxiliary outputs.

The pipeline retrieves emotion-similar demonstrations for each query,
attaches probability-weighted soft labels, narrows the candidate label
list before prompting, and scores the parsed predictions. Auxiliary
model outputs (vectors and distributions) arrive as files; chat
endpoints are reached through a mockable gateway.
"""
from .config import MODES, RunConfig, load_run_config
from .corpus import Corpus, Sample, align_label_spaces, filter_corpus, load_corpus
from .errors import (ConfigError, CorpusError, EiclError, GatewayError,
                     ProtocolError, StoreError, TemplateError, TransportError)
from .gateway import (ChatRequest, ChatResponse, ProviderConfig, build_provider,
                      complete_batch)
from .labeling import SoftLabel, build_soft_label, top_k2_emotions
from .labels import LabelSpace, canonical_label
from .metrics import accuracy, macro_f1, per_class_stats
from .partition import CandidatePartition, divide_candidates, full_partition
from .prompting import (Demonstration, ParsedPrediction, RenderedPrompt,
                        parse_response, render_prompt)
from .retrieval import ScoredNeighbor, cosine, top_k_similar
from .runner import (PilotReport, RunReport, RunRecord, run_experiment,
                     run_pilot, run_sweep)
from .store import AuxRecord, AuxStore, get_record, ingest_store, write_store

__version__ = "0.1.0"

__all__ = [
    "AuxRecord", "AuxStore", "CandidatePartition", "ChatRequest", "ChatResponse",
    "ConfigError", "Corpus", "CorpusError", "Demonstration", "EiclError",
    "GatewayError", "LabelSpace", "MODES", "ParsedPrediction", "PilotReport",
    "ProtocolError", "ProviderConfig", "RenderedPrompt", "RunConfig", "RunRecord",
    "RunReport", "Sample", "ScoredNeighbor", "SoftLabel", "StoreError",
    "TemplateError", "TransportError", "accuracy", "align_label_spaces",
    "build_provider", "build_soft_label", "canonical_label", "complete_batch",
    "cosine", "divide_candidates", "filter_corpus", "full_partition",
    "get_record", "ingest_store", "load_corpus", "load_run_config", "macro_f1",
    "parse_response", "per_class_stats", "render_prompt", "run_experiment",
    "run_pilot", "run_sweep", "top_k2_emotions", "top_k_similar", "write_store",
]
