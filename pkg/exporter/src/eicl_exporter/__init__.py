"""Vector store exporter for the emotion recognition pipeline."""

from .corpus import CorpusRow, load_corpus_rows
from .errors import ExportError
from .export import ExportResult, ExportSpec, export
from .storefile import write_store_file

__version__ = "0.1.0"

__all__ = [
    "CorpusRow",
    "ExportError",
    "ExportResult",
    "ExportSpec",
    "export",
    "load_corpus_rows",
    "write_store_file",
]
