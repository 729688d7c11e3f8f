"""Coq-LSP trace extraction: replay proofs and emit trace files for the
goal clone detector."""

from .extract import ExtractResult, ProjectConfig, extract, extract_project
from .lsp import LspClient, LspError, LspTimeout
from .sentences import Sentence, position_at, split_sentences

__all__ = [
    "ExtractResult",
    "LspClient",
    "LspError",
    "LspTimeout",
    "ProjectConfig",
    "Sentence",
    "extract",
    "extract_project",
    "position_at",
    "split_sentences",
]

__version__ = "0.1.0"
