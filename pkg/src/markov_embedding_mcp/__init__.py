"""Markov Embedding MCP - decide whether Markov matrices come from continuous-time chains."""

from loguru import logger

from .classifier import CasePattern, CaseTag, NecessaryReport, classify, necessary_checks
from .config import get_settings
from .embedder import EmbeddingResult, GeneratorCandidate, Reason, Uniqueness, Verdict, decide
from .exceptions import MarkovEmbeddingError
from .inhom import GReport, Schedule, evolve, g_embed_d3, peano_baker
from .linalg import Tolerances, mat_exp, principal_log
from .models import embed_equal_input, embed_k3st, embed_tn, model_recognize

logger.disable("markov_embedding_mcp")

__version__ = "0.1.0"

__all__ = [
    "CasePattern",
    "CaseTag",
    "EmbeddingResult",
    "GReport",
    "GeneratorCandidate",
    "MarkovEmbeddingError",
    "NecessaryReport",
    "Reason",
    "Schedule",
    "Tolerances",
    "Uniqueness",
    "Verdict",
    "classify",
    "decide",
    "embed_equal_input",
    "embed_k3st",
    "embed_tn",
    "evolve",
    "g_embed_d3",
    "get_settings",
    "mat_exp",
    "model_recognize",
    "necessary_checks",
    "peano_baker",
    "principal_log",
]
