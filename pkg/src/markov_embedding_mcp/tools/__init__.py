"""Tool modules exposing the embedding library over MCP."""

from .classify_matrix import register_classify_matrix
from .embed_matrix import register_embed_matrix
from .embed_model import register_embed_model
from .g_embed_check import register_g_embed_check
from .simulate_schedule import register_simulate_schedule

__all__ = [
    "register_classify_matrix",
    "register_embed_matrix",
    "register_embed_model",
    "register_g_embed_check",
    "register_simulate_schedule",
]
