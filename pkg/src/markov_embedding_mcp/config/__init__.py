"""Markov Embedding MCP configuration package."""

from .logging import setup_logging
from .settings import OutputFormat, Settings, get_settings

__all__ = [
    "setup_logging",
    "get_settings",
    "Settings",
    "OutputFormat",
]
