"""Utility functions for the Markov embedding toolkit."""

from .formatters import (
    format_flow_as_markdown,
    format_greport_as_markdown,
    format_matrix_as_markdown,
    format_matrix_document_as_markdown,
    format_verdict_as_markdown,
)
from .general import (
    document_payload,
    dump_document,
    error_response,
    format_number,
    resolve_output_format,
    strip_empty,
)
from .loaders import (
    load_matrix_document,
    load_schedule_document,
    load_structured,
    parse_plain_rows,
)

__all__ = [
    # General utilities
    "strip_empty",
    "format_number",
    "document_payload",
    "dump_document",
    "error_response",
    "resolve_output_format",
    # Formatters
    "format_matrix_as_markdown",
    "format_matrix_document_as_markdown",
    "format_verdict_as_markdown",
    "format_greport_as_markdown",
    "format_flow_as_markdown",
    # Loaders
    "load_structured",
    "parse_plain_rows",
    "load_matrix_document",
    "load_schedule_document",
]
