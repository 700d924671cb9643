"""General utility functions for the Markov embedding toolkit."""

import math

from pydantic import BaseModel


def strip_empty(d):
    """Recursively removes empty fields and lists from a dictionary/list.

    ``False`` and ``0`` are kept: a failed check is information here.
    """
    if isinstance(d, dict):
        return {k: strip_empty(v) for k, v in d.items() if v not in (None, "", [], {})}
    if isinstance(d, list):
        return [strip_empty(x) for x in d if x not in (None, "", [], {})]
    return d


def format_number(value: float | int | None, digits: int = 17) -> str:
    """Format a number with ``digits`` significant digits; non-finite gives ``null``."""
    if value is None:
        return "null"
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if not math.isfinite(value):
        return "null"
    return f"{value:.{digits}g}"


def document_payload(doc: BaseModel) -> dict:
    """JSON-ready dict of a document without empty fields."""
    return strip_empty(doc.model_dump(mode="json"))


def dump_document(doc: BaseModel) -> str:
    """Canonical JSON text of a document.

    Floats are written in their shortest round-trip form, which never needs
    more than 17 significant digits. Non-finite values become ``null``.
    """
    return doc.model_dump_json(indent=2, exclude_none=True)


def error_response(message: str, output_format: str) -> dict | str:
    """Tool error in the requested format."""
    if output_format == "markdown":
        return f"**Error:** {message}"
    return {"error": message}


def resolve_output_format(output_format: str | None, default: str) -> str:
    """Requested format, or the server default; unknown values fall back to json."""
    chosen = (output_format or default).lower()
    return chosen if chosen in ("json", "markdown") else "json"
