"""Input document loading: JSON first, then plain rows, then YAML."""

import json
from typing import Any

import yaml
from loguru import logger
from pydantic import ValidationError

from ..documents import MatrixDocument, ScheduleDocument
from ..exceptions import DocumentError


def _content_lines(text: str) -> list[tuple[int, str]]:
    return [
        (n, line.strip())
        for n, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.lstrip().startswith("#")
    ]


def _looks_numeric(line: str) -> bool:
    token = line.split()[0]
    try:
        float(token)
    except ValueError:
        return False
    return True


def parse_plain_rows(text: str) -> list[list[float]]:
    """Parse whitespace-separated rows; ``#`` starts a comment line.

    Raises:
        DocumentError: A token is not a number or a row has the wrong length.
    """
    rows: list[list[float]] = []
    for n, line in _content_lines(text):
        try:
            row = [float(tok) for tok in line.replace(",", " ").split()]
        except ValueError as exc:
            raise DocumentError(f"not a number: {exc}", line=n) from exc
        if rows and len(row) != len(rows[0]):
            raise DocumentError(f"expected {len(rows[0])} entries, got {len(row)}", line=n)
        rows.append(row)
    if not rows:
        raise DocumentError("empty document")
    return rows


def load_structured(text: str) -> Any:
    """Parse JSON, falling back to YAML.

    Raises:
        DocumentError: Neither parser accepts the text. The line of the
            failure is attached when the parser reports one.
    """
    stripped = text.lstrip()
    if stripped.startswith(("{", "[")):
        try:
            data = json.loads(text)
            logger.debug("Loaded JSON document")
            return data
        except json.JSONDecodeError as exc:
            raise DocumentError(exc.msg, line=exc.lineno) from exc
    try:
        data = yaml.safe_load(text)
        logger.debug("Loaded YAML document")
        return data
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        problem = getattr(exc, "problem", None) or str(exc)
        raise DocumentError(f"invalid YAML: {problem}", line=line) from exc


def _validation_message(exc: ValidationError) -> str:
    first = exc.errors()[0]
    where = ".".join(str(p) for p in first["loc"]) or "document"
    return f"{where}: {first['msg']}"


def load_matrix_document(text: str) -> MatrixDocument:
    """Load a matrix from a JSON or YAML document, or from plain rows.

    A bare array of arrays is accepted and its dimension inferred. A flow
    document is accepted too; its ``result`` matrix is loaded.

    Raises:
        DocumentError: Malformed text or a document failing validation.
    """
    lines = _content_lines(text)
    if lines and not lines[0][1].startswith(("{", "[")) and _looks_numeric(lines[0][1]):
        rows = parse_plain_rows(text)
        data: Any = {"dim": len(rows), "rows": rows}
    else:
        data = load_structured(text)
        if isinstance(data, list):
            data = {"dim": len(data), "rows": data}
        elif isinstance(data, dict) and isinstance(data.get("result"), dict):
            data = data["result"]
    if not isinstance(data, dict):
        raise DocumentError("expected a matrix document or an array of rows")
    try:
        return MatrixDocument.model_validate(data)
    except ValidationError as exc:
        raise DocumentError(_validation_message(exc)) from exc


def load_schedule_document(text: str) -> ScheduleDocument:
    """Load a schedule: a list of segments or ``{"segments": [...]}``.

    Raises:
        DocumentError: Malformed text or a document failing validation.
    """
    data = load_structured(text)
    if isinstance(data, list):
        data = {"segments": data}
    if not isinstance(data, dict):
        raise DocumentError("expected a list of segments")
    try:
        return ScheduleDocument.model_validate(data)
    except ValidationError as exc:
        raise DocumentError(_validation_message(exc)) from exc
