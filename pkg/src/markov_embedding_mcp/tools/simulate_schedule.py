"""Time-inhomogeneous flow tool for the MCP server."""

from typing import Any

from fastmcp import FastMCP
from loguru import logger
from pydantic import ValidationError

from ..config.settings import get_settings
from ..documents import ScheduleDocument
from ..exceptions import MarkovEmbeddingError
from ..service import simulate_document
from ..utils import document_payload, error_response, format_flow_as_markdown, resolve_output_format


def simulate_schedule_impl(
    segments: list[dict[str, Any]],
    t: float | None = None,
    method: str = "pbs",
    det_check: bool = True,
    output_format: str | None = None,
) -> dict | str:
    settings = get_settings()
    output_format = resolve_output_format(output_format, settings.default_output_format.value)
    if method not in ("pbs", "product"):
        return error_response(f"unknown method {method!r}; expected pbs or product", output_format)
    try:
        schedule = ScheduleDocument.model_validate({"segments": segments})
        doc = simulate_document(
            schedule,
            settings.tolerances,
            t=t,
            method=method,
            det_check=det_check,
            max_terms=settings.pbs_max_terms,
            pbs_tol=settings.pbs_tol,
        )
    except (ValidationError, MarkovEmbeddingError, ValueError) as e:
        logger.error("Failed to simulate schedule", error=str(e), tool="simulate_schedule")
        return error_response(str(e), output_format)

    logger.info("Schedule simulated", segments=len(segments), method=method, det=doc.det)
    if output_format == "markdown":
        return format_flow_as_markdown(doc)
    return document_payload(doc)


def register_simulate_schedule(mcp: FastMCP):
    """Registers the simulate_schedule tool with the MCP server.

    Args:
        mcp: FastMCP server instance.
    """

    @mcp.tool()
    def simulate_schedule(
        segments: list[dict[str, Any]],
        t: float | None = None,
        method: str = "pbs",
        det_check: bool = True,
        output_format: str | None = None,
    ) -> dict | str:
        """Compute the transition matrix of a time-varying rate matrix schedule.

        Agent usage guidelines:
            - Use this tool to propagate a piecewise constant or sampled generator family over time.
            - Feed the resulting matrix to embed_matrix or g_embed_check.
            - Do not use for a single constant generator if only exp(Q) is needed.

        Segment formats:
            - constant: {"Q": [[...]], "duration": 1.0}
            - sampled: {"samples": [[[...]], [[...]], [[...]]], "step": 0.1}, at least 3 samples

        Args:
            segments (list[dict]): Segments in time order.
            t (float | None): Evaluation time. Defaults to the full span.
            method (str): 'pbs' (Peano-Baker series) or 'product' (product of exponentials).
            det_check (bool): Compare det with exp(integral of trace Q). Defaults to True.
            output_format (str | None): Output format ('json' or 'markdown').
                Defaults to server setting.

        Examples:
            - {"segments": [{"Q": [[-1, 1], [0, 0]], "duration": 0.5}]}

        Returns:
            dict | str: For json: the flow document.
                - result: the transition matrix
                - det, liouville_det, det_check
                - error: error message, present only on failure
                For markdown: formatted tables.
        """
        logger.info("simulate_schedule tool called", segments=len(segments), method=method, t=t)
        return simulate_schedule_impl(segments, t, method, det_check, output_format)
