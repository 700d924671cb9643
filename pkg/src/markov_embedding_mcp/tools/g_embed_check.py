"""g-embeddability tool for the MCP server."""

from fastmcp import FastMCP
from loguru import logger
from pydantic import ValidationError

from ..config.settings import get_settings
from ..documents import MatrixDocument
from ..exceptions import MarkovEmbeddingError
from ..service import gcheck_document
from ..utils import document_payload, error_response, format_greport_as_markdown, resolve_output_format


def g_embed_check_impl(rows: list[list[float]], output_format: str | None = None) -> dict | str:
    settings = get_settings()
    output_format = resolve_output_format(output_format, settings.default_output_format.value)
    try:
        source = MatrixDocument(dim=len(rows), rows=rows)
        doc = gcheck_document(source, settings.tolerances)
    except (ValidationError, MarkovEmbeddingError, ValueError) as e:
        logger.error("Failed to check g-embeddability", error=str(e), tool="g_embed_check")
        return error_response(str(e), output_format)

    logger.info("g-embeddability checked", verdict=doc.verdict, route=doc.route)
    if output_format == "markdown":
        return format_greport_as_markdown(doc)
    return document_payload(doc)


def register_g_embed_check(mcp: FastMCP):
    """Registers the g_embed_check tool with the MCP server.

    Args:
        mcp: FastMCP server instance.
    """

    @mcp.tool()
    def g_embed_check(rows: list[list[float]], output_format: str | None = None) -> dict | str:
        """Decide whether a 3x3 Markov matrix arises from a time-inhomogeneous chain.

        Agent usage guidelines:
            - Use this tool for 3x3 matrices that embed_matrix rejects, to see if a time-varying rate matrix fits.
            - The verdict may be Undecided for totally positive matrices with small determinant.
            - Do not use for 2x2 or 4x4 matrices.

        Args:
            rows (list[list[float]]): Row-major entries of a 3x3 Markov matrix.
            output_format (str | None): Output format ('json' or 'markdown').
                Defaults to server setting.

        Examples:
            - {"rows": [[0.5, 0.25, 0.25], [0.25, 0.5, 0.25], [0.25, 0.25, 0.5]]}

        Returns:
            dict | str: For json: the g-report document.
                - verdict: GEmbeddable, NotGEmbeddable or Undecided
                - route: which rule decided
                - necessary_ok, det, b_quantity, factor_bound, det_factor_bound
                - error: error message, present only on failure
                For markdown: formatted table.
        """
        logger.info("g_embed_check tool called", output_format=output_format)
        return g_embed_check_impl(rows, output_format)
