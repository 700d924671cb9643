"""Classification tool for the MCP server."""

from fastmcp import FastMCP
from loguru import logger
from pydantic import ValidationError

from ..config.settings import get_settings
from ..documents import MatrixDocument
from ..exceptions import MarkovEmbeddingError
from ..service import classify_document
from ..utils import document_payload, error_response, format_verdict_as_markdown, resolve_output_format


def classify_matrix_impl(
    rows: list[list[float]], label: str | None = None, output_format: str | None = None
) -> dict | str:
    settings = get_settings()
    output_format = resolve_output_format(output_format, settings.default_output_format.value)
    try:
        source = MatrixDocument(dim=len(rows), rows=rows, label=label)
        doc = classify_document(source, settings.tolerances)
    except (ValidationError, MarkovEmbeddingError, ValueError) as e:
        logger.error("Failed to classify matrix", error=str(e), tool="classify_matrix")
        return error_response(str(e), output_format)

    logger.info(
        "Matrix classified",
        dim=source.dim,
        pattern=doc.case_tag.pattern if doc.case_tag else None,
    )
    if output_format == "markdown":
        return format_verdict_as_markdown(doc)
    return document_payload(doc)


def register_classify_matrix(mcp: FastMCP):
    """Registers the classify_matrix tool with the MCP server.

    Args:
        mcp: FastMCP server instance.
    """

    @mcp.tool()
    def classify_matrix(
        rows: list[list[float]], label: str | None = None, output_format: str | None = None
    ) -> dict | str:
        """Report the spectral case and the necessary embeddability conditions of a Markov matrix.

        Agent usage guidelines:
            - Use this tool to see which eigenvalue pattern a 2x2, 3x3 or 4x4 Markov matrix falls in.
            - Use it to check the cheap necessary conditions (determinant, diagonal, Culver, transitivity).
            - Do not use it to decide embeddability; use embed_matrix for that.

        Args:
            rows (list[list[float]]): Row-major entries of a square Markov matrix (rows sum to 1).
            label (str | None): Optional label echoed in the output.
            output_format (str | None): Output format ('json' or 'markdown').
                Defaults to server setting.

        Examples:
            - A 2x2 matrix: {"rows": [[0.9, 0.1], [0.2, 0.8]]}
            - Markdown output: {"rows": [[0.9, 0.1], [0.2, 0.8]], "output_format": "markdown"}

        Returns:
            dict | str: For json: the verdict document without a verdict.
                - input: the matrix echo
                - case_tag: dim, min_poly_degree, pattern, eigen_data
                - necessary: each necessary check and whether it passed
                - error: error message, present only on failure
                For markdown: formatted tables.
        """
        logger.info("classify_matrix tool called", dim=len(rows), output_format=output_format)
        return classify_matrix_impl(rows, label, output_format)
