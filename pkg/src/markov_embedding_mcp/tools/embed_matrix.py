"""Embedding decision tool for the MCP server."""

from fastmcp import FastMCP
from loguru import logger
from pydantic import ValidationError

from ..config.settings import get_settings
from ..documents import MatrixDocument
from ..embedder import HyperbolaOptions
from ..exceptions import MarkovEmbeddingError
from ..service import embed_document
from ..utils import document_payload, error_response, format_verdict_as_markdown, resolve_output_format


def embed_matrix_impl(
    rows: list[list[float]],
    all_branches: bool | None = None,
    label: str | None = None,
    output_format: str | None = None,
) -> dict | str:
    settings = get_settings()
    output_format = resolve_output_format(output_format, settings.default_output_format.value)
    if all_branches is None:
        all_branches = settings.search_all_branches
    options = HyperbolaOptions(grid=settings.hyperbola_grid, extent=settings.hyperbola_extent)
    try:
        source = MatrixDocument(dim=len(rows), rows=rows, label=label)
        doc = embed_document(source, settings.tolerances, all_branches=all_branches, options=options)
    except (ValidationError, MarkovEmbeddingError, ValueError) as e:
        logger.error("Failed to decide embeddability", error=str(e), tool="embed_matrix")
        return error_response(str(e), output_format)

    logger.info(
        "Embedding decided",
        dim=source.dim,
        verdict=doc.verdict,
        reason=doc.reason,
        generators=len(doc.generators),
    )
    if output_format == "markdown":
        return format_verdict_as_markdown(doc)
    return document_payload(doc)


def register_embed_matrix(mcp: FastMCP):
    """Registers the embed_matrix tool with the MCP server.

    Args:
        mcp: FastMCP server instance.
    """

    @mcp.tool()
    def embed_matrix(
        rows: list[list[float]],
        all_branches: bool | None = None,
        label: str | None = None,
        output_format: str | None = None,
    ) -> dict | str:
        """Decide whether a Markov matrix is the exponential of a rate matrix, and return the generators.

        Agent usage guidelines:
            - Use this tool to decide if a 2x2, 3x3 or 4x4 transition matrix comes from a continuous-time Markov chain.
            - Use it to obtain the rate matrices (generators) Q with exp(Q) = M.
            - Do not use it for time-inhomogeneous questions; use g_embed_check for 3x3 matrices.

        Args:
            rows (list[list[float]]): Row-major entries of a square Markov matrix.
            all_branches (bool | None): Enumerate every admissible logarithm branch.
                Defaults to server setting.
            label (str | None): Optional label echoed in the output.
            output_format (str | None): Output format ('json' or 'markdown').
                Defaults to server setting.

        Examples:
            - Kendall 2x2: {"rows": [[0.9, 0.1], [0.2, 0.8]]}
            - Stop at the first generator: {"rows": [[...]], "all_branches": false}

        Returns:
            dict | str: For json: the verdict document.
                - verdict: Embeddable, NotEmbeddable or Undecided
                - reason: why no generator exists, or why no verdict was reached
                - generators: each with branch, construction, residual and matrix
                - uniqueness: Unique, MultipleKnown, PossiblyMore or Unknown
                - case_tag: the spectral case
                - error: error message, present only on failure
                For markdown: formatted tables.
        """
        logger.info(
            "embed_matrix tool called",
            dim=len(rows),
            all_branches=all_branches,
            output_format=output_format,
        )
        return embed_matrix_impl(rows, all_branches, label, output_format)
