"""Phylogenetic model tool for the MCP server."""

from fastmcp import FastMCP
from loguru import logger
from pydantic import ValidationError

from ..config.settings import get_settings
from ..exceptions import MarkovEmbeddingError
from ..service import ModelKind, model_document
from ..utils import document_payload, error_response, format_verdict_as_markdown, resolve_output_format


def embed_model_impl(
    kind: str, params: dict[str, float], output_format: str | None = None
) -> dict | str:
    settings = get_settings()
    output_format = resolve_output_format(output_format, settings.default_output_format.value)
    try:
        model_kind = ModelKind(kind.lower())
    except ValueError:
        choices = ", ".join(k.value for k in ModelKind)
        logger.error("Unknown model kind", kind=kind, tool="embed_model")
        return error_response(f"unknown model kind {kind!r}; expected one of {choices}", output_format)

    try:
        doc = model_document(model_kind, params, settings.tolerances)
    except (ValidationError, MarkovEmbeddingError, ValueError) as e:
        logger.error("Failed to decide model", kind=kind, error=str(e), tool="embed_model")
        return error_response(str(e), output_format)

    logger.info("Model decided", kind=model_kind.value, verdict=doc.verdict, reason=doc.reason)
    if output_format == "markdown":
        return format_verdict_as_markdown(doc)
    return document_payload(doc)


def register_embed_model(mcp: FastMCP):
    """Registers the embed_model tool with the MCP server.

    Args:
        mcp: FastMCP server instance.
    """

    @mcp.tool()
    def embed_model(
        kind: str, params: dict[str, float], output_format: str | None = None
    ) -> dict | str:
        """Build a nucleotide substitution model matrix from its parameters and decide its embeddability.

        Agent usage guidelines:
            - Use this tool when the transition matrix is given by model parameters instead of entries.
            - Closed-form conditions are used for each model; the answer is exact for simple spectra.
            - Do not use for arbitrary matrices; use embed_matrix instead.

        Models and parameters (states ordered A, G, C, T):
            - equal-input: c1..c4, the column weights (two to four of them)
            - jc: c, constant input over four states
            - tn: a1..a4, kappa1, kappa2
            - k3st: x, y, z
            - k2p: transition, transversion

        Args:
            kind (str): Model name, one of equal-input, jc, tn, k3st, k2p.
            params (dict[str, float]): Model parameters by name.
            output_format (str | None): Output format ('json' or 'markdown').
                Defaults to server setting.

        Examples:
            - Kimura 3ST: {"kind": "k3st", "params": {"x": 0.135, "y": 0.015, "z": 0.085}}
            - Jukes-Cantor: {"kind": "jc", "params": {"c": 0.3}}

        Returns:
            dict | str: For json: the verdict document of the model matrix.
                - model: the kind and parameters
                - input: the model matrix
                - verdict, reason, generators, uniqueness as for embed_matrix
                - error: error message, present only on failure
                For markdown: formatted tables.
        """
        logger.info("embed_model tool called", kind=kind, params=params, output_format=output_format)
        return embed_model_impl(kind, params, output_format)
