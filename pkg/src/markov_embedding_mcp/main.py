"""Entry point for the Markov Embedding MCP server."""

from fastmcp import FastMCP
from loguru import logger

from .config import get_settings, setup_logging
from .tools import (
    register_classify_matrix,
    register_embed_matrix,
    register_embed_model,
    register_g_embed_check,
    register_simulate_schedule,
)

TOOL_REGISTRARS = (
    register_classify_matrix,
    register_embed_matrix,
    register_embed_model,
    register_g_embed_check,
    register_simulate_schedule,
)

mcp = FastMCP(
    "Markov Embedding MCP",
    instructions=(
        "Decides whether 2x2, 3x3 and 4x4 Markov matrices are exponentials of rate matrices. "
        "Start with classify_matrix or embed_matrix; use g_embed_check for time-varying rates."
    ),
)

_tools_registered = False


def _register_tools() -> None:
    """Register every tool once."""
    global _tools_registered
    if _tools_registered:
        return
    for register in TOOL_REGISTRARS:
        register(mcp)
    _tools_registered = True


def run() -> None:
    """Run the MCP server over stdio."""
    setup_logging(component="server")
    settings = get_settings()
    logger.info(
        "MCP server initialization started",
        output_format=settings.default_output_format.value,
        residual_tol=settings.tolerances.residual,
        all_branches=settings.search_all_branches,
    )
    _register_tools()
    logger.info("MCP server tools registered, starting server", tools=len(TOOL_REGISTRARS))
    mcp.run()


if __name__ == "__main__":
    run()
