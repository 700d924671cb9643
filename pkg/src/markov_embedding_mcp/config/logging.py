import sys

from loguru import logger

from .settings import get_settings


def setup_logging(level: str | None = None, component: str = "server") -> None:
    """Configure the stderr sink for a front end.

    Args:
        level: Overrides the configured ``logging_level``.
        component: ``server`` or ``cli``; bound into every record.
    """
    settings = get_settings()
    level = (level or settings.logging_level).upper()

    logger.remove()

    # The package disables itself on import; front ends switch it back on
    logger.enable("markov_embedding_mcp")

    # stdout belongs to JSON documents and the MCP stdio transport
    logger.add(
        sys.stderr,
        level=level,
        format=settings.logging_format,
        colorize=False,
        backtrace=True,
        diagnose=False,
        enqueue=component == "server",
        catch=True,
    )

    logger.configure(
        extra={"app": settings.app_name, "version": settings.app_version, "component": component}
    )

    logger.debug(
        "Logging system initialized",
        log_level=level,
        tolerances=settings.tolerances.model_dump(),
    )
