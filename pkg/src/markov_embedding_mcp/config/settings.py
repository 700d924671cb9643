from enum import Enum

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from ..linalg.kernel import Tolerances


class OutputFormat(str, Enum):
    """Output format for CLI and tool responses"""

    JSON = "json"
    MARKDOWN = "markdown"


class Settings(BaseSettings):
    """Main application settings"""

    model_config = SettingsConfigDict(
        env_prefix="MARKOV_EMBEDDING_MCP__",
        env_nested_delimiter="__",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application settings
    app_name: str = Field(
        default="markov-embedding-mcp", description="Application name"
    )
    app_version: str = Field(default="0.1.0", description="Application version")

    # Logging settings
    logging_level: str = Field(default="INFO", description="Logging level")
    logging_format: str = Field(
        default="{time:YYYY-MM-DD HH:mm:ss} | {extra[app]} v{extra[version]} | {level: <8} | {name}:{function}:{line} - {message} | {extra}",
        description="Console log format",
    )

    # Output settings
    default_output_format: OutputFormat = Field(
        default=OutputFormat.JSON,
        description="Default output format for the CLI and tools (json or markdown)",
    )

    # Numerical settings
    tolerances: Tolerances = Field(
        default_factory=Tolerances,
        description="Tolerance policy (override e.g. MARKOV_EMBEDDING_MCP__TOLERANCES__RESIDUAL)",
    )
    hyperbola_grid: int = Field(
        default=200, description="Base grid size per axis for the hyperbola search"
    )
    hyperbola_extent: float = Field(
        default=1e3, description="Bound on |x| and on z, 1/z for the hyperbola grid"
    )
    pbs_max_terms: int = Field(
        default=200, description="Term limit for the Peano-Baker series"
    )
    pbs_tol: float = Field(
        default=1e-12, description="Truncation threshold for Peano-Baker terms"
    )
    search_all_branches: bool = Field(
        default=True,
        description="Enumerate non-principal logarithm branches even after one generator is found",
    )


def get_settings() -> Settings:
    """Retrieve application settings"""
    return Settings()
