"""Exception hierarchy for the Markov embedding toolkit."""


class MarkovEmbeddingError(Exception):
    """Base class for all errors raised by this package."""


class RejectsDimension(MarkovEmbeddingError, ValueError):
    """Matrix dimension outside the supported range 2..4."""


class IllConditioned(MarkovEmbeddingError):
    """A numerical decision sits too close to its threshold to be trusted."""


class SpectrumOnCut(MarkovEmbeddingError, ValueError):
    """An eigenvalue lies on the closed negative real axis or at zero."""


class DegenerateDenominator(MarkovEmbeddingError, ZeroDivisionError):
    """A coefficient formula would divide by a (numerically) vanishing quantity."""


class NonpositiveParameter(MarkovEmbeddingError, ValueError):
    """A parameter that must be strictly positive is not."""


class InfeasibleParams(MarkovEmbeddingError, ValueError):
    """Model parameters do not describe a Markov matrix."""


class NotConverged(MarkovEmbeddingError, RuntimeError):
    """An iterative expansion hit its term limit before reaching tolerance."""


class NotTotallyPositive(MarkovEmbeddingError, ValueError):
    """A 3x3 matrix has a non-positive entry where total positivity is required."""


class DocumentError(MarkovEmbeddingError, ValueError):
    """Malformed input document.

    Args:
        message: Human readable description.
        line: 1-based line number in the source text, when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")
