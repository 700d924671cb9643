"""Result types of the decision engine."""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..classifier import CaseTag
from ..linalg import Mat


class Verdict(str, Enum):
    EMBEDDABLE = "Embeddable"
    NOT_EMBEDDABLE = "NotEmbeddable"
    UNDECIDED = "Undecided"


class Uniqueness(str, Enum):
    UNIQUE = "Unique"
    MULTIPLE_KNOWN = "MultipleKnown"
    POSSIBLY_MORE = "PossiblyMore"
    UNKNOWN = "Unknown"


class Reason(str, Enum):
    """Why a matrix was rejected, or why no verdict could be reached."""

    DET_NONPOSITIVE = "DET_NONPOSITIVE"
    ZERO_DIAGONAL = "ZERO_DIAGONAL"
    NEGATIVE_EIGENVALUE_CULVER = "NEGATIVE_EIGENVALUE_CULVER"
    UNIT_CIRCLE = "UNIT_CIRCLE"
    TRANSITIVITY = "TRANSITIVITY"
    EIGENVALUE_OUT_OF_RANGE = "EIGENVALUE_OUT_OF_RANGE"
    LOG_NOT_GENERATOR = "LOG_NOT_GENERATOR"
    NO_BRANCH_FEASIBLE = "NO_BRANCH_FEASIBLE"
    K_RANGE_EMPTY = "K_RANGE_EMPTY"
    ABOVE_EXTREMAL_PARAMETER = "ABOVE_EXTREMAL_PARAMETER"
    SEARCH_INCONCLUSIVE = "SEARCH_INCONCLUSIVE"
    ILL_CONDITIONED = "ILL_CONDITIONED"
    NEAR_BOUNDARY = "NEAR_BOUNDARY"


UNDECIDED_REASONS = frozenset(
    {Reason.SEARCH_INCONCLUSIVE, Reason.ILL_CONDITIONED, Reason.NEAR_BOUNDARY}
)


class Construction(str, Enum):
    PRINCIPAL_LOG = "PRINCIPAL_LOG"
    POLY_SMT = "POLY_SMT"
    HYPERBOLA = "HYPERBOLA"
    EQ_INPUT_EXTREMAL_PLUS = "EQ_INPUT_EXTREMAL_PLUS"
    EQ_INPUT_EXTREMAL_MINUS = "EQ_INPUT_EXTREMAL_MINUS"


class SearchStatus(str, Enum):
    FOUND = "Found"
    INFEASIBLE = "Infeasible"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class GeneratorCandidate:
    """A verified generator: exp(matrix) reproduces the input within tolerance."""

    matrix: Mat
    branch: int
    construction: Construction
    residual: float


@dataclass(frozen=True)
class HyperbolaPoint:
    """Point on yz - x^2 = 1 with z > 0."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        if not self.z > 0:
            raise ValueError("hyperbola point needs z > 0")
        scale = max(1.0, abs(self.y * self.z), self.x * self.x)
        if abs(self.y * self.z - self.x * self.x - 1.0) > 1e-12 * scale:
            raise ValueError("point is not on yz - x^2 = 1")

    @classmethod
    def from_xz(cls, x: float, z: float) -> "HyperbolaPoint":
        return cls(x=float(x), y=float((1.0 + x * x) / z), z=float(z))

    def matrix(self) -> Mat:
        """I_{x,y,z} = [[x, -z], [y, -x]], a real square root of -1."""
        return np.array([[self.x, -self.z], [self.y, -self.x]])


@dataclass(frozen=True)
class EmbeddingResult:
    """Outcome of an embedding decision.

    Embeddable holds exactly when ``generators`` is non-empty; Undecided
    always carries a reason.
    """

    verdict: Verdict
    generators: tuple[GeneratorCandidate, ...] = ()
    uniqueness: Uniqueness = Uniqueness.UNKNOWN
    reason: Reason | None = None
    case: CaseTag | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if (self.verdict is Verdict.EMBEDDABLE) != bool(self.generators):
            raise ValueError("Embeddable verdict requires at least one generator")
        if self.verdict is Verdict.UNDECIDED and self.reason is None:
            raise ValueError("Undecided verdict requires a reason")

    @classmethod
    def embeddable(
        cls,
        generators: list[GeneratorCandidate] | tuple[GeneratorCandidate, ...],
        uniqueness: Uniqueness,
        case: CaseTag | None = None,
    ) -> "EmbeddingResult":
        return cls(Verdict.EMBEDDABLE, tuple(generators), uniqueness, None, case)

    @classmethod
    def not_embeddable(cls, reason: Reason, case: CaseTag | None = None) -> "EmbeddingResult":
        return cls(Verdict.NOT_EMBEDDABLE, (), Uniqueness.UNKNOWN, reason, case)

    @classmethod
    def undecided(cls, reason: Reason, case: CaseTag | None = None) -> "EmbeddingResult":
        return cls(Verdict.UNDECIDED, (), Uniqueness.UNKNOWN, reason, case)

    def with_case(self, case: CaseTag) -> "EmbeddingResult":
        return EmbeddingResult(self.verdict, self.generators, self.uniqueness, self.reason, case)

    @property
    def generator(self) -> Mat | None:
        """The first generator, if any."""
        return self.generators[0].matrix if self.generators else None
