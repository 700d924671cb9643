"""Top-level embedding decision."""

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike

from ..classifier import IDENTITY_PATTERNS, NecessaryReport, classify, necessary_checks
from ..exceptions import DegenerateDenominator, IllConditioned, SpectrumOnCut
from ..linalg import Tolerances, as_mat, is_markov
from .cases import embed_d2, embed_d3, embed_d4
from .hyperbola import HyperbolaOptions
from .results import Construction, EmbeddingResult, Reason, Uniqueness
from .verify import certify


def _first_failure(report: NecessaryReport) -> Reason | None:
    checks = (
        (report.det_positive, Reason.DET_NONPOSITIVE),
        (report.diag_positive, Reason.ZERO_DIAGONAL),
        (report.culver_ok, Reason.NEGATIVE_EIGENVALUE_CULVER),
        (report.unit_circle_ok, Reason.UNIT_CIRCLE),
        (report.transitivity_ok, Reason.TRANSITIVITY),
    )
    return next((reason for ok, reason in checks if not ok), None)


def decide(
    M: ArrayLike,
    tol: Tolerances | None = None,
    *,
    all_branches: bool = True,
    options: HyperbolaOptions | None = None,
) -> EmbeddingResult:
    """Decide whether a 2x2, 3x3 or 4x4 Markov matrix is embeddable.

    Necessary conditions run first and may reject outright. The case
    classifier then routes to a per-case decider. Every returned
    generator has passed the residual certificate.

    Args:
        M: Markov matrix.
        tol: Numerical tolerances.
        all_branches: Enumerate every admissible branch. When False the
            search stops at the first generator found.
        options: Hyperbola search settings.

    Raises:
        RejectsDimension: M is not 2x2, 3x3 or 4x4.
        ValueError: M is not a Markov matrix.
    """
    tol = tol or Tolerances()
    M = as_mat(M)
    if not is_markov(M, tol):
        raise ValueError("decide expects a Markov matrix")

    failure = _first_failure(necessary_checks(M, tol))
    if failure is not None:
        logger.debug("Necessary condition failed", reason=failure.value)
        return EmbeddingResult.not_embeddable(failure)

    try:
        case = classify(M, tol)
    except IllConditioned as e:
        logger.debug("Classification ill-conditioned", error=str(e))
        return EmbeddingResult.undecided(Reason.ILL_CONDITIONED)

    try:
        if case.pattern in IDENTITY_PATTERNS:
            zero = certify(np.zeros_like(M), M, tol, 0, Construction.PRINCIPAL_LOG)
            assert zero is not None
            result = EmbeddingResult.embeddable([zero], Uniqueness.UNIQUE)
        elif case.dim == 2:
            result = embed_d2(M, tol)
        elif case.dim == 3:
            result = embed_d3(M, case, tol, options, all_branches)
        else:
            result = embed_d4(M, case, tol, options, all_branches)
    except (IllConditioned, SpectrumOnCut, DegenerateDenominator) as e:
        logger.debug("Case decider ill-conditioned", pattern=case.pattern.value, error=str(e))
        result = EmbeddingResult.undecided(Reason.ILL_CONDITIONED)

    logger.debug(
        "Embedding decided",
        pattern=case.pattern.value,
        verdict=result.verdict.value,
        uniqueness=result.uniqueness.value,
        generators=len(result.generators),
    )
    return result.with_case(case)
