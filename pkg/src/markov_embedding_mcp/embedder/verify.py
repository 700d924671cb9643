"""Residual certificate for candidate generators."""

import numpy as np
from loguru import logger

from ..exceptions import IllConditioned
from ..linalg import Mat, Tolerances, exp_residual, is_generator, matrix_scale
from .results import Construction, GeneratorCandidate


def generator_margin(Q: Mat) -> float:
    """Smallest off-diagonal entry."""
    off = Q[~np.eye(Q.shape[0], dtype=bool)]
    return float(off.min())


def tidy(Q: Mat, tol: Tolerances) -> Mat:
    """Clip off-diagonal entries within the nonneg slack to zero and reset the diagonal."""
    R = np.array(Q, dtype=float)
    mask = ~np.eye(R.shape[0], dtype=bool)
    R[mask & (R < 0) & (R >= -tol.nonneg)] = 0.0
    np.fill_diagonal(R, 0.0)
    np.fill_diagonal(R, -R.sum(axis=1))
    return R


def near_generator(Q: Mat, tol: Tolerances) -> bool:
    """Off-diagonal minimum within ten times the nonneg slack below the threshold."""
    return -10.0 * tol.nonneg <= generator_margin(tidy(Q, tol)) < -tol.nonneg


def certify(
    Q: Mat, M: Mat, tol: Tolerances, branch: int, construction: Construction
) -> GeneratorCandidate | None:
    """Return a verified candidate, or None when Q is not a generator.

    Raises:
        IllConditioned: Q is a generator but exp(Q) misses M.
    """
    if not np.all(np.isfinite(Q)):
        raise IllConditioned("candidate generator has non-finite entries")
    R = tidy(Q, tol)
    if not is_generator(R, tol):
        return None
    residual = exp_residual(R, M)
    if residual > tol.residual * matrix_scale(M):
        logger.warning(
            "Generator failed residual certificate",
            residual=residual,
            construction=construction.value,
            branch=branch,
        )
        raise IllConditioned(f"residual {residual:.3g} above tolerance")
    return GeneratorCandidate(R, branch, construction, residual)


def same_generator(a: Mat, b: Mat, tol: Tolerances) -> bool:
    return float(np.max(np.abs(a - b))) <= tol.residual * max(1.0, float(np.max(np.abs(a))))


def dedupe(candidates: list[GeneratorCandidate], tol: Tolerances) -> list[GeneratorCandidate]:
    """Drop candidates equal to an earlier one up to the residual tolerance."""
    kept: list[GeneratorCandidate] = []
    for cand in candidates:
        if not any(same_generator(cand.matrix, k.matrix, tol) for k in kept):
            kept.append(cand)
    return kept
