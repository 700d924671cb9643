"""Equal-input matrices in d=3 with summatory parameter c > 1.

Such a matrix has a negative double eigenvalue 1 - c and is embeddable up to
the extremal parameter ``c_max = 1 + exp(-delta_min)`` on its ray.
"""

import math

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike

from ..exceptions import IllConditioned, NonpositiveParameter
from ..linalg import Mat, Tolerances, as_mat, matrix_scale
from .results import Construction, EmbeddingResult, Reason, Uniqueness
from .verify import certify


def _positive_triple(c1: float, c2: float, c3: float) -> tuple[float, float, float]:
    if min(c1, c2, c3) <= 0:
        raise NonpositiveParameter(f"parameters must be positive, got {(c1, c2, c3)}")
    return float(c1), float(c2), float(c3)


def delta_min(c1: float, c2: float, c3: float) -> float:
    """pi * kappa * sqrt(c) / sqrt(c1 c2 c3) with kappa = max(c_i), c = sum(c_i)."""
    c1, c2, c3 = _positive_triple(c1, c2, c3)
    kappa = max(c1, c2, c3)
    return math.pi * kappa * math.sqrt(c1 + c2 + c3) / math.sqrt(c1 * c2 * c3)


def extremal_parameter(c1: float, c2: float, c3: float) -> float:
    """Largest embeddable summatory parameter on the ray through (c1, c2, c3)."""
    return 1.0 + math.exp(-delta_min(c1, c2, c3))


def eq_input_extremal_generators(c1: float, c2: float, c3: float) -> tuple[Mat, Mat]:
    """The two generators whose exponential is the extremal equal-input matrix.

    Both are homogeneous of degree 0 in (c1, c2, c3) and commute with the
    equal-input part C(c1, c2, c3).
    """
    c1, c2, c3 = _positive_triple(c1, c2, c3)
    k = max(c1, c2, c3)
    scale = math.pi / math.sqrt((c1 + c2 + c3) * c1 * c2 * c3)

    def build(s: float) -> Mat:
        return scale * np.array(
            [
                [-k * (c2 + c3), c2 * (k + s * c3), c3 * (k - s * c2)],
                [c1 * (k - s * c3), -k * (c1 + c3), c3 * (k + s * c1)],
                [c1 * (k + s * c2), c2 * (k - s * c1), -k * (c1 + c2)],
            ]
        )

    return build(1.0), build(-1.0)


def equal_input_parameters(M: ArrayLike, tol: Tolerances | None = None) -> np.ndarray | None:
    """Column values c_j when every off-diagonal entry of column j agrees, else None."""
    tol = tol or Tolerances()
    M = as_mat(M)
    d = M.shape[0]
    c = np.empty(d)
    for j in range(d):
        column = np.delete(M[:, j], j)
        if np.ptp(column) > tol.rowsum:
            return None
        c[j] = column.mean()
    return c


def embed_d3_eq_input_neg(M: ArrayLike, tol: Tolerances | None = None) -> EmbeddingResult:
    """Decide a d=3 equal-input matrix with c > 1.

    Embeddable iff c <= c_max. Strictly inside, the two generators are
    ``Q_pm + tau * Q_C`` with ``Q_C = C_max - c_max * I`` and
    ``tau = -log((c - 1) / (c_max - 1)) / c_max``.
    """
    tol = tol or Tolerances()
    M = as_mat(M)
    c_vec = equal_input_parameters(M, tol)
    if c_vec is None or M.shape[0] != 3:
        return EmbeddingResult.undecided(Reason.ILL_CONDITIONED)
    if np.any(c_vec <= tol.nonneg):
        return EmbeddingResult.undecided(Reason.NEAR_BOUNDARY)

    c = float(c_vec.sum())
    c_max = extremal_parameter(*c_vec)
    logger.debug("Equal-input negative case", c=c, c_max=c_max)
    if c > c_max + tol.nonneg:
        return EmbeddingResult.not_embeddable(Reason.ABOVE_EXTREMAL_PARAMETER)
    if c <= 1.0 + tol.nonneg:
        return EmbeddingResult.undecided(Reason.NEAR_BOUNDARY)

    q_plus, q_minus = eq_input_extremal_generators(*c_vec)
    tau = 0.0
    if c < c_max:
        tau = -math.log((c - 1.0) / (c_max - 1.0)) / c_max
    w = c_vec / c
    q_c = c_max * (np.tile(w, (3, 1)) - np.eye(3))

    generators = []
    for q, construction in (
        (q_plus, Construction.EQ_INPUT_EXTREMAL_PLUS),
        (q_minus, Construction.EQ_INPUT_EXTREMAL_MINUS),
    ):
        try:
            candidate = certify(q + tau * q_c, M, tol, 0, construction)
        except IllConditioned:
            return EmbeddingResult.undecided(Reason.ILL_CONDITIONED)
        if candidate is None:
            logger.warning("Extremal generator failed verification", scale=matrix_scale(M))
            return EmbeddingResult.undecided(Reason.ILL_CONDITIONED)
        generators.append(candidate)
    return EmbeddingResult.embeddable(generators, Uniqueness.MULTIPLE_KNOWN)
