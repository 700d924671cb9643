"""Phylogenetic model classes: equal-input, Tamura-Nei and Kimura 3ST.

States are always ordered (A, G, C, T). Recognizers compare entries within
the rowsum tolerance and never search over state permutations.
"""

import math
from enum import Enum

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field

from .embedder import (
    Construction,
    EmbeddingResult,
    Reason,
    Uniqueness,
    decide,
    embed_d3_eq_input_neg,
    equal_input_parameters,
    rotation_branches,
    uniqueness_certificates,
)
from .embedder.verify import certify, near_generator
from .exceptions import IllConditioned, InfeasibleParams, NonpositiveParameter
from .linalg import Mat, Tolerances, as_mat, eigenvalues, is_markov, principal_log


class ModelClass(str, Enum):
    EQUAL_INPUT = "EQUAL_INPUT"
    CONSTANT_INPUT = "CONSTANT_INPUT"
    TN = "TN"
    HKY = "HKY"
    K3ST = "K3ST"
    K2P = "K2P"


class EqualInputParams(BaseModel):
    """Column weights of ``M_c = (1 - c) I + C(c_1, ..., c_d)``."""

    model_config = ConfigDict(frozen=True)

    c_vec: tuple[float, ...] = Field(min_length=2, max_length=4)

    @property
    def c(self) -> float:
        return float(sum(self.c_vec))

    @property
    def dim(self) -> int:
        return len(self.c_vec)

    @classmethod
    def constant(cls, c: float, dim: int = 4) -> "EqualInputParams":
        """Constant-input (Jukes-Cantor) parameters c_i = c/d."""
        return cls(c_vec=(c / dim,) * dim)

    def check(self) -> None:
        """Raise InfeasibleParams unless every c_i >= 0 and c <= 1 + c_i."""
        if min(self.c_vec) < 0:
            raise InfeasibleParams(f"weights must be nonnegative, got {self.c_vec}")
        if any(self.c > 1.0 + ci for ci in self.c_vec):
            raise InfeasibleParams(f"summatory parameter {self.c} exceeds 1 + min(c_i)")


class TNParams(BaseModel):
    """Tamura-Nei weights a_1..a_4 and transition factors kappa_1, kappa_2."""

    model_config = ConfigDict(frozen=True)

    a1: float = Field(ge=0)
    a2: float = Field(ge=0)
    a3: float = Field(ge=0)
    a4: float = Field(ge=0)
    kappa1: float = Field(ge=0)
    kappa2: float = Field(ge=0)

    @property
    def purines(self) -> float:
        return self.a1 + self.a2

    @property
    def pyrimidines(self) -> float:
        return self.a3 + self.a4

    def check(self) -> None:
        rows = _tn_off_diagonal(self).sum(axis=1)
        if np.any(rows > 1.0):
            raise InfeasibleParams(f"row off-diagonal sums {rows.tolist()} exceed 1")


class K3STParams(BaseModel):
    """Kimura 3ST rates x (A<->G), y (A<->C) and z (A<->T)."""

    model_config = ConfigDict(frozen=True)

    x: float = Field(ge=0)
    y: float = Field(ge=0)
    z: float = Field(ge=0)

    @classmethod
    def k2p(cls, transition: float, transversion: float) -> "K3STParams":
        return cls(x=transition, y=transversion, z=transversion)

    def check(self) -> None:
        if self.x + self.y + self.z > 1.0:
            raise InfeasibleParams(f"x + y + z = {self.x + self.y + self.z} exceeds 1")


def _fill_diagonal(off: Mat, value: float = 1.0) -> Mat:
    M = np.array(off, dtype=float)
    np.fill_diagonal(M, 0.0)
    np.fill_diagonal(M, value - M.sum(axis=1))
    return M


# ---------------------------------------------------------------------------
# equal-input
# ---------------------------------------------------------------------------


def equal_input_matrix(p: EqualInputParams) -> Mat:
    """(1 - c) I + C with C holding the row (c_1, ..., c_d) d times."""
    p.check()
    c_vec = np.asarray(p.c_vec, dtype=float)
    return (1.0 - p.c) * np.eye(p.dim) + np.tile(c_vec, (p.dim, 1))


def recognize_equal_input(M: ArrayLike, tol: Tolerances | None = None) -> EqualInputParams | None:
    """Parameters of an equal-input matrix, or None when M is not of that form."""
    tol = tol or Tolerances()
    M = as_mat(M)
    c_vec = equal_input_parameters(M, tol)
    if c_vec is None or np.any(c_vec < -tol.nonneg):
        return None
    return EqualInputParams(c_vec=tuple(float(max(ci, 0.0)) for ci in c_vec))


def embed_equal_input(p: EqualInputParams, tol: Tolerances | None = None) -> EmbeddingResult:
    """Decide an equal-input matrix from its parameters.

    ``0 <= c < 1`` is embeddable with ``Q = -log(1-c)/c A`` in d = 3 and 4.
    ``c = 1`` is singular. In d = 3, ``c > 1`` goes to the extremal-parameter
    test; in d = 4 it is never embeddable.
    """
    tol = tol or Tolerances()
    M = equal_input_matrix(p)
    c = p.c
    logger.debug("Equal-input decision", dim=p.dim, c=c)

    if c <= tol.nonneg:
        zero = certify(np.zeros_like(M), M, tol, 0, Construction.PRINCIPAL_LOG)
        assert zero is not None
        return EmbeddingResult.embeddable([zero], Uniqueness.UNIQUE)
    if abs(1.0 - c) <= tol.nonneg:
        return EmbeddingResult.not_embeddable(Reason.DET_NONPOSITIVE)
    if c > 1.0:
        if p.dim == 3:
            return embed_d3_eq_input_neg(M, tol)
        if p.dim == 2:
            return EmbeddingResult.not_embeddable(Reason.DET_NONPOSITIVE)
        return EmbeddingResult.not_embeddable(Reason.NEGATIVE_EIGENVALUE_CULVER)

    Q = -math.log1p(-c) / c * (M - np.eye(p.dim))
    candidate = certify(Q, M, tol, 0, Construction.POLY_SMT)
    if candidate is None:
        return EmbeddingResult.undecided(Reason.NEAR_BOUNDARY)
    if p.dim == 2 or not rotation_branches(math.log1p(-c), p.dim, odd=False):
        return EmbeddingResult.embeddable([candidate], Uniqueness.UNIQUE)
    return EmbeddingResult.embeddable(
        [candidate],
        Uniqueness.UNIQUE
        if uniqueness_certificates(M, Q) is Uniqueness.UNIQUE
        else Uniqueness.POSSIBLY_MORE,
    )


def commutant_basis_d3(c1: float, c2: float, c3: float) -> list[Mat]:
    """Zero-row-sum basis of the matrices commuting with C(c1, c2, c3)."""
    if min(c1, c2, c3) <= 0:
        raise NonpositiveParameter(f"parameters must be positive, got {(c1, c2, c3)}")
    alpha = (c1 + c3) * (c2 + c3)
    beta = (c1 + c2) * (c1 + c3)
    gamma = (c1 + c2) * (c2 + c3)
    offs = (
        [[0, 0, 0], [0, 0, c3], [0, c2, 0]],
        [[0, 0, c3], [0, 0, 0], [c1, 0, 0]],
        [[0, c2, 0], [c1, 0, 0], [0, 0, 0]],
        [[0, alpha, -gamma], [-alpha, 0, beta], [gamma, -beta, 0]],
    )
    return [_fill_diagonal(np.array(off, dtype=float), 0.0) for off in offs]


# ---------------------------------------------------------------------------
# Tamura-Nei
# ---------------------------------------------------------------------------


def _tn_off_diagonal(p: TNParams) -> Mat:
    a1, a2, a3, a4 = p.a1, p.a2, p.a3, p.a4
    return np.array(
        [
            [0.0, a2 * p.kappa1, a3, a4],
            [a1 * p.kappa1, 0.0, a3, a4],
            [a1, a2, 0.0, a4 * p.kappa2],
            [a1, a2, a3 * p.kappa2, 0.0],
        ]
    )


def tn_matrix(p: TNParams) -> Mat:
    p.check()
    return _fill_diagonal(_tn_off_diagonal(p))


def tn_generator(p: TNParams) -> Mat:
    """TN generator with the same off-diagonal pattern."""
    return _fill_diagonal(_tn_off_diagonal(p), 0.0)


def tn_spectrum(p: TNParams) -> tuple[float, float, float]:
    """Non-unit eigenvalues (lambda_1, lambda_2, lambda_3) of the TN matrix."""
    s, r = p.purines, p.pyrimidines
    return (1.0 - (s + r), 1.0 - p.kappa1 * s - r, 1.0 - s - p.kappa2 * r)


def tn_condition(p: TNParams) -> bool:
    """All three non-unit eigenvalues lie in (0, 1)."""
    s, r = p.purines, p.pyrimidines
    low = min(1.0, p.kappa1) * s + min(1.0, p.kappa2) * r
    high = max(1.0, p.kappa1) * s + max(1.0, p.kappa2) * r
    return 0.0 < low and high < 1.0


def is_tn_shaped(Q: ArrayLike, tol: Tolerances | None = None) -> bool:
    """Off-diagonal pattern of a TN matrix within the rowsum tolerance."""
    tol = tol or Tolerances()
    return recognize_tn(np.asarray(Q) + np.eye(4), tol) is not None


def recognize_tn(M: ArrayLike, tol: Tolerances | None = None) -> TNParams | None:
    """TN parameters of M, or None when the off-diagonal pattern does not match."""
    tol = tol or Tolerances()
    M = as_mat(M)
    if M.shape != (4, 4):
        return None
    pairs = ((2, 3, 0), (2, 3, 1), (0, 1, 2), (0, 1, 3))
    a = []
    for r1, r2, col in pairs:
        if abs(M[r1, col] - M[r2, col]) > tol.rowsum or M[r1, col] < -tol.nonneg:
            return None
        a.append(max(0.0, 0.5 * (M[r1, col] + M[r2, col])))

    def factor(upper: float, lower: float, a_up: float, a_low: float) -> float | None:
        # upper = a_up * kappa and lower = a_low * kappa
        if max(a_up, a_low) <= tol.nonneg:
            return 1.0 if max(abs(upper), abs(lower)) <= tol.rowsum else None
        kappa = upper / a_up if a_up >= a_low else lower / a_low
        if kappa < -tol.nonneg:
            return None
        if abs(a_up * kappa - upper) > tol.rowsum or abs(a_low * kappa - lower) > tol.rowsum:
            return None
        return max(kappa, 0.0)

    kappa1 = factor(M[0, 1], M[1, 0], a[1], a[0])
    kappa2 = factor(M[2, 3], M[3, 2], a[3], a[2])
    if kappa1 is None or kappa2 is None:
        return None
    return TNParams(a1=a[0], a2=a[1], a3=a[2], a4=a[3], kappa1=kappa1, kappa2=kappa2)


def embed_tn(p: TNParams, tol: Tolerances | None = None) -> EmbeddingResult:
    """Simple TN matrices are embeddable iff all eigenvalues lie in (0, 1).

    The generator is then the principal logarithm, which is of TN type.
    Degenerate spectra go to the general engine.
    """
    tol = tol or Tolerances()
    M = tn_matrix(p)
    spectrum = eigenvalues(M, tol)
    if not spectrum.is_simple:
        logger.debug("Degenerate TN spectrum, using general engine")
        return decide(M, tol)
    if not tn_condition(p):
        return EmbeddingResult.not_embeddable(Reason.EIGENVALUE_OUT_OF_RANGE)
    try:
        Q = principal_log(M, tol)
        candidate = certify(Q, M, tol, 0, Construction.PRINCIPAL_LOG)
    except IllConditioned:
        return EmbeddingResult.undecided(Reason.ILL_CONDITIONED)
    if candidate is None:
        if near_generator(Q, tol):
            return EmbeddingResult.undecided(Reason.NEAR_BOUNDARY)
        return EmbeddingResult.not_embeddable(Reason.LOG_NOT_GENERATOR)
    if not is_tn_shaped(candidate.matrix, tol):
        logger.warning("Principal logarithm of a TN matrix is not TN-shaped")
    return EmbeddingResult.embeddable([candidate], Uniqueness.UNIQUE)


# ---------------------------------------------------------------------------
# Kimura 3ST
# ---------------------------------------------------------------------------

# Klein four-group permutation matrices in (A, G, C, T) order
_K1 = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=float)
_K2 = np.array([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=float)
_K3 = np.array([[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=float)


def k3st_matrix(p: K3STParams) -> Mat:
    p.check()
    return (1.0 - (p.x + p.y + p.z)) * np.eye(4) + p.x * _K1 + p.y * _K2 + p.z * _K3


def k3st_generator(x: float, y: float, z: float) -> Mat:
    """x K1 + y K2 + z K3 - (x + y + z) I."""
    return x * _K1 + y * _K2 + z * _K3 - (x + y + z) * np.eye(4)


def k3st_spectrum(p: K3STParams) -> tuple[float, float, float]:
    """(1 - 2(x+z), 1 - 2(y+z), 1 - 2(x+y))."""
    return (1.0 - 2.0 * (p.x + p.z), 1.0 - 2.0 * (p.y + p.z), 1.0 - 2.0 * (p.x + p.y))


def k3st_condition(p: K3STParams) -> bool:
    """All eigenvalues positive and each at least the product of the other two."""
    l1, l2, l3 = k3st_spectrum(p)
    return min(l1, l2, l3) > 0 and l1 >= l2 * l3 and l2 >= l1 * l3 and l3 >= l1 * l2


def k3st_log_generator(p: K3STParams) -> Mat:
    """Generator from signed quarter-sums of log(lambda_i); requires positive spectrum."""
    l1, l2, l3 = (math.log(v) for v in k3st_spectrum(p))
    return k3st_generator((-l1 + l2 - l3) / 4.0, (l1 - l2 - l3) / 4.0, (-l1 - l2 + l3) / 4.0)


def recognize_k3st(M: ArrayLike, tol: Tolerances | None = None) -> K3STParams | None:
    tol = tol or Tolerances()
    M = as_mat(M)
    if M.shape != (4, 4):
        return None
    rates = []
    for K in (_K1, _K2, _K3):
        values = M[K == 1]
        if np.ptp(values) > tol.rowsum or values.min() < -tol.nonneg:
            return None
        rates.append(max(0.0, float(values.mean())))
    return K3STParams(x=rates[0], y=rates[1], z=rates[2])


def embed_k3st(p: K3STParams, tol: Tolerances | None = None) -> EmbeddingResult:
    """Simple K3ST matrices have one candidate logarithm, a K3ST generator.

    ``x = y = z`` is the constant-input case. Other degenerate spectra
    (K2P and its relabelings) go to the general engine.
    """
    tol = tol or Tolerances()
    M = k3st_matrix(p)
    spectrum = eigenvalues(M, tol)
    if not spectrum.is_simple:
        if max(p.x, p.y, p.z) - min(p.x, p.y, p.z) <= tol.rowsum:
            c = 4.0 * (p.x + p.y + p.z) / 3.0
            return embed_equal_input(EqualInputParams.constant(c), tol)
        logger.debug("Degenerate K3ST spectrum, using general engine")
        return decide(M, tol)
    if min(k3st_spectrum(p)) <= 0:
        return EmbeddingResult.not_embeddable(Reason.EIGENVALUE_OUT_OF_RANGE)

    Q = k3st_log_generator(p)
    try:
        candidate = certify(Q, M, tol, 0, Construction.POLY_SMT)
    except IllConditioned:
        return EmbeddingResult.undecided(Reason.ILL_CONDITIONED)
    if candidate is None:
        if near_generator(Q, tol):
            return EmbeddingResult.undecided(Reason.NEAR_BOUNDARY)
        return EmbeddingResult.not_embeddable(Reason.LOG_NOT_GENERATOR)
    return EmbeddingResult.embeddable([candidate], Uniqueness.UNIQUE)


def model_recognize(M: ArrayLike, tol: Tolerances | None = None) -> set[ModelClass]:
    """Every model class M belongs to."""
    tol = tol or Tolerances()
    M = as_mat(M)
    if not is_markov(M, tol):
        return set()
    found: set[ModelClass] = set()
    equal_input = recognize_equal_input(M, tol)
    if equal_input is not None:
        found.add(ModelClass.EQUAL_INPUT)
        if np.ptp(equal_input.c_vec) <= tol.rowsum:
            found.add(ModelClass.CONSTANT_INPUT)
    tn = recognize_tn(M, tol)
    if tn is not None:
        found.add(ModelClass.TN)
        if abs(tn.kappa1 - tn.kappa2) <= tol.rowsum or min(tn.purines, tn.pyrimidines) <= tol.nonneg:
            found.add(ModelClass.HKY)
    k3st = recognize_k3st(M, tol)
    if k3st is not None:
        found.add(ModelClass.K3ST)
        if abs(k3st.y - k3st.z) <= tol.rowsum:
            found.add(ModelClass.K2P)
    return found
