"""Dense real matrix kernel for dimensions 2 to 4.

Eigenvalues come from closed-form roots of the characteristic polynomial,
multiplicity decisions from a tolerance policy passed in explicitly, Jordan
structure from numerical ranks of powers of ``M - lambda*I``. The exponential
and the principal logarithm are delegated to ``scipy.linalg``.
"""

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np
import scipy.linalg
from loguru import logger
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field

from ..exceptions import IllConditioned, RejectsDimension, SpectrumOnCut
from .roots import monic_roots

Mat = NDArray[np.float64]

SUPPORTED_DIMS = (2, 3, 4)

# condition number of the similarity above which a decomposition is flagged
CONDITION_LIMIT = 1e8


class Tolerances(BaseModel):
    """Tolerance policy shared by every numerical decision."""

    model_config = ConfigDict(frozen=True)

    spec_cluster: float = Field(
        default=1e-8, gt=0, description="Relative threshold for merging eigenvalues"
    )
    nonneg: float = Field(
        default=1e-10, gt=0, description="Absolute slack for sign checks"
    )
    rowsum: float = Field(
        default=1e-10, gt=0, description="Absolute slack for row sums"
    )
    residual: float = Field(
        default=1e-8, gt=0, description="Bound on ||exp(Q) - M|| relative to scale(M)"
    )
    rank: float = Field(
        default=1e-9, gt=0, description="Relative singular value cut for numerical rank"
    )


def as_mat(data: ArrayLike, *, check_dim: bool = True) -> Mat:
    """Validate and convert input to a finite square float matrix.

    Raises:
        RejectsDimension: Not square, or (with ``check_dim``) outside 2..4.
        ValueError: Non-finite entries.
    """
    M = np.array(data, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise RejectsDimension(f"expected a square matrix, got shape {M.shape}")
    if check_dim and M.shape[0] not in SUPPORTED_DIMS:
        raise RejectsDimension(f"dimension {M.shape[0]} is outside 2..4")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix entries must be finite")
    return M


def matrix_scale(M: Mat) -> float:
    """scale(M) = max(1, ||M||_inf)."""
    return max(1.0, float(np.linalg.norm(M, np.inf)))


def exp_residual(Q: Mat, M: Mat) -> float:
    """||exp(Q) - M||_inf."""
    return float(np.linalg.norm(mat_exp(Q) - M, np.inf))


def char_poly(M: Mat) -> NDArray[np.float64]:
    """Monic characteristic polynomial det(xI - M), highest degree first.

    The k-th elementary symmetric function of the eigenvalues is the sum of
    the k x k principal minors.
    """
    d = M.shape[0]
    coeffs = [1.0]
    for k in range(1, d + 1):
        e_k = sum(
            float(np.linalg.det(M[np.ix_(idx, idx)]))
            for idx in itertools.combinations(range(d), k)
        )
        coeffs.append((-1) ** k * e_k)
    return np.array(coeffs)


@dataclass(frozen=True)
class Spectrum:
    """Distinct eigenvalues with algebraic multiplicities.

    Roots are ordered by descending real part, then descending imaginary part.
    """

    roots: tuple[complex, ...]
    multiplicities: tuple[int, ...]
    clustered: bool = False

    @property
    def dim(self) -> int:
        return sum(self.multiplicities)

    def values(self) -> list[complex]:
        """All eigenvalues, repeated according to multiplicity."""
        return [r for r, m in zip(self.roots, self.multiplicities) for _ in range(m)]

    def items(self) -> list[tuple[complex, int]]:
        return list(zip(self.roots, self.multiplicities))

    def multiplicity(self, value: complex, tol: float = 1e-12) -> int:
        for r, m in self.items():
            if abs(r - value) <= tol:
                return m
        return 0

    @property
    def is_simple(self) -> bool:
        return all(m == 1 for m in self.multiplicities)

    @property
    def is_real(self) -> bool:
        return all(r.imag == 0 for r in self.roots)


def _taylor_coefficients(coeffs: NDArray[np.float64], mu: complex, count: int) -> list[complex]:
    """First ``count`` Taylor coefficients p^(j)(mu)/j! by repeated synthetic division."""
    current = [complex(c) for c in coeffs]
    out = []
    for _ in range(count):
        acc: list[complex] = []
        r = 0j
        for a in current:
            r = r * mu + a
            acc.append(r)
        out.append(acc[-1])
        current = acc[:-1]
    return out


def _is_multiple_root(
    coeffs: NDArray[np.float64], mu: complex, k: int, scale: float, tol: Tolerances
) -> bool:
    d = coeffs.size - 1
    taylor = _taylor_coefficients(coeffs, mu, k)
    return all(
        abs(t) <= tol.spec_cluster * comb(d, j) * scale ** (d - j)
        for j, t in enumerate(taylor)
    )


def _cluster(
    coeffs: NDArray[np.float64], roots: list[complex], tol: Tolerances
) -> tuple[list[list[complex]], bool]:
    """Agglomerate nearest roots while the merged mean passes the multiple-root test."""
    scale = max([1.0] + [abs(r) for r in roots])
    clusters = [[r] for r in roots]
    clustered = False
    while len(clusters) > 1:
        pairs = sorted(
            (abs(np.mean(a) - np.mean(b)), i, j)
            for (i, a), (j, b) in itertools.combinations(enumerate(clusters), 2)
        )
        for _, i, j in pairs:
            union = clusters[i] + clusters[j]
            mu = complex(np.mean(union))
            if _is_multiple_root(coeffs, mu, len(union), scale, tol):
                clusters = [c for n, c in enumerate(clusters) if n not in (i, j)]
                clusters.append(union)
                clustered = True
                break
        else:
            break
    return clusters, clustered


def eigenvalues(M: ArrayLike, tol: Tolerances | None = None) -> Spectrum:
    """Eigenvalues of M from the closed-form roots of its characteristic polynomial.

    Nearby roots that jointly behave as a multiple root are merged at their
    arithmetic mean. For a Markov matrix the cluster nearest 1 is snapped to
    exactly 1.

    Raises:
        RejectsDimension: Dimension outside 2..4.
    """
    tol = tol or Tolerances()
    M = as_mat(M)
    coeffs = char_poly(M)
    roots = monic_roots(coeffs)
    clusters, clustered = _cluster(coeffs, roots, tol)

    scale = max([1.0] + [abs(r) for r in roots])
    means: list[complex] = []
    for cluster in clusters:
        mu = complex(np.mean(cluster))
        if abs(mu.imag) <= 1e-12 * scale:
            mu = complex(mu.real, 0.0)
        means.append(mu)

    if is_markov(M, tol):
        nearest = min(range(len(means)), key=lambda n: abs(means[n] - 1.0))
        means[nearest] = 1.0 + 0j

    order = sorted(range(len(clusters)), key=lambda n: (-means[n].real, -means[n].imag))
    spectrum = Spectrum(
        roots=tuple(means[n] for n in order),
        multiplicities=tuple(len(clusters[n]) for n in order),
        clustered=clustered,
    )
    if clustered:
        logger.debug(
            "Eigenvalues clustered",
            roots=[str(r) for r in spectrum.roots],
            multiplicities=spectrum.multiplicities,
        )
    return spectrum


@dataclass(frozen=True)
class JordanStructure:
    """Jordan block sizes per distinct eigenvalue (sizes in descending order)."""

    blocks: tuple[tuple[complex, tuple[int, ...]], ...]
    min_poly_degree: int

    @property
    def is_cyclic(self) -> bool:
        """One Jordan block per eigenvalue, i.e. minimal and characteristic polynomials agree."""
        return all(len(sizes) == 1 for _, sizes in self.blocks)

    def sizes_for(self, value: complex, tol: float = 1e-12) -> tuple[int, ...]:
        for root, sizes in self.blocks:
            if abs(root - value) <= tol:
                return sizes
        return ()


def _singular_values(A: NDArray) -> NDArray[np.float64]:
    return np.linalg.svd(A, compute_uv=False)


def _numerical_rank(A: NDArray, tol: Tolerances) -> int:
    s = _singular_values(A)
    threshold = tol.rank * max(float(s[0]) if s.size else 0.0, 1.0)
    if np.any((s > threshold / 10) & (s < threshold * 10)):
        raise IllConditioned(
            f"singular value within 10x of rank threshold {threshold:.3g}"
        )
    return int(np.sum(s >= threshold))


def _rank_sequence(M: Mat, value: complex, count: int, tol: Tolerances) -> list[int]:
    d = M.shape[0]
    dtype = np.float64 if value.imag == 0 else np.complex128
    N = M.astype(dtype) - (value.real if value.imag == 0 else value) * np.eye(d, dtype=dtype)
    ranks = [d]
    power = np.eye(d, dtype=dtype)
    for _ in range(count):
        power = power @ N
        ranks.append(_numerical_rank(power, tol))
    return ranks


def jordan_structure(
    M: ArrayLike, tol: Tolerances | None = None, spectrum: Spectrum | None = None
) -> JordanStructure:
    """Jordan block sizes from the ranks of (M - lambda*I)^p.

    Raises:
        IllConditioned: A rank decision sits within 10x of the threshold, or
            the rank sequence contradicts the clustered multiplicity.
    """
    tol = tol or Tolerances()
    M = as_mat(M)
    d = M.shape[0]
    spectrum = spectrum or eigenvalues(M, tol)

    blocks = []
    for value, mult in spectrum.items():
        ranks = _rank_sequence(M, value, mult, tol)
        if ranks[1] == d:
            raise IllConditioned(f"eigenvalue {value} has no numerical eigenvector")
        if ranks[mult] != d - mult:
            raise IllConditioned(
                f"rank sequence {ranks} inconsistent with multiplicity {mult} at {value}"
            )
        # at_least[p] = number of blocks of size >= p
        at_least = [ranks[p - 1] - ranks[p] for p in range(1, mult + 1)] + [0]
        sizes: list[int] = []
        for p in range(mult, 0, -1):
            sizes.extend([p] * (at_least[p - 1] - at_least[p]))
        blocks.append((value, tuple(sizes)))

    return JordanStructure(
        blocks=tuple(blocks),
        min_poly_degree=sum(max(sizes) for _, sizes in blocks),
    )


@dataclass(frozen=True)
class RealBlock:
    """One diagonal block of the real Jordan form.

    ``size`` counts Jordan size; a complex block occupies ``2 * size`` columns.
    """

    eigenvalue: complex
    size: int
    offset: int

    @property
    def is_complex(self) -> bool:
        return self.eigenvalue.imag != 0

    @property
    def width(self) -> int:
        return 2 * self.size if self.is_complex else self.size


@dataclass(frozen=True)
class RealJordanDecomposition:
    """M = T @ canonical @ inv(T) with a real block-diagonal canonical form."""

    T: Mat
    canonical: Mat
    blocks: tuple[RealBlock, ...]
    condition: float
    ill_conditioned: bool = False

    def reconstruct(self, canonical: Mat | None = None) -> Mat:
        C = self.canonical if canonical is None else canonical
        return self.T @ C @ np.linalg.inv(self.T)


def _kernel_basis(A: NDArray, dim: int) -> NDArray:
    """Right singular vectors of the ``dim`` smallest singular values."""
    if dim == 0:
        return np.zeros((A.shape[0], 0), dtype=A.dtype)
    _, _, vh = np.linalg.svd(A)
    return vh[-dim:].conj().T


def _jordan_chains(
    M: Mat, value: complex, sizes: tuple[int, ...], tol: Tolerances
) -> list[NDArray]:
    """Chains [N^(s-1) v, ..., N v, v] for each block, largest first."""
    d = M.shape[0]
    is_real = value.imag == 0
    dtype = np.float64 if is_real else np.complex128
    N = M.astype(dtype) - (value.real if is_real else value) * np.eye(d, dtype=dtype)
    ranks = _rank_sequence(M, value, max(sizes), tol)
    powers = [np.eye(d, dtype=dtype)]
    for _ in range(max(sizes)):
        powers.append(powers[-1] @ N)

    chains: list[NDArray] = []
    chosen = np.zeros((d, 0), dtype=dtype)
    for s in sizes:
        top_space = _kernel_basis(powers[s], d - ranks[s])
        below = _kernel_basis(powers[s - 1], d - ranks[s - 1])
        W = np.hstack([below, chosen])
        best, best_norm = None, -1.0
        for k in top_space.T:
            if W.shape[1]:
                coef, *_ = np.linalg.lstsq(W, k, rcond=None)
                res = float(np.linalg.norm(k - W @ coef))
            else:
                res = float(np.linalg.norm(k))
            if res > best_norm:
                best, best_norm = k, res
        if best is None or best_norm <= tol.rank:
            raise IllConditioned(f"could not extend Jordan chain at {value}")
        chain = [best / np.linalg.norm(best)]
        for _ in range(s - 1):
            chain.insert(0, N @ chain[0])
        block = np.column_stack(chain)
        chains.append(block)
        chosen = np.hstack([chosen, block])
    return chains


def real_jordan(
    M: ArrayLike, tol: Tolerances | None = None, structure: JordanStructure | None = None
) -> RealJordanDecomposition:
    """Real Jordan decomposition M = T @ canonical @ inv(T).

    Block order: eigenvalue 1 first, then real eigenvalues by ascending
    multiplicity and descending value, then conjugate pairs as 2x2
    rotation-scaling blocks ``[[a, b], [-b, a]]`` for a + ib, b > 0.

    Raises:
        IllConditioned: Defective complex pair, chain construction failure or
            a reconstruction residual above tolerance. A large condition
            number only sets ``ill_conditioned``.
    """
    tol = tol or Tolerances()
    M = as_mat(M)
    d = M.shape[0]
    structure = structure or jordan_structure(M, tol)

    real = [(v, s) for v, s in structure.blocks if v.imag == 0]
    pairs = [(v, s) for v, s in structure.blocks if v.imag > 0]
    real.sort(key=lambda b: (b[0] != 1.0, sum(b[1]), -b[0].real))
    pairs.sort(key=lambda b: -b[0].real)

    columns: list[NDArray] = []
    canon = np.zeros((d, d))
    blocks: list[RealBlock] = []
    offset = 0
    for value, sizes in real:
        for chain in _jordan_chains(M, value, sizes, tol):
            s = chain.shape[1]
            columns.append(np.real(chain))
            canon[offset : offset + s, offset : offset + s] = (
                value.real * np.eye(s) + np.eye(s, k=1)
            )
            blocks.append(RealBlock(value, s, offset))
            offset += s
    for value, sizes in pairs:
        if any(s > 1 for s in sizes):
            raise IllConditioned(f"defective complex eigenvalue {value}")
        for chain in _jordan_chains(M, value, sizes, tol):
            w = chain[:, 0]
            columns.append(np.column_stack([w.real, w.imag]))
            a, b = value.real, value.imag
            canon[offset : offset + 2, offset : offset + 2] = [[a, b], [-b, a]]
            blocks.append(RealBlock(value, 1, offset))
            offset += 2

    T = np.hstack(columns)
    condition = float(np.linalg.cond(T))
    if not np.isfinite(condition):
        raise IllConditioned("singular similarity in real Jordan form")
    decomposition = RealJordanDecomposition(
        T=T,
        canonical=canon,
        blocks=tuple(blocks),
        condition=condition,
        ill_conditioned=condition > CONDITION_LIMIT,
    )
    residual = float(np.linalg.norm(decomposition.reconstruct() - M, np.inf))
    if residual > tol.residual * matrix_scale(M):
        raise IllConditioned(f"real Jordan reconstruction residual {residual:.3g}")
    if decomposition.ill_conditioned:
        logger.warning("Ill-conditioned real Jordan similarity", condition=condition)
    return decomposition


def mat_exp(A: ArrayLike) -> Mat:
    """Matrix exponential (scaling and squaring with a Pade core)."""
    return np.asarray(scipy.linalg.expm(np.asarray(A, dtype=np.float64)), dtype=np.float64)


def principal_log(M: ArrayLike, tol: Tolerances | None = None) -> Mat:
    """Principal matrix logarithm, spectrum in the strip |Im| < pi.

    Raises:
        SpectrumOnCut: An eigenvalue is real and <= 0 within the nonneg tolerance.
        IllConditioned: The result fails the residual certificate.
    """
    tol = tol or Tolerances()
    M = as_mat(M)
    for root in eigenvalues(M, tol).roots:
        if abs(root.imag) <= tol.nonneg and root.real <= tol.nonneg:
            raise SpectrumOnCut(f"eigenvalue {root} on the closed negative real axis")

    L = np.asarray(scipy.linalg.logm(M))
    if np.iscomplexobj(L):
        if np.max(np.abs(L.imag)) > tol.residual * matrix_scale(M):
            raise IllConditioned("principal logarithm of a real matrix came out complex")
        L = L.real
    L = np.asarray(L, dtype=np.float64)

    residual = exp_residual(L, M)
    if residual > tol.residual * matrix_scale(M):
        raise IllConditioned(f"principal logarithm residual {residual:.3g}")
    return L


def poly_in(coeffs: ArrayLike, A: ArrayLike) -> Mat:
    """sum_i coeffs[i-1] * A**i for i = 1..len(coeffs) (no constant term)."""
    A = as_mat(A, check_dim=False)
    c = np.atleast_1d(np.asarray(coeffs, dtype=np.float64))
    if c.size > max(A.shape[0] - 1, 1):
        raise ValueError(f"at most {A.shape[0] - 1} coefficients for dimension {A.shape[0]}")
    result = np.zeros_like(A)
    power = A.copy()
    for alpha in c:
        result += alpha * power
        power = power @ A
    return result


def is_markov(M: ArrayLike, tol: Tolerances | None = None) -> bool:
    """Non-negative entries and unit row sums, within tolerance."""
    tol = tol or Tolerances()
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or not np.all(np.isfinite(M)):
        return False
    return bool(
        np.all(M >= -tol.nonneg) and np.all(np.abs(M.sum(axis=1) - 1.0) <= tol.rowsum)
    )


def is_generator(Q: ArrayLike, tol: Tolerances | None = None) -> bool:
    """Non-negative off-diagonal entries and zero row sums, within tolerance."""
    tol = tol or Tolerances()
    Q = np.asarray(Q, dtype=np.float64)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1] or not np.all(np.isfinite(Q)):
        return False
    off = Q[~np.eye(Q.shape[0], dtype=bool)]
    return bool(
        np.all(off >= -tol.nonneg) and np.all(np.abs(Q.sum(axis=1)) <= tol.rowsum)
    )
