"""Search over the non-principal real logarithms of a scalar 2x2 block.

For ``M = T @ (F + lam*1_2) @ inv(T)`` the real logarithms on the last two
coordinates are ``L*1_2 + angle*I(x,y,z)`` with ``I = [[x, -z], [y, -x]]``,
``yz - x**2 = 1`` and ``z > 0``. The candidate

    R(x, y, z) = T @ (log F + (L*1_2 + angle*I(x,y,z))) @ inv(T)

is affine in (x, y, z), so each off-diagonal sign condition is an affine
constraint ``a + b*x + c*y + d*z >= 0``.
"""

import itertools
from dataclasses import dataclass

import numpy as np
from loguru import logger
from scipy.optimize import minimize

from ..linalg import Mat, RealJordanDecomposition, Tolerances
from .results import HyperbolaPoint, SearchStatus

# weights for pairs of constraints in the infeasibility certificate
_RATIOS = np.logspace(-4, 4, 81)


@dataclass(frozen=True)
class HyperbolaOptions:
    """Grid size per axis and bound on |x|, z and 1/z."""

    grid: int = 200
    extent: float = 1e3
    refine_starts: int = 5


@dataclass(frozen=True)
class HyperbolaOutcome:
    status: SearchStatus
    point: HyperbolaPoint | None = None
    generator: Mat | None = None
    violation: float = float("inf")


@dataclass(frozen=True)
class AffineFamily:
    """R(x, y, z) = R0 + x*Rx + y*Ry + z*Rz."""

    R0: Mat
    Rx: Mat
    Ry: Mat
    Rz: Mat

    def at(self, x: float, y: float, z: float) -> Mat:
        return self.R0 + x * self.Rx + y * self.Ry + z * self.Rz

    def off_diagonal(self) -> np.ndarray:
        """Constraint rows (a, b, c, d), one per off-diagonal entry."""
        mask = ~np.eye(self.R0.shape[0], dtype=bool)
        return np.column_stack(
            [self.R0[mask], self.Rx[mask], self.Ry[mask], self.Rz[mask]]
        )


def affine_family(
    decomposition: RealJordanDecomposition,
    fixed_block: Mat,
    log_modulus: float,
    angle: float,
) -> AffineFamily:
    """Build the affine pieces of R(x, y, z); the pair occupies the last two coordinates."""
    T = decomposition.T
    d = T.shape[0]
    Tinv = np.linalg.inv(T)
    fixed = np.atleast_2d(np.asarray(fixed_block, dtype=float))
    if fixed.shape != (d - 2, d - 2):
        raise ValueError(f"fixed block must be {(d - 2, d - 2)}, got {fixed.shape}")

    def lift(block: np.ndarray, base: np.ndarray | None = None) -> Mat:
        L = np.zeros((d, d))
        if base is not None:
            L[: d - 2, : d - 2] = base
        L[d - 2 :, d - 2 :] = block
        return T @ L @ Tinv

    return AffineFamily(
        R0=lift(log_modulus * np.eye(2), fixed),
        Rx=lift(angle * np.array([[1.0, 0.0], [0.0, -1.0]])),
        Ry=lift(angle * np.array([[0.0, 0.0], [1.0, 0.0]])),
        Rz=lift(angle * np.array([[0.0, -1.0], [0.0, 0.0]])),
    )


def _violation(rows: np.ndarray, x: np.ndarray, z: np.ndarray) -> np.ndarray:
    """max over constraints of -(a + b x + c y + d z), broadcast over (x, z)."""
    y = (1.0 + x * x) / z
    values = (
        rows[:, 0, None, None]
        + rows[:, 1, None, None] * x
        + rows[:, 2, None, None] * y
        + rows[:, 3, None, None] * z
    )
    return np.max(-values, axis=0)


def _supremum(A: float, B: float, C: float, D: float) -> float:
    """sup of A + Bx + Cy + Dz over {z > 0, yz >= 1 + x^2}."""
    if C > 0 or D > 0:
        return float("inf")
    disc = 4.0 * C * D - B * B
    if disc < 0:
        return float("inf")
    return A - float(np.sqrt(disc))


def certify_infeasible(rows: np.ndarray, margin: float) -> bool:
    """True when a nonnegative combination of constraints has supremum below -margin."""
    for row in rows:
        if _supremum(*row) < -margin:
            return True
    for p, q in itertools.combinations(range(rows.shape[0]), 2):
        for r in _RATIOS:
            combo = (rows[p] + r * rows[q]) / (1.0 + r)
            if _supremum(*combo) < -margin:
                return True
    return False


def hyperbola_search(
    decomposition: RealJordanDecomposition,
    fixed_block: Mat,
    log_modulus: float,
    angle: float,
    tol: Tolerances | None = None,
    options: HyperbolaOptions | None = None,
) -> HyperbolaOutcome:
    """Look for (x, y, z) on the hyperbola making R(x, y, z) a generator.

    A logarithmic grid over |x| <= extent and z in [1/extent, extent] is
    scanned first; the best grid points are refined with Nelder-Mead in
    (x, log z). Infeasible is reported only with a certificate from
    :func:`certify_infeasible`.
    """
    tol = tol or Tolerances()
    options = options or HyperbolaOptions()
    family = affine_family(decomposition, fixed_block, log_modulus, angle)
    rows = family.off_diagonal()

    half = options.grid // 2
    magnitudes = np.logspace(-3, np.log10(options.extent), max(half, 2))
    xs = np.concatenate([-magnitudes[::-1], [0.0], magnitudes])
    zs = np.logspace(-np.log10(options.extent), np.log10(options.extent), options.grid)
    X, Z = np.meshgrid(xs, zs, indexing="ij")
    V = _violation(rows, X, Z)

    def objective(p: np.ndarray) -> float:
        return _violation(rows, np.array(p[0]), np.exp(np.array(p[1]))).item()

    best_v, best_xz = float("inf"), (0.0, 1.0)
    starts = np.argsort(V, axis=None)[: options.refine_starts]
    for flat in starts:
        i, j = np.unravel_index(flat, V.shape)
        x0, z0 = float(X[i, j]), float(Z[i, j])
        if V[i, j] < best_v:
            best_v, best_xz = float(V[i, j]), (x0, z0)
        result = minimize(
            objective,
            np.array([x0, np.log(z0)]),
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 2000},
        )
        if result.fun < best_v:
            best_v, best_xz = float(result.fun), (float(result.x[0]), float(np.exp(result.x[1])))

    if best_v <= tol.nonneg:
        point = HyperbolaPoint.from_xz(*best_xz)
        logger.debug("Hyperbola point found", angle=angle, violation=best_v)
        return HyperbolaOutcome(
            SearchStatus.FOUND, point, family.at(point.x, point.y, point.z), best_v
        )
    if certify_infeasible(rows, 10.0 * tol.nonneg):
        logger.debug("Hyperbola branch certified infeasible", angle=angle)
        return HyperbolaOutcome(SearchStatus.INFEASIBLE, violation=best_v)
    logger.debug("Hyperbola search inconclusive", angle=angle, violation=best_v)
    return HyperbolaOutcome(SearchStatus.INCONCLUSIVE, violation=best_v)
