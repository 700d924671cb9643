"""Case classification of Markov matrices and cheap necessary conditions.

Every Markov matrix of dimension 2..4 maps to exactly one :class:`CasePattern`,
the row of the d=3 or d=4 case table (or the d=2 dichotomy) selected by its
minimal polynomial degree and Jordan structure.
"""

import itertools
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike

from .exceptions import IllConditioned
from .linalg import (
    JordanStructure,
    Spectrum,
    Tolerances,
    as_mat,
    eigenvalues,
    is_markov,
    jordan_structure,
)


class CasePattern(str, Enum):
    """One value per row of the case tables."""

    D2_IDENTITY = "D2_IDENTITY"
    D2_SIMPLE = "D2_SIMPLE"

    D3_IDENTITY = "D3_IDENTITY"
    D3_DEG2_1_1_L = "D3_DEG2_1_1_L"
    D3_DEG2_1_L_L_POS = "D3_DEG2_1_L_L_POS"
    D3_DEG2_1_L_L_NEG = "D3_DEG2_1_L_L_NEG"
    D3_SIMPLE_REAL = "D3_SIMPLE_REAL"
    D3_JORDAN2 = "D3_JORDAN2"
    D3_COMPLEX_PAIR = "D3_COMPLEX_PAIR"

    D4_IDENTITY = "D4_IDENTITY"
    D4_DEG2_TRIPLE_ONE = "D4_DEG2_TRIPLE_ONE"
    D4_DEG2_TRIPLE_L = "D4_DEG2_TRIPLE_L"
    D4_DEG2_DOUBLE_POS = "D4_DEG2_DOUBLE_POS"
    D4_DEG2_DOUBLE_NEG = "D4_DEG2_DOUBLE_NEG"
    D4_DEG3_TWO_ONES_DISTINCT = "D4_DEG3_TWO_ONES_DISTINCT"
    D4_DEG3_TWO_ONES_JORDAN = "D4_DEG3_TWO_ONES_JORDAN"
    D4_DEG3_L_JORDAN_L = "D4_DEG3_L_JORDAN_L"
    D4_DEG3_DOUBLE_L2_POS = "D4_DEG3_DOUBLE_L2_POS"
    D4_DEG3_DOUBLE_L2_NEG = "D4_DEG3_DOUBLE_L2_NEG"
    D4_DEG3_COMPLEX = "D4_DEG3_COMPLEX"
    D4_SIMPLE_REAL = "D4_SIMPLE_REAL"
    D4_SIMPLE_COMPLEX = "D4_SIMPLE_COMPLEX"
    D4_JORDAN3 = "D4_JORDAN3"
    D4_MIXED_JORDAN2 = "D4_MIXED_JORDAN2"


IDENTITY_PATTERNS = frozenset(
    {CasePattern.D2_IDENTITY, CasePattern.D3_IDENTITY, CasePattern.D4_IDENTITY}
)


@dataclass(frozen=True)
class CaseTag:
    """Classification result.

    ``eigen_data`` binds the named eigenvalues of the pattern: ``lam`` for a
    single non-unit eigenvalue, ``lam1``/``lam2``/``lam3`` for several (for the
    d=4 degree-3 rows ``lam2`` is the repeated or Jordan one), ``theta`` for the
    complex eigenvalue of a d=4 simple spectrum. Complex values are stored with
    positive imaginary part.
    """

    dim: int
    min_poly_degree: int
    pattern: CasePattern
    eigen_data: dict[str, complex] = field(default_factory=dict)
    spectrum: Spectrum | None = field(default=None, compare=False, repr=False)
    structure: JordanStructure | None = field(default=None, compare=False, repr=False)

    def real(self, name: str) -> float:
        return self.eigen_data[name].real


@dataclass(frozen=True)
class NecessaryReport:
    """Cheap necessary conditions; any false flag rules out an embedding."""

    diag_positive: bool
    det_positive: bool
    unit_circle_ok: bool
    culver_ok: bool
    transitivity_ok: bool

    @property
    def all_ok(self) -> bool:
        return all(
            (
                self.diag_positive,
                self.det_positive,
                self.unit_circle_ok,
                self.culver_ok,
                self.transitivity_ok,
            )
        )


def _non_unit(structure: JordanStructure) -> list[tuple[complex, tuple[int, ...]]]:
    return [(v, s) for v, s in structure.blocks if v != 1.0]


def _sign_pattern(
    value: complex, pos: CasePattern, neg: CasePattern, floor: float
) -> CasePattern:
    # repeated eigenvalues here are real; lambda within the floor of 0 means M
    # is singular and shares the non-positive row
    return pos if value.real > floor else neg


def _classify_d2(
    structure: JordanStructure, tol: Tolerances
) -> tuple[CasePattern, dict[str, complex]]:
    if structure.min_poly_degree == 1:
        return CasePattern.D2_IDENTITY, {}
    ((lam, _),) = _non_unit(structure)
    return CasePattern.D2_SIMPLE, {"lam": lam}


def _classify_d3(
    structure: JordanStructure, tol: Tolerances
) -> tuple[CasePattern, dict[str, complex]]:
    degree = structure.min_poly_degree
    ones = sum(structure.sizes_for(1.0))
    others = _non_unit(structure)
    if degree == 1:
        return CasePattern.D3_IDENTITY, {}

    if degree == 2:
        ((lam, sizes),) = others
        if ones == 2:
            return CasePattern.D3_DEG2_1_1_L, {"lam": lam}
        pattern = _sign_pattern(
            lam,
            CasePattern.D3_DEG2_1_L_L_POS,
            CasePattern.D3_DEG2_1_L_L_NEG,
            tol.nonneg,
        )
        return pattern, {"lam": lam}

    complex_roots = [v for v, _ in others if v.imag != 0]
    if complex_roots:
        lam = next(v for v in complex_roots if v.imag > 0)
        return CasePattern.D3_COMPLEX_PAIR, {"lam": lam}
    if len(others) == 1:
        return CasePattern.D3_JORDAN2, {"lam": others[0][0]}
    lam1, lam2 = sorted((v for v, _ in others), key=lambda v: -v.real)
    return CasePattern.D3_SIMPLE_REAL, {"lam1": lam1, "lam2": lam2}


def _classify_d4(
    structure: JordanStructure, tol: Tolerances
) -> tuple[CasePattern, dict[str, complex]]:
    degree = structure.min_poly_degree
    ones = sum(structure.sizes_for(1.0))
    others = _non_unit(structure)
    if degree == 1:
        return CasePattern.D4_IDENTITY, {}

    if degree == 2:
        ((lam, _),) = others
        if ones == 3:
            return CasePattern.D4_DEG2_TRIPLE_ONE, {"lam": lam}
        if ones == 1:
            return CasePattern.D4_DEG2_TRIPLE_L, {"lam": lam}
        pattern = _sign_pattern(
            lam,
            CasePattern.D4_DEG2_DOUBLE_POS,
            CasePattern.D4_DEG2_DOUBLE_NEG,
            tol.nonneg,
        )
        return pattern, {"lam": lam}

    complex_roots = [v for v, _ in others if v.imag > 0]

    if degree == 3:
        if complex_roots:
            return CasePattern.D4_DEG3_COMPLEX, {"lam": complex_roots[0]}
        if ones == 2:
            if len(others) == 2:
                lam1, lam2 = sorted((v for v, _ in others), key=lambda v: -v.real)
                return CasePattern.D4_DEG3_TWO_ONES_DISTINCT, {"lam1": lam1, "lam2": lam2}
            return CasePattern.D4_DEG3_TWO_ONES_JORDAN, {"lam": others[0][0]}
        if len(others) == 1:
            return CasePattern.D4_DEG3_L_JORDAN_L, {"lam": others[0][0]}
        simple = next(v for v, s in others if sum(s) == 1)
        double = next(v for v, s in others if sum(s) == 2)
        pattern = _sign_pattern(
            double,
            CasePattern.D4_DEG3_DOUBLE_L2_POS,
            CasePattern.D4_DEG3_DOUBLE_L2_NEG,
            tol.nonneg,
        )
        return pattern, {"lam1": simple, "lam2": double}

    if complex_roots:
        lam = next(v for v, _ in others if v.imag == 0)
        return CasePattern.D4_SIMPLE_COMPLEX, {"lam": lam, "theta": complex_roots[0]}
    if len(others) == 3:
        lams = sorted((v for v, _ in others), key=lambda v: -v.real)
        return CasePattern.D4_SIMPLE_REAL, dict(zip(("lam1", "lam2", "lam3"), lams))
    if len(others) == 1:
        return CasePattern.D4_JORDAN3, {"lam": others[0][0]}
    simple = next(v for v, s in others if s == (1,))
    jordan = next(v for v, s in others if s == (2,))
    return CasePattern.D4_MIXED_JORDAN2, {"lam1": simple, "lam2": jordan}


def classify(M: ArrayLike, tol: Tolerances | None = None) -> CaseTag:
    """Map a Markov matrix to its case-table row.

    Raises:
        ValueError: M is not Markov.
        IllConditioned: Propagated from the Jordan structure, or a nontrivial
            Jordan block at eigenvalue 1.
    """
    tol = tol or Tolerances()
    M = as_mat(M)
    if not is_markov(M, tol):
        raise ValueError("classify expects a Markov matrix")

    spectrum = eigenvalues(M, tol)
    structure = jordan_structure(M, tol, spectrum)
    if any(size > 1 for size in structure.sizes_for(1.0)):
        raise IllConditioned("Jordan block of size >= 2 at eigenvalue 1")

    dim = M.shape[0]
    classify_dim = {2: _classify_d2, 3: _classify_d3, 4: _classify_d4}[dim]
    pattern, eigen_data = classify_dim(structure, tol)
    logger.debug(
        "Case dispatched",
        dim=dim,
        pattern=pattern.value,
        min_poly_degree=structure.min_poly_degree,
    )
    return CaseTag(
        dim=dim,
        min_poly_degree=structure.min_poly_degree,
        pattern=pattern,
        eigen_data=eigen_data,
        spectrum=spectrum,
        structure=structure,
    )


def _culver_ok(M: np.ndarray, spectrum: Spectrum, tol: Tolerances) -> bool:
    """Negative eigenvalues need every Jordan block size to occur an even number of times."""
    negatives = [v for v in spectrum.roots if v.imag == 0 and v.real < 0]
    if not negatives:
        return True
    try:
        structure = jordan_structure(M, tol, spectrum)
    except IllConditioned:
        return all(spectrum.multiplicity(v) % 2 == 0 for v in negatives)
    for value in negatives:
        sizes = structure.sizes_for(value)
        if any(sizes.count(s) % 2 for s in set(sizes)):
            return False
    return True


def necessary_checks(M: ArrayLike, tol: Tolerances | None = None) -> NecessaryReport:
    """Run the diagonal, determinant, unit-circle, Culver and transitivity checks."""
    tol = tol or Tolerances()
    M = as_mat(M)
    d = M.shape[0]
    spectrum = eigenvalues(M, tol)
    det = float(np.linalg.det(M))
    positive = M > tol.nonneg

    transitivity_ok = all(
        positive[i, j] or not (positive[i, k] and positive[k, j])
        for i, j, k in itertools.product(range(d), repeat=3)
    )
    report = NecessaryReport(
        diag_positive=bool(np.all(np.diag(M) > tol.nonneg)),
        det_positive=det > tol.nonneg,
        unit_circle_ok=all(
            abs(v) < 1.0 - tol.nonneg for v in spectrum.roots if v != 1.0
        ),
        culver_ok=det > tol.nonneg and _culver_ok(M, spectrum, tol),
        transitivity_ok=transitivity_ok,
    )
    logger.debug("Necessary checks", report=report)
    return report
