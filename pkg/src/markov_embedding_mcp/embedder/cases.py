"""Per-row deciders of the d=2, d=3 and d=4 case tables."""

import math
from collections.abc import Callable

import numpy as np
from loguru import logger

from ..classifier import CasePattern, CaseTag
from ..exceptions import DegenerateDenominator, IllConditioned
from ..linalg import Mat, Tolerances, poly_in, principal_log, real_jordan
from .coefficients import smt_coeffs
from .equal_input import embed_d3_eq_input_neg
from .hyperbola import HyperbolaOptions, hyperbola_search
from .results import (
    Construction,
    EmbeddingResult,
    GeneratorCandidate,
    Reason,
    SearchStatus,
    Uniqueness,
)
from .verify import certify, dedupe, near_generator

FACT_CUTH_THRESHOLD = math.exp(-math.pi)

# relative slack on the branch cone so that boundary branches are kept
_CONE_SLACK = 1e-9


def uniqueness_certificates(M: Mat, Q: Mat | None = None) -> Uniqueness:
    """Unique if min m_ii > 1/2 or det(M) * min m_ii > exp(-pi) * prod m_ii, else Unknown."""
    diag = np.diag(M)
    if diag.min() > 0.5:
        return Uniqueness.UNIQUE
    det = float(np.linalg.det(M))
    if det * diag.min() > FACT_CUTH_THRESHOLD * float(np.prod(diag)):
        return Uniqueness.UNIQUE
    return Uniqueness.UNKNOWN


def cone_factor(dim: int) -> float:
    """cot(pi/d): generator eigenvalues satisfy |Im z| <= |Re z| * cot(pi/d)."""
    return 1.0 / math.tan(math.pi / dim)


def branch_range(value: complex, dim: int) -> list[int]:
    """Branches k with |arg(value) + 2*pi*k| inside the generator cone, ordered by |k|."""
    log_mod = math.log(abs(value))
    phi = math.atan2(value.imag, value.real)
    bound = abs(log_mod) * cone_factor(dim) * (1.0 + _CONE_SLACK)
    lo = math.ceil((-bound - phi) / (2.0 * math.pi))
    hi = math.floor((bound - phi) / (2.0 * math.pi))
    return sorted(range(lo, hi + 1), key=lambda k: (abs(k), k))


def branch_count_bound(det: float, dim: int) -> int:
    """Upper bound on the number of generator branches for a complex pair."""
    factor = 2.0 * math.pi * (math.sqrt(3.0) if dim == 3 else 1.0)
    return math.floor(1.0 - math.log(det) / factor)


def rotation_branches(log_modulus: float, dim: int, odd: bool) -> list[int]:
    """Branches for a scalar 2x2 block: angle 2k*pi (or (2k+1)*pi when odd) inside the cone."""
    bound = abs(log_modulus) * cone_factor(dim) * (1.0 + _CONE_SLACK)
    limit = int(bound // math.pi) + 1
    ks = []
    for k in range(-limit, limit + 1):
        angle = (2 * k + 1) * math.pi if odd else 2 * k * math.pi
        if (odd or k != 0) and abs(angle) <= bound:
            ks.append(k)
    return sorted(ks, key=lambda k: (abs(k), k))


def _identity(M: Mat) -> Mat:
    return np.eye(M.shape[0])


def _below_unit(lam: complex, tol: Tolerances) -> Reason | None:
    """Gate lam in (0, 1)."""
    if lam.imag != 0 or lam.real <= tol.nonneg:
        return Reason.EIGENVALUE_OUT_OF_RANGE
    if lam.real >= 1.0 - tol.nonneg:
        return Reason.NEAR_BOUNDARY
    return None


def _gate(*reasons: Reason | None) -> EmbeddingResult | None:
    for reason in reasons:
        if reason is Reason.NEAR_BOUNDARY:
            return EmbeddingResult.undecided(reason)
        if reason is not None:
            return EmbeddingResult.not_embeddable(reason)
    return None


def _log_candidate(M: Mat, case: CaseTag, tol: Tolerances, k: int = 0) -> tuple[Mat, Construction]:
    """Branch-k logarithm from the coefficient formula; principal_log when it degenerates."""
    A = M - _identity(M)
    try:
        return poly_in(smt_coeffs(case, k), A), Construction.POLY_SMT
    except DegenerateDenominator:
        if k != 0:
            raise
        logger.debug("Degenerate coefficient formula, using principal logarithm")
        return principal_log(M, tol), Construction.PRINCIPAL_LOG


def _principal(M: Mat, case: CaseTag, tol: Tolerances) -> tuple[GeneratorCandidate | None, Mat]:
    """Certified principal logarithm, retrying with scipy when the formula is off."""
    Q, construction = _log_candidate(M, case, tol)
    try:
        return certify(Q, M, tol, 0, construction), Q
    except IllConditioned:
        if construction is Construction.PRINCIPAL_LOG:
            raise
        Q = principal_log(M, tol)
        return certify(Q, M, tol, 0, Construction.PRINCIPAL_LOG), Q


def _unique_log(M: Mat, case: CaseTag, tol: Tolerances) -> EmbeddingResult:
    """Cases whose only real logarithm with zero row sums is the principal one."""
    candidate, Q = _principal(M, case, tol)
    if candidate is None:
        if near_generator(Q, tol):
            return EmbeddingResult.undecided(Reason.NEAR_BOUNDARY)
        return EmbeddingResult.not_embeddable(Reason.LOG_NOT_GENERATOR)
    return EmbeddingResult.embeddable([candidate], Uniqueness.UNIQUE)


def embed_d2(M: Mat, tol: Tolerances | None = None) -> EmbeddingResult:
    """Kendall: embeddable iff 0 <= a + b < 1, with Q = -log(1-a-b)/(a+b) (M - I)."""
    tol = tol or Tolerances()
    a, b = float(M[0, 1]), float(M[1, 0])
    s = a + b
    if s <= tol.nonneg:
        candidate = certify(np.zeros((2, 2)), M, tol, 0, Construction.PRINCIPAL_LOG)
        assert candidate is not None
        return EmbeddingResult.embeddable([candidate], Uniqueness.UNIQUE)
    if 1.0 - s <= tol.nonneg:
        return EmbeddingResult.not_embeddable(Reason.DET_NONPOSITIVE)
    Q = -math.log1p(-s) / s * (M - _identity(M))
    candidate = certify(Q, M, tol, 0, Construction.POLY_SMT)
    if candidate is None:
        return EmbeddingResult.not_embeddable(Reason.LOG_NOT_GENERATOR)
    return EmbeddingResult.embeddable([candidate], Uniqueness.UNIQUE)


def _rotation_search(
    M: Mat,
    case: CaseTag,
    tol: Tolerances,
    fixed_block: Mat,
    log_modulus: float,
    ks: list[int],
    odd: bool,
    options: HyperbolaOptions,
    stop_at_first: bool,
) -> tuple[list[GeneratorCandidate], bool]:
    """Hyperbola search over the listed branches; returns (found, all_infeasible)."""
    decomposition = real_jordan(M, tol, case.structure)
    tail = decomposition.canonical[-2:, -2:]
    if not np.allclose(tail, tail[0, 0] * np.eye(2), atol=tol.rank):
        raise IllConditioned("expected a scalar 2x2 block in the last coordinates")

    found: list[GeneratorCandidate] = []
    all_infeasible = True
    for k in ks:
        angle = (2 * k + 1) * math.pi if odd else 2 * k * math.pi
        outcome = hyperbola_search(decomposition, fixed_block, log_modulus, angle, tol, options)
        logger.debug("Rotation branch searched", k=k, status=outcome.status.value)
        if outcome.status is SearchStatus.FOUND and outcome.generator is not None:
            candidate = certify(outcome.generator, M, tol, k, Construction.HYPERBOLA)
            if candidate is not None:
                found.append(candidate)
                all_infeasible = False
                if stop_at_first:
                    break
                continue
        if outcome.status is not SearchStatus.INFEASIBLE:
            all_infeasible = False
    return found, all_infeasible


def _scalar_pair_positive(
    M: Mat,
    case: CaseTag,
    tol: Tolerances,
    fixed_block: Mat,
    lam: float,
    options: HyperbolaOptions,
    all_branches: bool,
    complete_family: bool = True,
) -> EmbeddingResult:
    """Principal logarithm plus non-principal rotations of a positive double eigenvalue.

    ``complete_family`` is False when the eigenspace is larger than the
    rotation plane, so an empty search does not prove uniqueness.
    """
    principal, Q = _principal(M, case, tol)
    ks = rotation_branches(math.log(lam), case.dim, odd=False)

    if principal is not None and uniqueness_certificates(M, principal.matrix) is Uniqueness.UNIQUE:
        return EmbeddingResult.embeddable([principal], Uniqueness.UNIQUE)
    if not ks:
        if principal is None:
            if near_generator(Q, tol):
                return EmbeddingResult.undecided(Reason.NEAR_BOUNDARY)
            return EmbeddingResult.not_embeddable(Reason.LOG_NOT_GENERATOR)
        return EmbeddingResult.embeddable([principal], Uniqueness.UNIQUE)
    if principal is not None and not all_branches:
        return EmbeddingResult.embeddable([principal], Uniqueness.POSSIBLY_MORE)

    extra, all_infeasible = _rotation_search(
        M, case, tol, fixed_block, math.log(lam), ks, False, options, not all_branches
    )
    generators = dedupe(([principal] if principal else []) + extra, tol)
    if not generators:
        if all_infeasible:
            return EmbeddingResult.not_embeddable(Reason.NO_BRANCH_FEASIBLE)
        return EmbeddingResult.undecided(Reason.SEARCH_INCONCLUSIVE)
    if len(generators) > 1:
        return EmbeddingResult.embeddable(generators, Uniqueness.MULTIPLE_KNOWN)
    if all_infeasible and complete_family and principal is not None:
        return EmbeddingResult.embeddable(generators, Uniqueness.UNIQUE)
    return EmbeddingResult.embeddable(generators, Uniqueness.POSSIBLY_MORE)


def _scalar_pair_negative(
    M: Mat,
    case: CaseTag,
    tol: Tolerances,
    fixed_block: Mat,
    lam: float,
    options: HyperbolaOptions,
    all_branches: bool,
) -> EmbeddingResult:
    """A negative double eigenvalue: only odd rotations (2k+1)*pi can work."""
    ks = rotation_branches(math.log(abs(lam)), case.dim, odd=True)
    if not ks:
        return EmbeddingResult.not_embeddable(Reason.K_RANGE_EMPTY)
    generators, all_infeasible = _rotation_search(
        M, case, tol, fixed_block, math.log(abs(lam)), ks, True, options, not all_branches
    )
    generators = dedupe(generators, tol)
    if not generators:
        if all_infeasible:
            return EmbeddingResult.not_embeddable(Reason.NO_BRANCH_FEASIBLE)
        return EmbeddingResult.undecided(Reason.SEARCH_INCONCLUSIVE)
    if len(generators) > 1:
        return EmbeddingResult.embeddable(generators, Uniqueness.MULTIPLE_KNOWN)
    return EmbeddingResult.embeddable(
        generators,
        Uniqueness.UNIQUE
        if uniqueness_certificates(M, generators[0].matrix) is Uniqueness.UNIQUE
        else Uniqueness.POSSIBLY_MORE,
    )


def _enumerate_branches(
    M: Mat,
    case: CaseTag,
    tol: Tolerances,
    pair: complex,
    all_branches: bool,
) -> EmbeddingResult:
    """Complex pair cases: try every branch inside the generator cone."""
    ks = branch_range(pair, case.dim)
    if not ks:
        return EmbeddingResult.not_embeddable(Reason.K_RANGE_EMPTY)

    found: list[GeneratorCandidate] = []
    trouble = near = False
    A = M - _identity(M)
    for k in ks:
        try:
            Q = poly_in(smt_coeffs(case, k), A)
            candidate = certify(Q, M, tol, k, Construction.POLY_SMT)
        except (IllConditioned, DegenerateDenominator):
            trouble = True
            continue
        if candidate is None:
            near = near or near_generator(Q, tol)
            continue
        found.append(candidate)
        if not all_branches:
            break

    if not found:
        if trouble:
            return EmbeddingResult.undecided(Reason.ILL_CONDITIONED)
        if near:
            return EmbeddingResult.undecided(Reason.NEAR_BOUNDARY)
        return EmbeddingResult.not_embeddable(Reason.NO_BRANCH_FEASIBLE)
    found = dedupe(found, tol)
    if len(found) > 1:
        return EmbeddingResult.embeddable(found, Uniqueness.MULTIPLE_KNOWN)
    if len(ks) == 1 or (all_branches and not trouble):
        return EmbeddingResult.embeddable(found, Uniqueness.UNIQUE)
    certified = uniqueness_certificates(M, found[0].matrix)
    return EmbeddingResult.embeddable(
        found,
        Uniqueness.UNIQUE if certified is Uniqueness.UNIQUE else Uniqueness.POSSIBLY_MORE,
    )


def _modulus_gate(value: complex, tol: Tolerances) -> Reason | None:
    r = abs(value)
    if r <= tol.nonneg:
        return Reason.DET_NONPOSITIVE
    if r >= 1.0 + tol.nonneg:
        return Reason.UNIT_CIRCLE
    if r >= 1.0 - tol.nonneg:
        return Reason.NEAR_BOUNDARY
    return None


def embed_d3_deg2(
    M: Mat,
    case: CaseTag,
    tol: Tolerances | None = None,
    options: HyperbolaOptions | None = None,
    all_branches: bool = True,
) -> EmbeddingResult:
    """diag(1, 1, lam) and diag(1, lam, lam) with lam > 0: Q = -log(lam)/(1-lam) A."""
    tol = tol or Tolerances()
    lam = case.eigen_data["lam"]
    rejected = _gate(_below_unit(lam, tol))
    if rejected:
        return rejected
    if case.pattern is CasePattern.D3_DEG2_1_1_L:
        return _unique_log(M, case, tol)
    return _scalar_pair_positive(
        M, case, tol, np.zeros((1, 1)), lam.real, options or HyperbolaOptions(), all_branches
    )


def embed_d3_cyclic_real(M: Mat, case: CaseTag, tol: Tolerances | None = None) -> EmbeddingResult:
    """Simple real spectrum or 1 + J_2(lam): spectrum in (0, 1] and log(I + A) a generator."""
    tol = tol or Tolerances()
    lams = [v for k, v in case.eigen_data.items() if k.startswith("lam")]
    rejected = _gate(*(_below_unit(v, tol) for v in lams))
    if rejected:
        return rejected
    return _unique_log(M, case, tol)


def embed_d3_complex(
    M: Mat, case: CaseTag, tol: Tolerances | None = None, all_branches: bool = True
) -> EmbeddingResult:
    """Conjugate pair: some branch k gives a generator alpha_k A + beta_k A^2."""
    tol = tol or Tolerances()
    lam = case.eigen_data["lam"]
    rejected = _gate(_modulus_gate(lam, tol))
    if rejected:
        return rejected
    return _enumerate_branches(M, case, tol, lam, all_branches)


def embed_d4(
    M: Mat,
    case: CaseTag,
    tol: Tolerances | None = None,
    options: HyperbolaOptions | None = None,
    all_branches: bool = True,
) -> EmbeddingResult:
    """Decide a 4x4 Markov matrix according to its case-table row."""
    tol = tol or Tolerances()
    options = options or HyperbolaOptions()
    e = case.eigen_data
    P = CasePattern

    handlers: dict[CasePattern, Callable[[], EmbeddingResult]] = {
        P.D4_DEG2_TRIPLE_ONE: lambda: _gate(_below_unit(e["lam"], tol))
        or _unique_log(M, case, tol),
        P.D4_DEG2_TRIPLE_L: lambda: _gate(_below_unit(e["lam"], tol))
        or _scalar_pair_positive(
            M,
            case,
            tol,
            np.diag([0.0, math.log(e["lam"].real)]),
            e["lam"].real,
            options,
            all_branches,
            complete_family=False,
        ),
        P.D4_DEG2_DOUBLE_POS: lambda: _gate(_below_unit(e["lam"], tol))
        or _scalar_pair_positive(
            M, case, tol, np.zeros((2, 2)), e["lam"].real, options, all_branches
        ),
        P.D4_DEG2_DOUBLE_NEG: lambda: _scalar_pair_negative(
            M, case, tol, np.zeros((2, 2)), e["lam"].real, options, all_branches
        ),
        P.D4_DEG3_TWO_ONES_DISTINCT: lambda: _gate(
            _below_unit(e["lam1"], tol), _below_unit(e["lam2"], tol)
        )
        or _unique_log(M, case, tol),
        P.D4_DEG3_TWO_ONES_JORDAN: lambda: _gate(_below_unit(e["lam"], tol))
        or _unique_log(M, case, tol),
        P.D4_DEG3_L_JORDAN_L: lambda: _gate(_below_unit(e["lam"], tol))
        or _unique_log(M, case, tol),
        P.D4_DEG3_DOUBLE_L2_POS: lambda: _gate(
            _below_unit(e["lam1"], tol), _below_unit(e["lam2"], tol)
        )
        or _scalar_pair_positive(
            M,
            case,
            tol,
            np.diag([0.0, math.log(e["lam1"].real)]),
            e["lam2"].real,
            options,
            all_branches,
        ),
        P.D4_DEG3_DOUBLE_L2_NEG: lambda: _gate(_below_unit(e["lam1"], tol))
        or _scalar_pair_negative(
            M,
            case,
            tol,
            np.diag([0.0, math.log(e["lam1"].real)]),
            e["lam2"].real,
            options,
            all_branches,
        ),
        P.D4_DEG3_COMPLEX: lambda: _gate(_modulus_gate(e["lam"], tol))
        or _enumerate_branches(M, case, tol, e["lam"], all_branches),
        P.D4_SIMPLE_REAL: lambda: _gate(
            *(_below_unit(e[name], tol) for name in ("lam1", "lam2", "lam3"))
        )
        or _unique_log(M, case, tol),
        P.D4_SIMPLE_COMPLEX: lambda: _gate(
            _below_unit(e["lam"], tol), _modulus_gate(e["theta"], tol)
        )
        or _enumerate_branches(M, case, tol, e["theta"], all_branches),
        P.D4_JORDAN3: lambda: _gate(_below_unit(e["lam"], tol)) or _unique_log(M, case, tol),
        P.D4_MIXED_JORDAN2: lambda: _gate(
            _below_unit(e["lam1"], tol), _below_unit(e["lam2"], tol)
        )
        or _unique_log(M, case, tol),
    }
    if case.pattern not in handlers:
        raise ValueError(f"embed_d4 does not handle {case.pattern.value}")
    return handlers[case.pattern]()


def embed_d3(
    M: Mat,
    case: CaseTag,
    tol: Tolerances | None = None,
    options: HyperbolaOptions | None = None,
    all_branches: bool = True,
) -> EmbeddingResult:
    """Route a 3x3 Markov matrix to its case decider."""
    tol = tol or Tolerances()
    P = CasePattern
    if case.pattern in (P.D3_DEG2_1_1_L, P.D3_DEG2_1_L_L_POS):
        return embed_d3_deg2(M, case, tol, options, all_branches)
    if case.pattern is P.D3_DEG2_1_L_L_NEG:
        return embed_d3_eq_input_neg(M, tol)
    if case.pattern in (P.D3_SIMPLE_REAL, P.D3_JORDAN2):
        return embed_d3_cyclic_real(M, case, tol)
    if case.pattern is P.D3_COMPLEX_PAIR:
        return embed_d3_complex(M, case, tol, all_branches)
    raise ValueError(f"embed_d3 does not handle {case.pattern.value}")


__all__ = [
    "branch_count_bound",
    "branch_range",
    "embed_d2",
    "embed_d3",
    "embed_d3_complex",
    "embed_d3_cyclic_real",
    "embed_d3_deg2",
    "embed_d4",
    "rotation_branches",
    "uniqueness_certificates",
]
