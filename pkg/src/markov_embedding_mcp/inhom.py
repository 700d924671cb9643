"""Time-inhomogeneous Markov flows and g-embeddability for d = 3.

Flows solve ``M'(t) = M(t) Q(t)`` with ``M(0) = I`` for a schedule of
generators that is constant or tabulated on a uniform grid per segment.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import reduce

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike
from scipy.integrate import cumulative_simpson, simpson

from .embedder import equal_input_parameters
from .exceptions import (
    IllConditioned,
    NotConverged,
    NotTotallyPositive,
    RejectsDimension,
    SpectrumOnCut,
)
from .linalg import Mat, Tolerances, as_mat, is_generator, is_markov, mat_exp

# relative slack for matching an evaluation time to a grid point
_GRID_SLACK = 1e-9


@dataclass(frozen=True)
class ConstantSegment:
    Q: Mat
    duration: float

    @property
    def dim(self) -> int:
        return self.Q.shape[0]


@dataclass(frozen=True)
class SampledSegment:
    """Generator values Q_0..Q_n on a uniform grid of step ``step``."""

    samples: tuple[Mat, ...]
    step: float

    @property
    def duration(self) -> float:
        return self.step * (len(self.samples) - 1)

    @property
    def dim(self) -> int:
        return self.samples[0].shape[0]

    def stacked(self) -> np.ndarray:
        return np.stack(self.samples)


Segment = ConstantSegment | SampledSegment


@dataclass(frozen=True)
class Schedule:
    """Ordered segments of a piecewise-continuous generator family.

    Raises:
        ValueError: A generator fails ``is_generator``, a duration or step is
            not positive, a sampled segment has fewer than 3 samples, or the
            dimensions disagree.
    """

    segments: tuple[Segment, ...]
    tol: Tolerances = field(default_factory=Tolerances, compare=False)

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("schedule needs at least one segment")
        dims = {seg.dim for seg in self.segments}
        if len(dims) != 1:
            raise ValueError(f"segments disagree on dimension: {sorted(dims)}")
        for n, seg in enumerate(self.segments):
            if isinstance(seg, ConstantSegment):
                generators = (seg.Q,)
                if seg.duration <= 0:
                    raise ValueError(f"segment {n}: duration must be positive")
            else:
                generators = seg.samples
                if seg.step <= 0 or len(seg.samples) < 3:
                    raise ValueError(f"segment {n}: needs step > 0 and at least 3 samples")
            for Q in generators:
                if not is_generator(Q, self.tol):
                    raise ValueError(f"segment {n}: not a Markov generator")

    @classmethod
    def constant(cls, Q: ArrayLike, duration: float) -> "Schedule":
        return cls((ConstantSegment(as_mat(Q), float(duration)),))

    @classmethod
    def piecewise(cls, pieces: list[tuple[ArrayLike, float]]) -> "Schedule":
        return cls(tuple(ConstantSegment(as_mat(Q), float(d)) for Q, d in pieces))

    @property
    def dim(self) -> int:
        return self.segments[0].dim

    @property
    def span(self) -> float:
        return sum(seg.duration for seg in self.segments)

    def truncated(self, t: float) -> "Schedule":
        """The schedule restricted to [0, t]; t inside a sampled segment must be on its grid."""
        if t <= 0 or t > self.span * (1.0 + _GRID_SLACK):
            raise ValueError(f"time {t} outside (0, {self.span}]")
        kept: list[Segment] = []
        start = 0.0
        for seg in self.segments:
            if t >= start + seg.duration * (1.0 - _GRID_SLACK):
                kept.append(seg)
            else:
                local = t - start
                if local <= _GRID_SLACK * max(1.0, t):
                    break
                if isinstance(seg, ConstantSegment):
                    kept.append(ConstantSegment(seg.Q, local))
                else:
                    steps = local / seg.step
                    index = round(steps)
                    if abs(steps - index) > _GRID_SLACK * max(1.0, steps):
                        raise ValueError(f"time {t} is not on the sampling grid")
                    if index >= 2:
                        kept.append(SampledSegment(seg.samples[: index + 1], seg.step))
                    elif index == 1:
                        # two samples: trapezoid average
                        avg = 0.5 * (seg.samples[0] + seg.samples[1])
                        kept.append(ConstantSegment(avg, seg.step))
                break
            start += seg.duration
        return Schedule(tuple(kept), self.tol)


@dataclass(frozen=True)
class PoissonFactor:
    """``I - a E_ii + a E_ij``."""

    i: int
    j: int
    a: float
    dim: int = 3

    def __post_init__(self) -> None:
        if self.i == self.j:
            raise ValueError("Poisson factor needs i != j")
        if not (0 <= self.i < self.dim and 0 <= self.j < self.dim):
            raise ValueError(f"indices ({self.i}, {self.j}) outside dimension {self.dim}")
        if not 0.0 <= self.a <= 1.0:
            raise ValueError(f"parameter a = {self.a} outside [0, 1]")

    @property
    def singular(self) -> bool:
        return self.a == 1.0


class GVerdict(str, Enum):
    G_EMBEDDABLE = "GEmbeddable"
    NOT_G_EMBEDDABLE = "NotGEmbeddable"
    UNDECIDED = "Undecided"


class GRoute(str, Enum):
    """Which criterion produced the verdict."""

    DET_NONPOSITIVE = "DET_NONPOSITIVE"
    NECESSARY_FAILED = "NECESSARY_FAILED"
    ZERO_OFF_DIAGONAL = "ZERO_OFF_DIAGONAL"
    B_AT_LEAST_DET = "B_AT_LEAST_DET"
    B_BELOW_DET_LARGE_DET = "B_BELOW_DET_LARGE_DET"
    B_BELOW_DET_SMALL_DET = "B_BELOW_DET_SMALL_DET"


@dataclass(frozen=True)
class GReport:
    necessary_ok: bool
    verdict: GVerdict
    route: GRoute
    det: float
    b_quantity: float | None = None
    factor_bound: int | None = None
    det_factor_bound: int | None = None
    factors: tuple[PoissonFactor, ...] | None = None

    def __post_init__(self) -> None:
        if self.verdict is GVerdict.G_EMBEDDABLE and not self.necessary_ok:
            raise ValueError("GEmbeddable requires the necessary condition")


# ---------------------------------------------------------------------------
# flows
# ---------------------------------------------------------------------------


def evolve(s: Schedule) -> Mat:
    """Product of segment propagators in time order.

    Constant segments contribute ``exp(d Q)``. Sampled segments use the
    exponential midpoint rule ``exp(h (Q_k + Q_{k+1}) / 2)`` per grid step.
    """
    factors: list[Mat] = []
    for seg in s.segments:
        if isinstance(seg, ConstantSegment):
            factors.append(mat_exp(seg.duration * seg.Q))
        else:
            for left, right in zip(seg.samples, seg.samples[1:]):
                factors.append(mat_exp(0.5 * seg.step * (left + right)))
    return reduce(np.matmul, factors, np.eye(s.dim))


class _PolyTerm:
    """Matrix polynomial sum_k C_k tau^k in local time on a constant segment."""

    def __init__(self, coeffs: list[Mat]):
        self.coeffs = coeffs

    def integrate_times(self, Q: Mat, start: Mat) -> "_PolyTerm":
        """start + int_0^tau p(sigma) Q dsigma."""
        return _PolyTerm([start] + [C @ Q / (k + 1) for k, C in enumerate(self.coeffs)])

    def at(self, tau: float) -> Mat:
        result = np.zeros_like(self.coeffs[0])
        for C in reversed(self.coeffs):
            result = result * tau + C
        return result


def _next_term(s: Schedule, previous: list) -> list:
    """I_{n+1} on every segment from I_n."""
    carry = np.zeros((s.dim, s.dim))
    result = []
    for seg, term in zip(s.segments, previous):
        if isinstance(seg, ConstantSegment):
            new = term.integrate_times(seg.Q, carry)
            carry = new.at(seg.duration)
        else:
            integrand = np.einsum("kij,kjl->kil", term, seg.stacked())
            new = carry + cumulative_simpson(integrand, dx=seg.step, axis=0, initial=0)
            carry = new[-1]
        result.append(new)
    return result


def _end_value(s: Schedule, terms: list) -> Mat:
    seg, last = s.segments[-1], terms[-1]
    if isinstance(seg, ConstantSegment):
        return last.at(seg.duration)
    return last[-1]


def peano_baker_terms(
    s: Schedule, t: float, max_terms: int = 200, tol: float = 1e-12
) -> list[Mat]:
    """The terms I_1(t), I_2(t), ... of the Peano-Baker series, up to truncation.

    ``I_1(t) = int_0^t Q`` and ``I_{n+1}(t) = int_0^t I_n(tau) Q(tau) dtau``.
    Constant segments are integrated exactly; sampled segments with the
    cumulative Simpson rule on their grid.

    Raises:
        NotConverged: ``max_terms`` reached with ``||I_n||_inf >= tol``.
        IllConditioned: A term lost its zero row sums.
    """
    s = s.truncated(t)
    d = s.dim
    current: list = [
        _PolyTerm([np.eye(d)])
        if isinstance(seg, ConstantSegment)
        else np.broadcast_to(np.eye(d), (len(seg.samples), d, d))
        for seg in s.segments
    ]
    terms: list[Mat] = []
    for n in range(1, max_terms + 1):
        current = _next_term(s, current)
        value = _end_value(s, current)
        size = float(np.linalg.norm(value, np.inf))
        if float(np.max(np.abs(value.sum(axis=1)))) > 1e-10 * max(1.0, size):
            raise IllConditioned(f"Peano-Baker term {n} lost zero row sums")
        terms.append(value)
        if size < tol:
            logger.debug("Peano-Baker series truncated", terms=n, last_norm=size)
            return terms
    raise NotConverged(f"Peano-Baker series did not reach {tol:g} within {max_terms} terms")


def peano_baker(s: Schedule, t: float, max_terms: int = 200, tol: float = 1e-12) -> Mat:
    """I + sum_n I_n(t)."""
    return np.eye(s.dim) + sum(peano_baker_terms(s, t, max_terms, tol))


def _integral(s: Schedule, values_of) -> float:
    """int over the schedule of a scalar function of the generator."""
    total = 0.0
    for seg in s.segments:
        if isinstance(seg, ConstantSegment):
            total += values_of(seg.Q) * seg.duration
        else:
            total += float(simpson([values_of(Q) for Q in seg.samples], dx=seg.step))
    return total


def liouville_det(s: Schedule, t: float) -> float:
    """exp(int_0^t trace Q), the determinant of the flow at time t."""
    return math.exp(_integral(s.truncated(t), lambda Q: float(np.trace(Q))))


def _summatory(Q: Mat, tol: Tolerances) -> float:
    c_vec = equal_input_parameters(Q + np.eye(Q.shape[0]), tol)
    if c_vec is None:
        raise ValueError("schedule contains a generator that is not equal-input")
    return float(c_vec.sum())


def equal_input_flow_parameter(c0: float, s: Schedule, t: float | None = None) -> float:
    """Summatory parameter at time t of an equal-input flow started at c0.

    Along the flow ``1 - c(t) = (1 - c0) exp(-int_0^t c~)`` with c~ the
    summatory parameter of the generator.
    """
    s = s.truncated(t if t is not None else s.span)
    integral = _integral(s, lambda Q: _summatory(Q, s.tol))
    return 1.0 - (1.0 - c0) * math.exp(-integral)


# ---------------------------------------------------------------------------
# Poisson matrices
# ---------------------------------------------------------------------------


def _elementary_rate(i: int, j: int, dim: int) -> Mat:
    """R_ij = -E_ii + E_ij."""
    R = np.zeros((dim, dim))
    R[i, i], R[i, j] = -1.0, 1.0
    return R


def poisson_matrix(f: PoissonFactor) -> Mat:
    return np.eye(f.dim) + f.a * _elementary_rate(f.i, f.j, f.dim)


def bangbang_product(fs: list[PoissonFactor], dim: int = 3) -> Mat:
    """Ordered product of Poisson matrices; the identity for an empty list."""
    if fs and any(f.dim != fs[0].dim for f in fs):
        raise ValueError("Poisson factors disagree on dimension")
    size = fs[0].dim if fs else dim
    return reduce(np.matmul, (poisson_matrix(f) for f in fs), np.eye(size))


def poisson_generator(i: int, j: int, alpha: float, dim: int = 3) -> Mat:
    """-alpha E_ii + alpha E_ij."""
    if alpha < 0:
        raise ValueError("Poisson rate must be nonnegative")
    return alpha * _elementary_rate(i, j, dim)


def poisson_embedding(f: PoissonFactor) -> Mat:
    """Generator of a regular Poisson matrix, with rate -log(1 - a).

    Raises:
        SpectrumOnCut: The factor is singular (a = 1).
    """
    if f.singular:
        raise SpectrumOnCut("singular Poisson matrix has no generator")
    return poisson_generator(f.i, f.j, -math.log1p(-f.a), f.dim)


# ---------------------------------------------------------------------------
# g-embeddability
# ---------------------------------------------------------------------------


def g_necessary(M: ArrayLike, tol: Tolerances | None = None) -> bool:
    """prod(m_ii) >= det(M) > 0."""
    tol = tol or Tolerances()
    M = as_mat(M)
    det = float(np.linalg.det(M))
    return det > tol.nonneg and float(np.prod(np.diag(M))) >= det - tol.nonneg


def b_quantity(M: ArrayLike) -> float:
    """max over (i, j) of m_ii m_jj / m_ij * (-1)^(i+j+delta_ij-1) * minor_ij.

    Raises:
        RejectsDimension: M is not 3x3.
        NotTotallyPositive: Some entry of M is not strictly positive.
    """
    M = as_mat(M)
    if M.shape != (3, 3):
        raise RejectsDimension("the B quantity is only defined for 3x3 matrices")
    if np.any(M <= 0):
        raise NotTotallyPositive("every entry must be strictly positive")
    best = -math.inf
    for i in range(3):
        for j in range(3):
            minor = float(np.linalg.det(np.delete(np.delete(M, i, axis=0), j, axis=1)))
            sign = 1.0 if i == j else -((-1.0) ** (i + j))
            best = max(best, M[i, i] * M[j, j] / M[i, j] * sign * minor)
    return best


def factor_bound_from_det(det: float) -> int:
    """6 * ceil(log(det) / log(1/2)) Poisson factors suffice for g-embeddable M."""
    if det <= 0:
        raise ValueError("determinant must be positive")
    return 6 * math.ceil(math.log(det) / math.log(0.5))


def factor_bound_small_det(det: float) -> int:
    """n_k for det in [1/8^k, 1/8^(k-1)), k >= 2."""
    if not 0 < det < 1.0 / 8.0:
        raise ValueError("bound applies to 0 < det < 1/8")
    k = max(2, math.ceil(-math.log(det) / math.log(8.0)))
    while det < 8.0 ** (-k):
        k += 1
    while k > 2 and det >= 8.0 ** (-(k - 1)):
        k -= 1
    if det >= 0.5 * 8.0 ** (-(k - 1)):
        return 5 * k - 2
    return 5 * k - 1


def g_embed_d3(M: ArrayLike, tol: Tolerances | None = None) -> GReport:
    """g-embeddability of a 3x3 Markov matrix.

    A zero off-diagonal entry reduces the question to the necessary
    condition. For totally positive M, ``B_M >= det(M)`` is sufficient and
    ``B_M < det(M)`` with ``det(M) >= 1/8`` rules g-embeddability out. The
    remaining region is Undecided.

    Raises:
        RejectsDimension: M is not 3x3.
        ValueError: M is not Markov.
    """
    tol = tol or Tolerances()
    M = as_mat(M)
    if M.shape != (3, 3):
        raise RejectsDimension("g-embeddability is only decided for 3x3 matrices")
    if not is_markov(M, tol):
        raise ValueError("g_embed_d3 expects a Markov matrix")

    det = float(np.linalg.det(M))
    if det <= tol.nonneg:
        return GReport(False, GVerdict.NOT_G_EMBEDDABLE, GRoute.DET_NONPOSITIVE, det)
    det_bound = factor_bound_from_det(min(det, 1.0))
    if not g_necessary(M, tol):
        return GReport(
            necessary_ok=False,
            verdict=GVerdict.NOT_G_EMBEDDABLE,
            route=GRoute.NECESSARY_FAILED,
            det=det,
            det_factor_bound=det_bound,
        )

    if np.any(M[~np.eye(3, dtype=bool)] <= tol.nonneg):
        return GReport(
            necessary_ok=True,
            verdict=GVerdict.G_EMBEDDABLE,
            route=GRoute.ZERO_OFF_DIAGONAL,
            det=det,
            factor_bound=5,
            det_factor_bound=det_bound,
        )

    b = b_quantity(M)
    logger.debug("B quantity", b=b, det=det)
    if b >= det:
        verdict, route, bound = GVerdict.G_EMBEDDABLE, GRoute.B_AT_LEAST_DET, 6
    elif det >= 1.0 / 8.0:
        verdict, route, bound = GVerdict.NOT_G_EMBEDDABLE, GRoute.B_BELOW_DET_LARGE_DET, None
    else:
        verdict, route = GVerdict.UNDECIDED, GRoute.B_BELOW_DET_SMALL_DET
        bound = factor_bound_small_det(det)
    return GReport(
        necessary_ok=True,
        verdict=verdict,
        route=route,
        det=det,
        b_quantity=b,
        factor_bound=bound,
        det_factor_bound=det_bound,
    )


def star_point(dim: int) -> Mat:
    """J_d = (1/d) C(1, ..., 1), the idempotent all g-embeddable matrices see as a star center."""
    if dim not in (2, 3, 4):
        raise RejectsDimension(f"dimension {dim} is outside 2..4")
    return np.full((dim, dim), 1.0 / dim)


def star_segment(P: ArrayLike, c: float) -> Mat:
    """P ((1 - c) I + c J_d) = (1 - c) P + c J_d."""
    P = as_mat(P)
    if not 0.0 <= c <= 1.0:
        raise ValueError("c must lie in [0, 1]")
    return (1.0 - c) * P + c * star_point(P.shape[0])
