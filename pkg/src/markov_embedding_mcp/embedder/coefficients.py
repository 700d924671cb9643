"""Closed-form coefficients of real logarithms as polynomials in A = M - I.

Each formula solves the (confluent) Vandermonde system that the spectral
mapping theorem imposes on ``log(I + A) = alpha*A + beta*A**2 (+ gamma*A**3)``.
"""

import cmath
import math
from collections.abc import Sequence

from ..classifier import CasePattern, CaseTag
from ..exceptions import DegenerateDenominator

# smallest admissible |denominator| relative to the inputs
_DENOM_FLOOR = 1e-14


def _guard(value: complex, what: str, floor: float = _DENOM_FLOOR) -> None:
    if abs(value) <= floor:
        raise DegenerateDenominator(f"{what} vanishes ({abs(value):.3g})")


def albe_distinct(mu: float, nu: float, floor: float = _DENOM_FLOOR) -> tuple[float, float]:
    """Coefficients for sigma(A) = {0, mu, nu}, mu != nu, both in (-1, 0)."""
    _guard(mu, "mu", floor)
    _guard(nu, "nu", floor)
    _guard(mu - nu, "mu - nu", floor)
    den = mu * nu * (mu - nu)
    lmu, lnu = math.log1p(mu), math.log1p(nu)
    alpha = (mu * mu * lnu - nu * nu * lmu) / den
    beta = (-mu * lnu + nu * lmu) / den
    return alpha, beta


def albe_confluent(mu: float, floor: float = _DENOM_FLOOR) -> tuple[float, float]:
    """Coefficients for A with Jordan form 0 + J_2(mu), the mu = nu limit."""
    _guard(mu, "mu", floor)
    _guard(1.0 + mu, "1 + mu", floor)
    log = math.log1p(mu)
    alpha = 2.0 * log / mu - 1.0 / (1.0 + mu)
    beta = 1.0 / (mu * (1.0 + mu)) - log / (mu * mu)
    return alpha, beta


def complex_pair(lam: complex, k: int, floor: float = _DENOM_FLOOR) -> tuple[float, float]:
    """Branch-k coefficients for a conjugate pair {lam, conj(lam)}."""
    mu = lam - 1.0
    mub = mu.conjugate()
    den = abs(mu) ** 2 * (mub - mu)
    _guard(den, "|mu|^2 (conj(mu) - mu)", floor)
    z = cmath.log(lam) + 2j * math.pi * k
    zb = z.conjugate()
    alpha = (mub * mub * z - mu * mu * zb) / den
    beta = (-mub * z + mu * zb) / den
    return alpha.real, beta.real


def lagrange_three(
    mus: Sequence[complex], logs: Sequence[complex], floor: float = _DENOM_FLOOR
) -> tuple[float, float, float]:
    """Solve the 3x3 Vandermonde system mu_i*a + mu_i^2*b + mu_i^3*c = log_i.

    With m_i = mu_i * prod_{j != i}(mu_j - mu_i), the log_i coefficient is
    mu_j*mu_k/m_i in alpha, -(mu_j + mu_k)/m_i in beta and 1/m_i in gamma.
    Complex conjugate inputs give a real solution; the real part is returned.
    """
    alpha = beta = gamma = 0j
    for i in range(3):
        j, k = (n for n in range(3) if n != i)
        m_i = mus[i] * (mus[j] - mus[i]) * (mus[k] - mus[i])
        _guard(m_i, f"m_{i + 1}", floor)
        alpha += mus[j] * mus[k] / m_i * logs[i]
        beta += -(mus[j] + mus[k]) / m_i * logs[i]
        gamma += logs[i] / m_i
    return alpha.real, beta.real, gamma.real


def simple_real(lams: Sequence[float], floor: float = _DENOM_FLOOR) -> tuple[float, float, float]:
    """d=4, simple real spectrum {1, lam1, lam2, lam3}, all positive."""
    return lagrange_three(
        [lam - 1.0 for lam in lams], [math.log(lam) for lam in lams], floor
    )


def simple_complex(
    lam: float, theta: complex, k: int, floor: float = _DENOM_FLOOR
) -> tuple[float, float, float]:
    """d=4, spectrum {1, lam, theta, conj(theta)}, branch k on the pair."""
    z = cmath.log(theta) + 2j * math.pi * k
    mus = [complex(lam - 1.0), theta - 1.0, theta.conjugate() - 1.0]
    return lagrange_three(mus, [complex(math.log(lam)), z, z.conjugate()], floor)


def confluent_triple(lam: float, floor: float = _DENOM_FLOOR) -> tuple[float, float, float]:
    """d=4, Jordan form 1 + J_3(lam)."""
    mu = lam - 1.0
    _guard(mu, "mu", floor)
    rhs = (math.log(lam), 1.0 / lam, -1.0 / (lam * lam))
    rows = (
        (3.0 / mu, -2.0, mu / 2.0),
        (-3.0 / mu**2, 3.0 / mu, -1.0),
        (1.0 / mu**3, -1.0 / mu**2, 1.0 / (2.0 * mu)),
    )
    alpha, beta, gamma = (sum(r * v for r, v in zip(row, rhs)) for row in rows)
    return alpha, beta, gamma


def confluent_mixed(
    lam1: float, lam2: float, floor: float = _DENOM_FLOOR
) -> tuple[float, float, float]:
    """d=4, Jordan form diag(1, lam1) + J_2(lam2)."""
    a, b = lam1 - 1.0, lam2 - 1.0
    _guard(a, "mu1", floor)
    _guard(b, "mu2", floor)
    _guard(a - b, "mu1 - mu2", floor)
    d = a - b
    rhs = (math.log(lam1), math.log(lam2), 1.0 / lam2)
    rows = (
        (b * b / (a * d * d), a * (2 * a - 3 * b) / (b * d * d), -a / d),
        (-2 * b / (a * d * d), (3 * b * b - a * a) / (b * b * d * d), (a + b) / (b * d)),
        (1.0 / (a * d * d), (a - 2 * b) / (b * b * d * d), -1.0 / (b * d)),
    )
    alpha, beta, gamma = (sum(r * v for r, v in zip(row, rhs)) for row in rows)
    return alpha, beta, gamma


def degree_two(lam: float) -> tuple[float]:
    """Scalar coefficient when A**2 = (lam - 1) A."""
    _guard(1.0 - lam, "1 - lam")
    return (-math.log(lam) / (1.0 - lam),)


def smt_coeffs(case: CaseTag, k: int = 0, floor: float = _DENOM_FLOOR) -> tuple[float, ...]:
    """Coefficients of the branch-k real logarithm for the case's pattern.

    Raises:
        DegenerateDenominator: A denominator vanishes; callers fall back to
            the confluent formula or to the principal logarithm.
        ValueError: The pattern has no polynomial logarithm formula.
    """
    p = case.pattern
    e = case.eigen_data
    if p in (
        CasePattern.D2_SIMPLE,
        CasePattern.D3_DEG2_1_1_L,
        CasePattern.D3_DEG2_1_L_L_POS,
        CasePattern.D4_DEG2_TRIPLE_ONE,
        CasePattern.D4_DEG2_TRIPLE_L,
        CasePattern.D4_DEG2_DOUBLE_POS,
    ):
        return degree_two(e["lam"].real)
    if p in (CasePattern.D3_SIMPLE_REAL, CasePattern.D4_DEG3_TWO_ONES_DISTINCT):
        return albe_distinct(e["lam1"].real - 1.0, e["lam2"].real - 1.0, floor)
    if p in (
        CasePattern.D3_JORDAN2,
        CasePattern.D4_DEG3_TWO_ONES_JORDAN,
        CasePattern.D4_DEG3_L_JORDAN_L,
    ):
        return albe_confluent(e["lam"].real - 1.0, floor)
    if p in (CasePattern.D3_COMPLEX_PAIR, CasePattern.D4_DEG3_COMPLEX):
        return complex_pair(e["lam"], k, floor)
    if p is CasePattern.D4_DEG3_DOUBLE_L2_POS:
        return albe_distinct(e["lam1"].real - 1.0, e["lam2"].real - 1.0, floor)
    if p is CasePattern.D4_SIMPLE_REAL:
        return simple_real([e["lam1"].real, e["lam2"].real, e["lam3"].real], floor)
    if p is CasePattern.D4_SIMPLE_COMPLEX:
        return simple_complex(e["lam"].real, e["theta"], k, floor)
    if p is CasePattern.D4_JORDAN3:
        return confluent_triple(e["lam"].real, floor)
    if p is CasePattern.D4_MIXED_JORDAN2:
        return confluent_mixed(e["lam1"].real, e["lam2"].real, floor)
    raise ValueError(f"no polynomial logarithm formula for {p.value}")
