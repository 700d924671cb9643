"""Closed-form roots of monic polynomials of degree 1 to 4.

Quadratic by the cancellation-free formula, cubic by Cardano (trigonometric
form for three real roots), quartic by Ferrari with a depressed-cubic
resolvent. Coefficients are real and given highest degree first, leading 1
included: ``[1, a, b, c]`` stands for ``x**3 + a*x**2 + b*x + c``.
"""

import cmath
import math
from collections.abc import Sequence

import numpy as np
from loguru import logger

# relative discriminant below which the closed forms hand over to numpy.roots
DISCRIMINANT_FALLBACK = 1e-12

# relative imaginary part below which a root counts as real
REAL_ROOT_TOL = 1e-12

# |2z - p|, relative to 1 + |p|, below which the quartic splits as a biquadratic
BIQUADRATIC_TOL = 1e-12


def solve_quadratic(b: complex, c: complex) -> list[complex]:
    """Roots of x**2 + b*x + c."""
    sq = cmath.sqrt(b * b - 4 * c)
    # pick the sign that avoids cancellation
    if abs(b + sq) < abs(b - sq):
        sq = -sq
    q = -(b + sq) / 2
    if q == 0:
        return [0j, 0j]
    return [q, c / q]


def solve_cubic(a: float, b: float, c: float) -> list[complex]:
    """Roots of x**3 + a*x**2 + b*x + c for real a, b, c."""
    shift = a / 3.0
    p = b - a * a / 3.0
    q = 2.0 * a**3 / 27.0 - a * b / 3.0 + c
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3

    if disc < 0:
        # three distinct real roots
        r = math.sqrt(-p / 3.0)
        cos_arg = max(-1.0, min(1.0, -q / 2.0 / r**3))
        phi = math.acos(cos_arg) / 3.0
        ys = [2.0 * r * math.cos(phi - 2.0 * math.pi * k / 3.0) for k in range(3)]
        return [complex(y - shift) for y in ys]

    sq = math.sqrt(disc)
    # largest-magnitude radicand first, the second cube root from u*v = -p/3
    t = -q / 2.0 + sq if q <= 0 else -q / 2.0 - sq
    u = float(np.cbrt(t))
    v = -p / (3.0 * u) if u != 0 else 0.0
    real = u + v
    half = -(u + v) / 2.0
    imag = math.sqrt(3.0) / 2.0 * (u - v)
    return [
        complex(real - shift),
        complex(half - shift, imag),
        complex(half - shift, -imag),
    ]


def solve_quartic(a: float, b: float, c: float, d: float) -> list[complex]:
    """Roots of x**4 + a*x**3 + b*x**2 + c*x + d for real coefficients."""
    shift = a / 4.0
    p = b - 3.0 * a * a / 8.0
    q = a**3 / 8.0 - a * b / 2.0 + c
    r = -3.0 * a**4 / 256.0 + a * a * b / 16.0 - a * c / 4.0 + d

    # resolvent z**3 - p/2 z**2 - r z + (p r / 2 - q**2 / 8), largest real root
    zs = solve_cubic(-p / 2.0, -r, p * r / 2.0 - q * q / 8.0)
    z = max(
        root.real for root in zs if abs(root.imag) <= REAL_ROOT_TOL * (1 + abs(root))
    )

    gap = 2.0 * z - p
    if abs(gap) <= BIQUADRATIC_TOL * (1.0 + abs(p)):
        # biquadratic: (y**2 + z)**2 = z**2 - r
        w = cmath.sqrt(z * z - r)
        ys = solve_quadratic(0.0, z - w) + solve_quadratic(0.0, z + w)
    else:
        s = cmath.sqrt(gap)
        h = q / (2.0 * s)
        ys = solve_quadratic(-s, z + h) + solve_quadratic(s, z - h)
    return [y - shift for y in ys]


def _polish(coeffs: np.ndarray, root: complex, steps: int = 3) -> complex:
    """Newton steps on the polynomial, each kept only when |p| drops."""
    deriv = np.polyder(coeffs)
    value = abs(np.polyval(coeffs, root))
    for _ in range(steps):
        slope = np.polyval(deriv, root)
        if slope == 0 or value == 0:
            break
        candidate = root - np.polyval(coeffs, root) / slope
        cand_value = abs(np.polyval(coeffs, candidate))
        if cand_value >= value:
            break
        root, value = complex(candidate), cand_value
    return root


def relative_discriminant(roots: Sequence[complex]) -> float:
    """Product of squared root differences, scaled by max(1, |root|)**(n(n-1))."""
    n = len(roots)
    scale = max([1.0] + [abs(x) for x in roots])
    prod = 1.0 + 0j
    for i in range(n):
        for j in range(i + 1, n):
            prod *= ((roots[i] - roots[j]) / scale) ** 2
    return abs(prod)


def monic_roots(coeffs: Sequence[float]) -> list[complex]:
    """Roots of a real monic polynomial of degree 1..4.

    Args:
        coeffs: Coefficients, highest degree first, leading coefficient 1.

    Returns:
        List of roots (with repetition), imaginary parts cleaned to exact zero
        for real roots.
    """
    c = np.asarray(coeffs, dtype=float)
    if c.ndim != 1 or not 2 <= c.size <= 5:
        raise ValueError("expected a polynomial of degree 1 to 4")
    if c[0] != 1.0:
        c = c / c[0]
    degree = c.size - 1

    if degree == 1:
        roots = [complex(-c[1])]
    elif degree == 2:
        roots = solve_quadratic(c[1], c[2])
    elif degree == 3:
        roots = solve_cubic(c[1], c[2], c[3])
    else:
        roots = solve_quartic(c[1], c[2], c[3], c[4])

    if degree >= 3 and relative_discriminant(roots) <= DISCRIMINANT_FALLBACK:
        logger.debug("Near-zero discriminant, falling back to companion QR", degree=degree)
        roots = [complex(x) for x in np.roots(c)]

    roots = [_polish(c, complex(x)) for x in roots]
    scale = max([1.0] + [abs(x) for x in roots])
    return [
        complex(x.real, 0.0) if abs(x.imag) <= REAL_ROOT_TOL * scale else x for x in roots
    ]
