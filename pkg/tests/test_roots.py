"""Tests for the closed-form polynomial root solvers."""

import numpy as np
import pytest


def _sorted(roots):
    return sorted(roots, key=lambda z: (round(z.real, 6), round(z.imag, 6)))


@pytest.mark.parametrize(
    "roots",
    [
        [0.5, -0.25],
        [1.0, 0.3, -0.7],
        [1.0, 0.2 + 0.5j, 0.2 - 0.5j],
        [1.0, 0.6, 0.1, -0.4],
        [1.0, -0.2, 0.3 + 0.4j, 0.3 - 0.4j],
        [0.9 + 0.1j, 0.9 - 0.1j, -0.5 + 0.3j, -0.5 - 0.3j],
    ],
)
def test_monic_roots_recovers_known_roots(roots):
    """Roots of a polynomial built from known roots are recovered."""
    from markov_embedding_mcp.linalg import monic_roots

    coeffs = np.real(np.poly(roots))
    found = monic_roots(coeffs)
    assert len(found) == len(roots)
    np.testing.assert_allclose(
        np.array(_sorted(found)), np.array(_sorted([complex(r) for r in roots])), atol=1e-9
    )


def test_real_roots_have_exact_zero_imaginary_part():
    """Real roots come back with imag exactly 0."""
    from markov_embedding_mcp.linalg import monic_roots

    for root in monic_roots(np.poly([1.0, 0.4, -0.3])):
        assert root.imag == 0.0


def test_quadratic_avoids_cancellation():
    """The small root of x^2 - 1e8 x + 1 keeps full relative accuracy."""
    from markov_embedding_mcp.linalg.roots import solve_quadratic

    small = min(solve_quadratic(-1e8, 1.0), key=abs)
    assert abs(small.real - 1e-8) <= 1e-20


def test_repeated_root_falls_back_to_companion():
    """A triple root still yields three roots close to it."""
    from markov_embedding_mcp.linalg import monic_roots

    found = monic_roots(np.poly([0.5, 0.5, 0.5, 1.0]))
    close = [r for r in found if abs(r - 0.5) < 1e-4]
    assert len(close) == 3


def test_monic_roots_rejects_degree_five():
    """Degree above 4 is refused."""
    from markov_embedding_mcp.linalg import monic_roots

    with pytest.raises(ValueError):
        monic_roots([1.0, 0.0, 0.0, 0.0, 0.0, 1.0])


def test_random_quartics_match_numpy_roots():
    """Closed-form quartic roots agree with numpy.roots on a seeded corpus."""
    from markov_embedding_mcp.linalg import monic_roots

    # real roots uniform in [-1, 1], pairs re in [-1, 1], im in [0.05, 1]
    rng = np.random.default_rng(7)
    for _ in range(200):
        if rng.random() < 0.5:
            roots = rng.uniform(-1, 1, 4).astype(complex)
        else:
            z = complex(rng.uniform(-1, 1), rng.uniform(0.05, 1))
            roots = np.array([z, z.conjugate(), *rng.uniform(-1, 1, 2)])
        coeffs = np.real(np.poly(roots))
        ours = np.array(_sorted(monic_roots(coeffs)))
        reference = np.array(_sorted([complex(r) for r in np.roots(coeffs)]))
        np.testing.assert_allclose(ours, reference, atol=1e-6)


@pytest.mark.parametrize(
    "roots",
    [
        [1j, -1j, 2j, -2j],
        [2**0.5, -(2**0.5), 1j * 2**0.5, -1j * 2**0.5],
        [1j, -1j, 5**0.5 * 1j, -(5**0.5) * 1j],
        [0.3 + 0.2j, 0.3 - 0.2j, -0.3 + 0.2j, -0.3 - 0.2j],
        [1.0, -1.0, 2.0, -2.0],
    ],
)
def test_quartic_without_odd_terms_splits_as_biquadratic(roots):
    """Quartics y^4 + p y^2 + r are solved exactly, before any polishing."""
    from markov_embedding_mcp.linalg.roots import solve_quartic

    coeffs = np.real(np.poly(roots))
    assert abs(coeffs[1]) < 1e-14 and abs(coeffs[3]) < 1e-14
    found = solve_quartic(*coeffs[1:])
    np.testing.assert_allclose(
        np.array(_sorted(found)), np.array(_sorted([complex(r) for r in roots])), atol=1e-9
    )


def test_quartic_with_three_real_resolvent_roots():
    """Four real roots give a resolvent with three real roots; the largest is used."""
    from markov_embedding_mcp.linalg.roots import solve_cubic, solve_quartic

    roots = [1.0, 0.6, 0.1, -0.4]
    _, a, b, c, d = np.poly(roots)
    shift = a / 4.0
    p = b - 3.0 * a * a / 8.0
    q = a**3 / 8.0 - a * b / 2.0 + c
    r = -3.0 * a**4 / 256.0 + a * a * b / 16.0 - a * c / 4.0 + d
    resolvent = solve_cubic(-p / 2.0, -r, p * r / 2.0 - q * q / 8.0)
    assert all(z.imag == 0.0 for z in resolvent)
    assert shift != 0.0

    found = solve_quartic(a, b, c, d)
    np.testing.assert_allclose(
        sorted(z.real for z in found), sorted(roots), atol=1e-10
    )
    assert max(abs(z.imag) for z in found) < 1e-12
