"""Tests for the dense matrix kernel."""

import itertools
import math

import numpy as np
import pytest
import scipy.linalg


def test_as_mat_rejects_bad_shapes():
    """Non-square and out-of-range dimensions are refused."""
    from markov_embedding_mcp.exceptions import RejectsDimension
    from markov_embedding_mcp.linalg import as_mat

    with pytest.raises(RejectsDimension):
        as_mat([[1.0, 0.0]])
    with pytest.raises(RejectsDimension):
        as_mat(np.eye(5))
    with pytest.raises(ValueError):
        as_mat([[np.nan, 0.0], [0.0, 1.0]])


def test_char_poly_matches_numpy():
    """Characteristic polynomial agrees with numpy.poly."""
    from markov_embedding_mcp.linalg import char_poly

    rng = np.random.default_rng(1)
    M = rng.uniform(0, 1, (4, 4))
    np.testing.assert_allclose(char_poly(M), np.poly(M), atol=1e-12)


def test_eigenvalues_of_markov_matrix_include_exact_one():
    """The eigenvalue nearest 1 of a Markov matrix is snapped to exactly 1."""
    from markov_embedding_mcp.linalg import eigenvalues

    M = np.array([[0.7, 0.2, 0.1], [0.1, 0.8, 0.1], [0.3, 0.3, 0.4]])
    spectrum = eigenvalues(M)
    assert spectrum.roots[0] == 1.0
    np.testing.assert_allclose(
        sorted(v.real for v in spectrum.values()),
        sorted(np.linalg.eigvals(M).real),
        atol=1e-9,
    )


def test_eigenvalues_cluster_double_root():
    """A symmetric double eigenvalue is reported once with multiplicity 2."""
    from markov_embedding_mcp.linalg import eigenvalues

    M = 0.4 * np.eye(3) + 0.2 * np.ones((3, 3))
    spectrum = eigenvalues(M)
    assert spectrum.multiplicities == (1, 2)
    assert abs(spectrum.roots[1] - 0.4) < 1e-10


def test_jordan_structure_detects_block():
    """A non-diagonalizable double eigenvalue gives one Jordan block of size 2."""
    from markov_embedding_mcp.linalg import jordan_structure

    M = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.0, 0.0, 1.0]])
    structure = jordan_structure(M)
    assert structure.sizes_for(0.5) == (2,)
    assert structure.min_poly_degree == 3
    assert structure.is_cyclic


def test_jordan_structure_diagonalizable_double():
    """A scalar block on the eigenspace gives two blocks of size 1."""
    from markov_embedding_mcp.linalg import jordan_structure

    M = 0.4 * np.eye(3) + 0.2 * np.ones((3, 3))
    structure = jordan_structure(M)
    assert structure.sizes_for(0.4) == (1, 1)
    assert structure.min_poly_degree == 2
    assert not structure.is_cyclic


def test_real_jordan_reconstructs_complex_pair():
    """M = T canonical T^-1 holds and the pair occupies a rotation-scaling block."""
    from markov_embedding_mcp.linalg import real_jordan

    M = np.array([[0.6, 0.3, 0.1], [0.1, 0.6, 0.3], [0.3, 0.1, 0.6]])
    decomposition = real_jordan(M)
    np.testing.assert_allclose(decomposition.reconstruct(), M, atol=1e-10)
    block = decomposition.canonical[1:, 1:]
    assert block[0, 0] == pytest.approx(block[1, 1])
    assert block[0, 1] == pytest.approx(-block[1, 0])
    assert decomposition.canonical[0, 0] == pytest.approx(1.0)


def test_mat_exp_matches_scipy():
    """mat_exp is the scipy exponential."""
    from markov_embedding_mcp.linalg import mat_exp

    Q = np.array([[-1.0, 0.7, 0.3], [0.2, -0.5, 0.3], [0.0, 0.4, -0.4]])
    np.testing.assert_allclose(mat_exp(Q), scipy.linalg.expm(Q), atol=1e-14)


def test_principal_log_inverts_exp():
    """principal_log(exp(Q)) = Q for a small generator."""
    from markov_embedding_mcp.linalg import mat_exp, principal_log

    Q = np.array([[-0.6, 0.4, 0.2], [0.1, -0.3, 0.2], [0.2, 0.2, -0.4]])
    np.testing.assert_allclose(principal_log(mat_exp(Q)), Q, atol=1e-10)


def test_principal_log_refuses_negative_eigenvalue():
    """A negative real eigenvalue lies on the branch cut."""
    from markov_embedding_mcp.exceptions import SpectrumOnCut
    from markov_embedding_mcp.linalg import principal_log

    with pytest.raises(SpectrumOnCut):
        principal_log(np.array([[0.2, 0.8], [0.8, 0.2]]))


def test_poly_in_evaluates_without_constant():
    """poly_in([a, b], A) = aA + bA^2."""
    from markov_embedding_mcp.linalg import poly_in

    A = np.array([[1.0, 2.0], [0.0, 1.0]])
    np.testing.assert_allclose(poly_in([2.0], A), 2 * A)
    with pytest.raises(ValueError):
        poly_in([1.0, 1.0], A)


def test_markov_and_generator_predicates():
    """Sign and row-sum tolerances are honoured."""
    from markov_embedding_mcp.linalg import is_generator, is_markov

    assert is_markov([[0.5, 0.5], [0.0, 1.0]])
    assert not is_markov([[1.1, -0.1], [0.0, 1.0]])
    assert is_markov([[1.0 + 1e-12, -1e-12], [0.0, 1.0]])
    assert is_generator([[-1.0, 1.0], [0.0, 0.0]])
    assert not is_generator([[-1.0, 1.0], [0.5, 0.0]])


def test_tolerances_defaults():
    """Default tolerance policy."""
    from markov_embedding_mcp.linalg import Tolerances

    tol = Tolerances()
    assert (tol.spec_cluster, tol.nonneg, tol.rowsum, tol.residual, tol.rank) == (
        1e-8,
        1e-10,
        1e-10,
        1e-8,
        1e-9,
    )


def _random_generator(rng, d, norm):
    """Uniform off-diagonal rates rescaled to the given infinity norm."""
    Q = rng.uniform(0.0, 1.0, (d, d))
    np.fill_diagonal(Q, 0.0)
    np.fill_diagonal(Q, -Q.sum(axis=1))
    return Q * (norm / np.linalg.norm(Q, np.inf))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_mat_exp_determinant_is_exp_of_trace(d):
    """det(exp(Q)) = exp(tr Q) for generators with ||Q|| up to 20."""
    from markov_embedding_mcp.linalg import mat_exp

    rng = np.random.default_rng(40 + d)
    for _ in range(1000):
        Q = _random_generator(rng, d, rng.uniform(0.0, 20.0))
        assert abs(np.linalg.det(mat_exp(Q)) - math.exp(np.trace(Q))) <= 1e-10


@pytest.mark.slow
def test_mat_exp_of_generator_is_markov():
    """exp(Q) of a generator has nonnegative entries and unit row sums."""
    from markov_embedding_mcp.linalg import mat_exp

    rng = np.random.default_rng(44)
    for n in range(10_000):
        d = 2 + n % 3
        M = mat_exp(_random_generator(rng, d, rng.uniform(0.0, 20.0)))
        assert M.min() >= -1e-12
        assert np.max(np.abs(M.sum(axis=1) - 1.0)) <= 1e-12


@pytest.mark.parametrize("d", [2, 3, 4])
def test_eigenvalues_match_lapack_qr(d):
    """Closed-form eigenvalues agree with LAPACK's QR iteration on separated spectra."""
    from markov_embedding_mcp.linalg import eigenvalues

    rng = np.random.default_rng(300 + d)
    checked = 0
    for _ in range(1000):
        M = rng.uniform(-1.0, 1.0, (d, d))
        reference = scipy.linalg.eigvals(M)
        scale = max(1.0, float(np.max(np.abs(reference))))
        if min(abs(a - b) for a, b in itertools.combinations(reference, 2)) < 0.05 * scale:
            continue
        ours = eigenvalues(M).values()
        assert len(ours) == d
        for lam in reference:
            nearest = min(abs(lam - mu) for mu in ours)
            assert nearest <= 1e-9 * max(1.0, abs(lam))
        checked += 1
    assert checked > 500


def test_mat_exp_of_commuting_sum_factorizes():
    """exp(Q1 + Q2) = exp(Q1) exp(Q2) when Q2 is a polynomial in Q1's generator."""
    from markov_embedding_mcp.linalg import mat_exp

    rng = np.random.default_rng(17)
    for n in range(1000):
        d = 2 + n % 3
        Q = _random_generator(rng, d, rng.uniform(0.1, 1.0))
        a, b, c = rng.uniform(-1.0, 1.0, 3)
        Q1 = a * Q
        Q2 = b * Q + c * (Q @ Q)
        np.testing.assert_allclose(
            mat_exp(Q1 + Q2), mat_exp(Q1) @ mat_exp(Q2), rtol=1e-10, atol=1e-12
        )


def test_principal_log_inverts_mat_exp_on_corpus():
    """log(exp(Q)) = Q while the spectrum of Q stays inside the strip |Im| < pi."""
    from markov_embedding_mcp.linalg import mat_exp, principal_log

    rng = np.random.default_rng(23)
    checked = 0
    for n in range(1000):
        d = 2 + n % 3
        Q = _random_generator(rng, d, rng.uniform(0.1, 5.0))
        if np.max(np.abs(np.linalg.eigvals(Q).imag)) >= math.pi - 0.5:
            continue
        np.testing.assert_allclose(principal_log(mat_exp(Q)), Q, atol=1e-8)
        checked += 1
    assert checked > 900
