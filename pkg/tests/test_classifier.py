"""Tests for case classification and the necessary conditions."""

import numpy as np
import pytest

CIRCULANT = np.array([[0.6, 0.3, 0.1], [0.1, 0.6, 0.3], [0.3, 0.1, 0.6]])
JORDAN = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.0, 0.0, 1.0]])


def _equal_input(c, d):
    return (1.0 - c) * np.eye(d) + (c / d) * np.ones((d, d))


@pytest.mark.parametrize(
    ("M", "pattern"),
    [
        (np.eye(2), "D2_IDENTITY"),
        (np.array([[0.9, 0.1], [0.2, 0.8]]), "D2_SIMPLE"),
        (np.eye(3), "D3_IDENTITY"),
        (_equal_input(0.6, 3), "D3_DEG2_1_L_L_POS"),
        (_equal_input(1.2, 3), "D3_DEG2_1_L_L_NEG"),
        (np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.3, 0.2, 0.5]]), "D3_DEG2_1_1_L"),
        (JORDAN, "D3_JORDAN2"),
        (CIRCULANT, "D3_COMPLEX_PAIR"),
        (np.eye(4), "D4_IDENTITY"),
        (_equal_input(0.6, 4), "D4_DEG2_TRIPLE_L"),
        (np.array([[1.0, 0.0, 0.0]] * 3), "D3_DEG2_1_L_L_NEG"),
        (np.kron(np.eye(2), [[1.0, 0.0], [1.0, 0.0]]), "D4_DEG2_DOUBLE_NEG"),
    ],
)
def test_classify_patterns(M, pattern):
    """Representative matrices land on their case-table rows."""
    from markov_embedding_mcp.classifier import classify

    assert classify(M).pattern.value == pattern


def test_classify_d2_eigen_data():
    """The d=2 non-unit eigenvalue is 1 - a - b."""
    from markov_embedding_mcp.classifier import classify

    case = classify([[0.9, 0.1], [0.2, 0.8]])
    assert case.min_poly_degree == 2
    assert case.real("lam") == pytest.approx(0.7)


def test_classify_complex_pair_has_positive_imaginary_part():
    """Complex eigen data is stored with Im > 0."""
    from markov_embedding_mcp.classifier import classify

    lam = classify(CIRCULANT).eigen_data["lam"]
    assert lam.imag > 0
    assert abs(lam - np.linalg.eigvals(CIRCULANT)[np.argmax(np.linalg.eigvals(CIRCULANT).imag)]) < 1e-10


def test_classify_k3st_simple_real():
    """A K3ST matrix with distinct eigenvalues is a simple real d=4 spectrum."""
    from markov_embedding_mcp.classifier import classify
    from markov_embedding_mcp.models import K3STParams, k3st_matrix

    case = classify(k3st_matrix(K3STParams(x=0.135, y=0.015, z=0.085)))
    assert case.pattern.value == "D4_SIMPLE_REAL"
    lams = [case.real(k) for k in ("lam1", "lam2", "lam3")]
    np.testing.assert_allclose(lams, [0.8, 0.7, 0.56], atol=1e-9)


def test_classify_rejects_non_markov():
    """Negative entries are refused."""
    from markov_embedding_mcp.classifier import classify

    with pytest.raises(ValueError):
        classify([[1.2, -0.2], [0.0, 1.0]])


def test_necessary_checks_swap():
    """The 2x2 swap fails the determinant, diagonal and unit-circle checks."""
    from markov_embedding_mcp.classifier import necessary_checks

    report = necessary_checks([[0.0, 1.0], [1.0, 0.0]])
    assert not report.det_positive
    assert not report.diag_positive
    assert not report.unit_circle_ok
    assert not report.all_ok


def test_necessary_checks_transitivity():
    """m12 > 0 and m23 > 0 with m13 = 0 breaks transitivity."""
    from markov_embedding_mcp.classifier import necessary_checks

    report = necessary_checks(JORDAN)
    assert report.det_positive
    assert report.diag_positive
    assert not report.transitivity_ok


def test_necessary_checks_culver():
    """A simple negative eigenvalue fails the Culver condition."""
    from markov_embedding_mcp.classifier import necessary_checks

    M = np.array([[0.2, 0.8, 0.0], [0.8, 0.2, 0.0], [0.0, 0.0, 1.0]])
    report = necessary_checks(M)
    assert not report.det_positive
    assert not report.culver_ok


def test_necessary_checks_pass_for_exp_of_generator():
    """exp(Q) passes every necessary check."""
    from markov_embedding_mcp.classifier import necessary_checks
    from markov_embedding_mcp.linalg import mat_exp

    Q = np.array([[-0.6, 0.4, 0.2], [0.1, -0.3, 0.2], [0.2, 0.2, -0.4]])
    assert necessary_checks(mat_exp(Q)).all_ok


NEGATIVE_ROWS = {
    "D3_DEG2_1_L_L_NEG",
    "D4_DEG2_DOUBLE_NEG",
    "D4_DEG3_DOUBLE_L2_NEG",
}


def _random_markov(rng, d, sparsity=0.0):
    """Dirichlet rows; entries zeroed with probability ``sparsity``, then renormalized."""
    M = rng.dirichlet(np.ones(d), size=d)
    M[rng.random((d, d)) < sparsity] = 0.0
    for i in range(d):
        if M[i].sum() == 0.0:
            M[i, i] = 1.0
    return M / M.sum(axis=1, keepdims=True)


def _random_generator(rng, d, norm):
    Q = rng.uniform(0.0, 1.0, (d, d))
    np.fill_diagonal(Q, 0.0)
    np.fill_diagonal(Q, -Q.sum(axis=1))
    return Q * (norm / np.linalg.norm(Q, np.inf))


@pytest.mark.slow
@pytest.mark.parametrize("d", [2, 3, 4])
def test_classify_is_total_on_random_markov_matrices(d):
    """Every random Markov matrix lands on exactly one row of its dimension."""
    from markov_embedding_mcp.classifier import classify
    from markov_embedding_mcp.exceptions import IllConditioned

    rng = np.random.default_rng(900 + d)
    n = 10_000
    ill = 0
    for _ in range(n):
        M = _random_markov(rng, d)
        try:
            case = classify(M)
        except IllConditioned:
            ill += 1
            continue
        assert case.dim == d
        assert case.pattern.value.startswith(f"D{d}_")
        assert 1 <= case.min_poly_degree <= d
        assert sum(case.spectrum.multiplicities) == d
        assert classify(M).pattern is case.pattern
    assert ill / n < 0.01


@pytest.mark.parametrize("d", [2, 3, 4])
def test_classify_exp_of_generator_avoids_impossible_rows(d):
    """exp(Q) never has a Jordan block at 1 or a non-positive repeated eigenvalue."""
    from markov_embedding_mcp.classifier import classify
    from markov_embedding_mcp.exceptions import IllConditioned
    from markov_embedding_mcp.linalg import mat_exp

    rng = np.random.default_rng(950 + d)
    for _ in range(1000):
        M = mat_exp(_random_generator(rng, d, rng.uniform(0.5, 5.0)))
        try:
            case = classify(M)
        except IllConditioned as exc:
            assert "eigenvalue 1" not in str(exc)
            continue
        assert case.structure.sizes_for(1.0) == (1,)
        assert case.pattern.value not in NEGATIVE_ROWS
        assert not case.pattern.value.endswith("_IDENTITY")


@pytest.mark.parametrize("d", [2, 3, 4])
def test_failed_necessary_check_means_not_embeddable(d):
    """Any false necessary flag forces a NotEmbeddable verdict."""
    from markov_embedding_mcp.classifier import necessary_checks
    from markov_embedding_mcp.embedder import decide
    from markov_embedding_mcp.embedder.results import Verdict

    rng = np.random.default_rng(970 + d)
    failed = 0
    for _ in range(1000):
        M = _random_markov(rng, d, sparsity=0.3)
        if necessary_checks(M).all_ok:
            continue
        failed += 1
        assert decide(M).verdict is Verdict.NOT_EMBEDDABLE
    assert failed > 100
