"""Tests for the equal-input, Tamura-Nei and Kimura 3ST model classes."""

import numpy as np
import pytest


def _tn(a=0.1, kappa1=2.0, kappa2=1.5):
    from markov_embedding_mcp.models import TNParams

    return TNParams(a1=a, a2=a, a3=a, a4=a, kappa1=kappa1, kappa2=kappa2)


def test_equal_input_matrix_rows():
    """M_c has unit row sums and c_j off the diagonal of column j."""
    from markov_embedding_mcp.models import EqualInputParams, equal_input_matrix

    M = equal_input_matrix(EqualInputParams(c_vec=(0.1, 0.2, 0.3)))
    np.testing.assert_allclose(M.sum(axis=1), 1.0)
    assert M[1, 0] == pytest.approx(0.1)
    assert M[0, 2] == pytest.approx(0.3)
    assert M[0, 0] == pytest.approx(0.5)


def test_equal_input_params_check():
    """Weights must be nonnegative and c at most 1 + min(c_i)."""
    from markov_embedding_mcp.exceptions import InfeasibleParams
    from markov_embedding_mcp.models import EqualInputParams

    with pytest.raises(InfeasibleParams):
        EqualInputParams(c_vec=(0.6, 0.6, 0.1)).check()
    with pytest.raises(InfeasibleParams):
        EqualInputParams(c_vec=(-0.1, 0.2, 0.2)).check()
    EqualInputParams.constant(1.2, dim=3).check()


def test_embed_equal_input_below_one():
    """0 < c < 1 is embeddable with a multiple of M - I."""
    from markov_embedding_mcp.linalg import mat_exp
    from markov_embedding_mcp.models import EqualInputParams, embed_equal_input, equal_input_matrix

    p = EqualInputParams(c_vec=(0.1, 0.2, 0.3))
    result = embed_equal_input(p)
    assert result.verdict.value == "Embeddable"
    assert result.uniqueness.value == "Unique"
    np.testing.assert_allclose(mat_exp(result.generator), equal_input_matrix(p), atol=1e-12)


def test_embed_equal_input_singular_and_d4_negative():
    """c = 1 is singular; d=4 with c > 1 has a triple negative eigenvalue."""
    from markov_embedding_mcp.models import EqualInputParams, embed_equal_input

    singular = embed_equal_input(EqualInputParams(c_vec=(0.25, 0.25, 0.25, 0.25)))
    assert singular.verdict.value == "NotEmbeddable"
    assert singular.reason.value == "DET_NONPOSITIVE"
    negative = embed_equal_input(EqualInputParams.constant(1.2))
    assert negative.verdict.value == "NotEmbeddable"
    assert negative.reason.value == "NEGATIVE_EIGENVALUE_CULVER"


def test_embed_equal_input_d3_above_one():
    """d=3 with 1 < c < c_max has two generators."""
    from markov_embedding_mcp.models import EqualInputParams, embed_equal_input

    result = embed_equal_input(EqualInputParams.constant(1.0 + 1e-3, dim=3))
    assert result.verdict.value == "Embeddable"
    assert len(result.generators) == 2


def test_recognize_equal_input():
    """Column weights are read back from the matrix."""
    from markov_embedding_mcp.models import EqualInputParams, equal_input_matrix, recognize_equal_input

    p = EqualInputParams(c_vec=(0.1, 0.2, 0.3, 0.05))
    found = recognize_equal_input(equal_input_matrix(p))
    assert found is not None
    np.testing.assert_allclose(found.c_vec, p.c_vec, atol=1e-12)
    assert recognize_equal_input([[0.9, 0.1, 0.0], [0.2, 0.8, 0.0], [0.0, 0.3, 0.7]]) is None


def test_commutant_basis_commutes():
    """Every basis matrix has zero row sums and commutes with C."""
    from markov_embedding_mcp.models import commutant_basis_d3

    c = np.array([0.2, 0.5, 0.3])
    C = np.tile(c, (3, 1))
    basis = commutant_basis_d3(*c)
    assert len(basis) == 4
    for B in basis:
        np.testing.assert_allclose(B.sum(axis=1), 0.0, atol=1e-15)
        np.testing.assert_allclose(B @ C, C @ B, atol=1e-14)


def test_tn_spectrum_matches_eigenvalues():
    """The closed-form TN spectrum agrees with numpy."""
    from markov_embedding_mcp.models import tn_matrix, tn_spectrum

    p = _tn()
    M = tn_matrix(p)
    np.testing.assert_allclose(M.sum(axis=1), 1.0)
    eig = np.sort(np.linalg.eigvals(M).real)
    np.testing.assert_allclose(eig, np.sort([1.0, *tn_spectrum(p)]), atol=1e-12)


def test_embed_tn_inside_condition():
    """A simple TN matrix with spectrum in (0, 1) has a TN generator."""
    from markov_embedding_mcp.linalg import mat_exp
    from markov_embedding_mcp.models import embed_tn, is_tn_shaped, tn_condition, tn_matrix

    p = _tn()
    assert tn_condition(p)
    result = embed_tn(p)
    assert result.verdict.value == "Embeddable"
    assert result.uniqueness.value == "Unique"
    assert is_tn_shaped(result.generator)
    np.testing.assert_allclose(mat_exp(result.generator), tn_matrix(p), atol=1e-10)


def test_embed_tn_outside_condition():
    """A nonpositive eigenvalue rules the TN matrix out."""
    from markov_embedding_mcp.models import embed_tn, tn_condition

    p = _tn(kappa1=4.5)
    assert not tn_condition(p)
    result = embed_tn(p)
    assert result.verdict.value == "NotEmbeddable"
    assert result.reason.value == "EIGENVALUE_OUT_OF_RANGE"


def test_recognize_tn_round_trip():
    """Weights and factors are read back from a TN matrix."""
    from markov_embedding_mcp.models import recognize_tn, tn_matrix

    p = _tn(kappa1=2.0, kappa2=0.5)
    found = recognize_tn(tn_matrix(p))
    assert found is not None
    assert found.kappa1 == pytest.approx(2.0)
    assert found.kappa2 == pytest.approx(0.5)
    assert found.a3 == pytest.approx(0.1)


@pytest.mark.slow
def test_tn_corpus_follows_condition():
    """Random simple TN matrices are embeddable exactly when the condition holds."""
    from markov_embedding_mcp.linalg import Tolerances, eigenvalues
    from markov_embedding_mcp.models import (
        TNParams,
        embed_tn,
        is_tn_shaped,
        tn_condition,
        tn_matrix,
        tn_spectrum,
    )

    shape_tol = Tolerances(rowsum=1e-9)
    rng = np.random.default_rng(7)
    checked = 0
    for _ in range(1000):
        a = rng.uniform(0.0, 0.15, 4)
        kappa = rng.uniform(0.0, 3.0, 2)
        p = TNParams(a1=a[0], a2=a[1], a3=a[2], a4=a[3], kappa1=kappa[0], kappa2=kappa[1])
        spectrum = tn_spectrum(p)
        if min(abs(v) for v in spectrum) < 1e-6 or max(spectrum) > 0.99:
            continue
        if not eigenvalues(tn_matrix(p)).is_simple:
            continue
        checked += 1
        expected = "Embeddable" if tn_condition(p) else "NotEmbeddable"
        result = embed_tn(p)
        assert result.verdict.value == expected, p
        if expected == "Embeddable":
            assert is_tn_shaped(result.generator, shape_tol), p
    assert checked > 700


def test_exp_of_tn_generator_is_tn_shaped():
    """exp of a TN generator keeps the TN pattern."""
    from markov_embedding_mcp.linalg import mat_exp
    from markov_embedding_mcp.models import TNParams, recognize_tn, tn_generator

    rng = np.random.default_rng(71)
    for _ in range(1000):
        a = rng.uniform(0.0, 1.0, 4)
        kappa = rng.uniform(0.0, 3.0, 2)
        p = TNParams(a1=a[0], a2=a[1], a3=a[2], a4=a[3], kappa1=kappa[0], kappa2=kappa[1])
        assert recognize_tn(mat_exp(tn_generator(p))) is not None, p


def test_exp_of_k3st_generator_is_k3st():
    """exp of a K3ST generator is the K3ST matrix with eigenvalues exp(-2(x+z)) and friends."""
    from markov_embedding_mcp.linalg import mat_exp
    from markov_embedding_mcp.models import k3st_generator, k3st_spectrum, recognize_k3st

    rng = np.random.default_rng(72)
    for _ in range(1000):
        x, y, z = rng.uniform(0.0, 2.0, 3)
        found = recognize_k3st(mat_exp(k3st_generator(x, y, z)))
        assert found is not None
        np.testing.assert_allclose(
            k3st_spectrum(found),
            np.exp([-2.0 * (x + z), -2.0 * (y + z), -2.0 * (x + y)]),
            atol=1e-12,
        )


@pytest.mark.parametrize("d", [2, 3, 4])
def test_exp_of_equal_input_generator_is_equal_input(d):
    """exp(C - c I) is equal-input with summatory parameter 1 - exp(-c)."""
    from markov_embedding_mcp.linalg import mat_exp
    from markov_embedding_mcp.models import recognize_equal_input

    rng = np.random.default_rng(73 + d)
    for _ in range(1000):
        c_vec = rng.uniform(0.0, 1.0, d)
        Q = np.tile(c_vec, (d, 1)) - c_vec.sum() * np.eye(d)
        found = recognize_equal_input(mat_exp(Q))
        assert found is not None
        assert found.c == pytest.approx(1.0 - np.exp(-c_vec.sum()), abs=1e-12)
        np.testing.assert_allclose(
            np.array(found.c_vec) / found.c, c_vec / c_vec.sum(), atol=1e-9
        )


def test_k3st_spectrum_and_log_generator():
    """Quarter-sums of log eigenvalues give a generator with exp equal to M."""
    from markov_embedding_mcp.linalg import is_generator, mat_exp
    from markov_embedding_mcp.models import K3STParams, k3st_log_generator, k3st_matrix, k3st_spectrum

    p = K3STParams(x=0.1, y=0.05, z=0.02)
    np.testing.assert_allclose(k3st_spectrum(p), (0.76, 0.86, 0.7))
    Q = k3st_log_generator(p)
    assert is_generator(Q)
    np.testing.assert_allclose(mat_exp(Q), k3st_matrix(p), atol=1e-12)


def test_k3st_boundary_has_zero_entry():
    """lambda_1 = lambda_2 lambda_3 puts a zero at entry (1, 3) of the generator."""
    from markov_embedding_mcp.models import K3STParams, embed_k3st

    result = embed_k3st(K3STParams(x=0.135, y=0.015, z=0.085))
    assert result.verdict.value == "Embeddable"
    assert abs(result.generator[0, 2]) < 1e-12
    assert result.generator[0, 1] > 0
    assert result.generator[0, 3] > 0


def test_k3st_violating_condition():
    """lambda_2 < lambda_1 lambda_3 leaves a negative rate."""
    from markov_embedding_mcp.models import K3STParams, embed_k3st, k3st_condition

    p = K3STParams(x=0.05, y=0.1, z=0.3)
    assert not k3st_condition(p)
    assert embed_k3st(p).verdict.value == "NotEmbeddable"


def test_k3st_negative_eigenvalue():
    """A negative eigenvalue is out of range."""
    from markov_embedding_mcp.models import K3STParams, embed_k3st

    result = embed_k3st(K3STParams(x=0.45, y=0.1, z=0.1))
    assert result.verdict.value == "NotEmbeddable"
    assert result.reason.value == "EIGENVALUE_OUT_OF_RANGE"


def test_k3st_constant_input_goes_to_equal_input():
    """x = y = z is the constant-input model."""
    from markov_embedding_mcp.models import K3STParams, embed_k3st

    result = embed_k3st(K3STParams(x=0.1, y=0.1, z=0.1))
    assert result.verdict.value == "Embeddable"
    assert result.uniqueness.value == "Unique"


@pytest.mark.slow
def test_k3st_corpus_agrees_with_general_engine():
    """Closed-form K3ST verdicts match the condition and the general decision."""
    from markov_embedding_mcp.embedder import decide
    from markov_embedding_mcp.linalg import mat_exp, principal_log
    from markov_embedding_mcp.models import K3STParams, embed_k3st, k3st_matrix, k3st_spectrum

    rng = np.random.default_rng(3)
    checked = 0
    for _ in range(1000):
        x, y, z = rng.uniform(0.0, 0.3, 3)
        p = K3STParams(x=x, y=y, z=z)
        l1, l2, l3 = k3st_spectrum(p)
        margins = (l1, l2, l3, l1 - l2 * l3, l2 - l1 * l3, l3 - l1 * l2)
        if min(abs(m) for m in margins) < 1e-6 or max(l1, l2, l3) > 0.99:
            continue
        if min(abs(l1 - l2), abs(l2 - l3), abs(l1 - l3)) < 1e-3:
            continue
        checked += 1
        M = k3st_matrix(p)
        expected = "Embeddable" if min(margins) > 0 else "NotEmbeddable"
        result = embed_k3st(p)
        assert result.verdict.value == expected, p
        # the general engine may stay Undecided, never contradict
        assert decide(M).verdict.value in (expected, "Undecided"), p
        if expected == "Embeddable":
            np.testing.assert_allclose(result.generator, principal_log(M), atol=1e-9)
            np.testing.assert_allclose(mat_exp(result.generator), M, atol=1e-10)
    assert checked > 700


def test_recognize_k3st_and_k2p():
    """K2P matrices are K3ST, TN and HKY but not equal-input."""
    from markov_embedding_mcp.models import K3STParams, ModelClass, k3st_matrix, model_recognize, recognize_k3st

    M = k3st_matrix(K3STParams.k2p(0.1, 0.05))
    found = model_recognize(M)
    assert {ModelClass.K3ST, ModelClass.K2P, ModelClass.TN, ModelClass.HKY} <= found
    assert ModelClass.EQUAL_INPUT not in found
    params = recognize_k3st(M)
    assert params is not None
    assert (params.x, params.y, params.z) == pytest.approx((0.1, 0.05, 0.05))


def test_model_recognize_generic_k3st():
    """A K3ST matrix with y != z is not TN."""
    from markov_embedding_mcp.models import K3STParams, ModelClass, k3st_matrix, model_recognize

    found = model_recognize(k3st_matrix(K3STParams(x=0.1, y=0.05, z=0.02)))
    assert ModelClass.K3ST in found
    assert ModelClass.K2P not in found
    assert ModelClass.TN not in found


def test_model_recognize_equal_input_d3():
    """3x3 matrices only ever match the equal-input classes."""
    from markov_embedding_mcp.models import EqualInputParams, ModelClass, equal_input_matrix, model_recognize

    found = model_recognize(equal_input_matrix(EqualInputParams(c_vec=(0.1, 0.2, 0.3))))
    assert found == {ModelClass.EQUAL_INPUT}
    assert model_recognize([[1.2, -0.2], [0.0, 1.0]]) == set()
