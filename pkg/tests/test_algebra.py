import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from cstar_sharp.algebra import (
    ToleranceConfig,
    abs_element,
    adjoint,
    herm_eig,
    inv_sqrtm,
    loewner_leq,
    loewner_margin,
    matrix_fn,
    norm_cstar,
    sqrtm_psd,
)
from cstar_sharp.ensembles import ginibre, haar_unitary, make_rng, random_hermitian, random_psd
from cstar_sharp.errors import DimensionMismatch, DomainError, NotHermitian
from cstar_sharp.jacobi import jacobi_eigh

from conftest import assert_close

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


@st.composite
def complex_square(draw, max_k=6):
    k = draw(st.integers(1, max_k))
    re = draw(arrays(np.float64, (k, k), elements=finite))
    im = draw(arrays(np.float64, (k, k), elements=finite))
    return re + 1j * im


def test_adjoint_examples():
    assert_close(adjoint(np.eye(2)), np.eye(2), 0)
    assert_close(adjoint(np.array([[0, 1j], [0, 0]])), np.array([[0, 0], [-1j, 0]]), 0)


def test_adjoint_reverses_products(rng):
    a, b = ginibre(rng, 3), ginibre(rng, 3)
    ab = a @ b
    lhs = adjoint(ab)
    rhs = adjoint(b) @ adjoint(a)
    for i in range(3):
        for j in range(3):
            assert abs(lhs[i, j] - ab[j, i].conjugate()) <= 1e-12
            assert abs(lhs[i, j] - rhs[i, j]) <= 1e-12


@given(complex_square())
def test_adjoint_involution(a):
    assert np.array_equal(adjoint(adjoint(a)), a)


def test_herm_eig_diagonal():
    h = herm_eig(np.diag([3.0, 1.0]))
    assert_close(h.eigenvalues, [1.0, 3.0], 1e-15)
    assert_close(np.abs(h.eigenvectors), [[0, 1], [1, 0]], 1e-15)


def test_herm_eig_two_by_two():
    # lambda^2 - 4 lambda + 3 = 0
    h = herm_eig([[2.0, 1.0], [1.0, 2.0]])
    assert_close(h.eigenvalues, [1.0, 3.0], 1e-14)


@pytest.mark.parametrize("k", [1, 2, 4, 7, 16, 32])
def test_herm_eig_reconstruction(rng, k):
    a = random_hermitian(rng, k)
    h = herm_eig(a)
    h.check()
    fro = np.linalg.norm(a)
    assert np.linalg.norm(h.reconstruct() - a) <= 1e-10 * (1 + fro)
    # LAPACK as an independent reference for the spectrum
    assert_close(h.eigenvalues, np.linalg.eigvalsh(a), 1e-10 * (1 + fro))


@pytest.mark.parametrize(
    "a",
    [
        np.zeros((3, 3)),
        np.eye(4),
        np.diag([2.0, 2.0, -1.0, -1.0]),
        np.ones((5, 5)),
    ],
    ids=["zero", "identity", "degenerate", "rank-one"],
)
def test_herm_eig_degenerate_spectra(a):
    h = herm_eig(a)
    h.check()
    assert_close(h.eigenvalues, np.linalg.eigvalsh(a), 1e-13)


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        herm_eig([[0.0, 1.0], [0.0, 0.0]])


def test_herm_eig_is_deterministic(rng):
    a = random_hermitian(rng, 6)
    h1, h2 = herm_eig(a.copy()), herm_eig(a.copy())
    assert h1.eigenvalues.tobytes() == h2.eigenvalues.tobytes()
    assert h1.eigenvectors.tobytes() == h2.eigenvectors.tobytes()


def test_jacobi_converges_within_sweep_budget(rng):
    for k in (2, 8, 24):
        _, _, sweeps = jacobi_eigh(random_hermitian(rng, k))
        assert sweeps < 20


def test_matrix_fn_sqrt_diagonal():
    assert_close(matrix_fn(np.diag([4.0, 9.0]), np.sqrt), np.diag([2.0, 3.0]), 1e-14)


def test_matrix_fn_sqrt_two_by_two():
    r3 = np.sqrt(3.0)
    expected = np.array([[(r3 + 1) / 2, (r3 - 1) / 2], [(r3 - 1) / 2, (r3 + 1) / 2]])
    assert_close(matrix_fn([[2.0, 1.0], [1.0, 2.0]], np.sqrt), expected, 1e-14)
    assert_close(expected, [[1.36603, 0.36603], [0.36603, 1.36603]], 1e-5)


def test_matrix_fn_inverse_sqrt_identity():
    assert_close(matrix_fn(np.eye(3), lambda v: v ** -0.5), np.eye(3), 1e-15)
    assert_close(inv_sqrtm(np.eye(3)), np.eye(3), 1e-15)


def test_matrix_fn_domain_error():
    with pytest.raises(DomainError):
        matrix_fn(np.diag([1.0, -1.0]), np.sqrt, domain=lambda v: v >= 0)
    with pytest.raises(DomainError):
        sqrtm_psd(np.diag([1.0, -1e-3]))
    with pytest.raises(DomainError):
        inv_sqrtm(np.diag([1.0, 0.0]))


def test_sqrt_clamps_roundoff_negatives():
    r = sqrtm_psd(np.diag([4.0, -1e-12]))
    assert_close(r, np.diag([2.0, 0.0]), 1e-15)


def test_abs_element_examples(rng):
    assert_close(abs_element(haar_unitary(rng, 4)), np.eye(4), 1e-12)
    assert_close(abs_element(np.diag([-3.0, 4.0])), np.diag([3.0, 4.0]), 1e-14)
    assert_close(abs_element([[0.0, 2.0], [0.0, 0.0]]), np.diag([2.0, 0.0]), 1e-14)


def test_abs_element_is_left_absolute_value():
    # (a a^*)^(1/2) differs from (a^* a)^(1/2) for non-normal a
    a = np.array([[0.0, 2.0], [0.0, 0.0]])
    assert not np.allclose(abs_element(a), sqrtm_psd(adjoint(a) @ a))


def test_loewner_examples(rng):
    assert loewner_leq(np.eye(2), 2 * np.eye(2))
    assert not loewner_leq(np.diag([1.0, 3.0]), np.diag([2.0, 2.0]))
    assert loewner_leq(np.zeros((5, 5)), random_psd(rng, 5))
    assert loewner_margin(np.eye(2), 3 * np.eye(2)) == pytest.approx(2.0)


def test_loewner_errors():
    with pytest.raises(DimensionMismatch):
        loewner_leq(np.eye(2), np.eye(3))
    with pytest.raises(NotHermitian):
        loewner_leq(np.eye(2), [[1.0, 1.0], [0.0, 1.0]])


def test_norm_cstar_examples():
    assert norm_cstar(np.eye(3)) == pytest.approx(1.0, abs=1e-15)
    assert norm_cstar(np.diag([-5.0, 2.0])) == pytest.approx(5.0, abs=1e-14)
    assert norm_cstar([[0.0, 3.0], [0.0, 0.0]]) == pytest.approx(3.0, abs=1e-14)


def test_norm_cstar_hermitian_is_spectral_radius(rng):
    a = random_hermitian(rng, 6)
    assert norm_cstar(a) == pytest.approx(np.max(np.abs(herm_eig(a).eigenvalues)), rel=1e-12)


def test_tolerance_config():
    tol = ToleranceConfig()
    assert (tol.herm_tol, tol.psd_tol, tol.recon_tol, tol.eq_tol, tol.inv_tol) == (1e-10, 1e-9, 1e-9, 1e-8, 1e-10)
    scaled = tol.with_eq_tol(1e-6)
    assert scaled.eq_tol == 1e-6
    assert scaled.psd_tol == pytest.approx(1e-7)
    with pytest.raises(ValueError):
        ToleranceConfig(eq_tol=0.0)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), k=st.integers(1, 8))
def test_sqrt_squares_back(seed, k):
    p = random_psd(make_rng(seed), k)
    r = sqrtm_psd(p)
    assert np.linalg.norm(r @ r - p) <= 1e-9 * (1 + np.linalg.norm(p))


@settings(max_examples=60, deadline=None)
@given(complex_square())
def test_abs_element_is_positive(a):
    assert loewner_leq(np.zeros(a.shape), abs_element(a))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), k=st.integers(1, 8))
def test_cstar_identity(seed, k):
    a = ginibre(make_rng(seed), k)
    assert norm_cstar(adjoint(a) @ a) == pytest.approx(norm_cstar(a) ** 2, rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(complex_square(max_k=5))
def test_herm_eig_on_arbitrary_hermitian(a):
    h = a + adjoint(a)
    e = herm_eig(h)
    e.check()
