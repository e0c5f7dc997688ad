"""Regularized solve and spectral norm against independent dense oracles."""

import numpy as np
import pytest

from bhs.linalg import TikhonovFactorization, spectral_norm, tikhonov_solve


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def augmented_lstsq_oracle(A, b, alpha):
    """Independent route: least squares on the stacked system [A; sqrt(alpha) I]."""
    n = A.shape[1]
    C = np.vstack([A, np.sqrt(alpha) * np.eye(n)])
    d = np.concatenate([b, np.zeros(n)])
    return np.linalg.lstsq(C, d, rcond=None)[0]


def test_identity_closed_form():
    b = np.arange(1.0, 6.0) + 1j * np.linspace(-1, 1, 5)
    g = tikhonov_solve(np.eye(5), b, 0.5)
    np.testing.assert_allclose(g, b / 1.5, rtol=1e-14)


def test_diagonal_closed_form():
    sigma = np.array([3.0, 1.0, 0.25, 0.02])
    alpha = 1e-3
    rng = np.random.default_rng(11)
    b = random_complex(rng, 4)
    g = tikhonov_solve(np.diag(sigma), b, alpha)
    np.testing.assert_allclose(g, sigma * b / (sigma**2 + alpha), rtol=1e-12)


def test_normal_equation_residual_vs_oracle():
    rng = np.random.default_rng(2024)
    A = random_complex(rng, 8, 8)
    b = random_complex(rng, 8)
    alpha = 1e-6
    g = tikhonov_solve(A, b, alpha)
    rhs = A.conj().T @ b
    residual = np.linalg.norm((alpha * np.eye(8) + A.conj().T @ A) @ g - rhs)
    assert residual <= 1e-10 * (np.linalg.norm(rhs) + 1.0)
    np.testing.assert_allclose(g, augmented_lstsq_oracle(A, b, alpha), atol=1e-8)


def test_homogeneity_in_b():
    rng = np.random.default_rng(5)
    A = random_complex(rng, 6, 6)
    b = random_complex(rng, 6)
    c = 2.75 - 0.5j
    g1 = tikhonov_solve(A, c * b, 1e-4)
    g2 = c * tikhonov_solve(A, b, 1e-4)
    np.testing.assert_allclose(g1, g2, rtol=1e-12)


def test_norm_monotonicity_in_alpha():
    rng = np.random.default_rng(77)
    for _ in range(5):
        A = random_complex(rng, 10, 10)
        b = random_complex(rng, 10)
        alphas = [1e-8, 1e-6, 1e-4, 1e-2, 1.0]
        norms = [np.linalg.norm(tikhonov_solve(A, b, a)) for a in alphas]
        assert all(n1 >= n2 - 1e-12 for n1, n2 in zip(norms, norms[1:]))


def test_factorization_matches_single_solve():
    rng = np.random.default_rng(8)
    A = random_complex(rng, 12, 12)
    B = random_complex(rng, 12, 7)
    fact = TikhonovFactorization(A, 1e-5)
    batch = fact.solve(B)
    for j in range(7):
        np.testing.assert_allclose(batch[:, j], tikhonov_solve(A, B[:, j], 1e-5), atol=1e-10)


def test_alpha_validation():
    with pytest.raises(ValueError):
        tikhonov_solve(np.eye(3), np.ones(3), 0.0)
    with pytest.raises(ValueError):
        tikhonov_solve(np.eye(3), np.ones(3), -1e-6)
    with pytest.raises(ValueError):
        tikhonov_solve(np.array([[np.nan, 0], [0, 1]]), np.ones(2), 1e-6)


def test_spectral_norm_trivial():
    assert spectral_norm(np.eye(4)) == pytest.approx(1.0, rel=1e-12)
    assert spectral_norm(np.diag([3.0, 1.0, 0.5])) == pytest.approx(3.0, rel=1e-10)
    assert spectral_norm(np.zeros((5, 5))) == 0.0


def test_spectral_norm_vs_svd_oracle():
    rng = np.random.default_rng(31)
    for _ in range(6):
        E = random_complex(rng, 10, 10)
        reference = np.linalg.svd(E, compute_uv=False)[0]
        assert spectral_norm(E) == pytest.approx(reference, rel=1e-8)


def test_spectral_norm_circulant():
    # Circulant matrices have Fourier-mode singular vectors; the start vector
    # must not be trapped in the constant mode.
    first_row = np.array([0.1, 2.0, -0.3, 0.4, 1.1, -0.9])
    n = len(first_row)
    C = np.array([np.roll(first_row, k) for k in range(n)])
    reference = np.linalg.svd(C, compute_uv=False)[0]
    assert spectral_norm(C) == pytest.approx(reference, rel=1e-8)
