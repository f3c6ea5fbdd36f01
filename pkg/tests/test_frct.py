import math

import numpy as np
import pytest
import scipy.fft

from frctnofdm import make_basis, ifrct, frct, correlation_matrix


def reference_basis(n, alpha):
    b = np.empty((n, n))
    for row in range(n):
        for k in range(n):
            w = 1.0 / math.sqrt(2.0) if k == 0 else 1.0
            b[row, k] = math.sqrt(2.0 / n) * w * math.cos(
                math.pi * alpha * (2 * row + 1) * k / (2 * n)
            )
    return b


def test_basis_matches_reference_formula():
    for n, alpha in [(4, 0.8), (8, 1.0), (16, 0.7)]:
        basis = make_basis(n, alpha)
        np.testing.assert_allclose(basis.basis, reference_basis(n, alpha), atol=1e-14)


def test_alpha_one_is_orthonormal():
    basis = make_basis(256, 1.0)
    corr = correlation_matrix(basis)
    assert np.max(np.abs(corr - np.eye(256))) < 1e-10


def test_alpha_one_matches_orthonormal_dct():
    basis = make_basis(64, 1.0)
    rng = np.random.default_rng(0)
    x = rng.standard_normal(64)
    np.testing.assert_allclose(
        frct(x, basis), scipy.fft.dct(x, type=2, norm="ortho"), atol=1e-12
    )
    np.testing.assert_allclose(
        ifrct(x, basis), scipy.fft.idct(x, type=2, norm="ortho"), atol=1e-12
    )


def test_round_trip_identity_at_alpha_one():
    basis = make_basis(256, 1.0)
    rng = np.random.default_rng(1)
    x = rng.standard_normal((256, 100))
    np.testing.assert_allclose(frct(ifrct(x, basis), basis), x, atol=1e-10)


def test_round_trip_equals_correlation_matrix():
    basis = make_basis(32, 0.8)
    corr = correlation_matrix(basis)
    rng = np.random.default_rng(2)
    x = rng.standard_normal(32)
    np.testing.assert_allclose(frct(ifrct(x, basis), basis), corr @ x, atol=1e-12)


def test_correlation_matrix_against_summation_oracle():
    basis = make_basis(4, 0.8)
    corr = correlation_matrix(basis)
    b = reference_basis(4, 0.8)
    oracle = np.zeros((4, 4))
    for i in range(4):
        for j in range(4):
            oracle[i, j] = sum(b[n, i] * b[n, j] for n in range(4))
    np.testing.assert_allclose(corr, oracle, atol=1e-12)
    np.testing.assert_allclose(corr, corr.T, atol=0)


def test_batch_and_single_agree():
    basis = make_basis(16, 0.9)
    rng = np.random.default_rng(3)
    x = rng.standard_normal((16, 5))
    batch = ifrct(x, basis)
    for j in range(5):
        np.testing.assert_allclose(batch[:, j], ifrct(x[:, j], basis), atol=1e-14)


def test_invalid_arguments_rejected():
    with pytest.raises(ValueError):
        make_basis(0, 1.0)
    with pytest.raises(ValueError):
        make_basis(8, 0.0)
    with pytest.raises(ValueError):
        make_basis(8, 1.5)
    basis = make_basis(8, 1.0)
    with pytest.raises(ValueError):
        ifrct(np.zeros(7), basis)
