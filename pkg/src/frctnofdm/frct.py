"""Fractional cosine transform core.

The N-order inverse/forward transforms with bandwidth compression factor
alpha in (0, 1]; alpha = 1 recovers the orthogonal DCT-II. The basis is
precomputed once per (N, alpha) and shared read-only by the TX and RX
paths.
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FrctBasis:
    """Precomputed N x N transform basis for a given (N, alpha)."""

    n_subcarriers: int
    alpha: float
    basis: np.ndarray  # (N, N), entry (n, k)
    weights: np.ndarray  # (N,), 1/sqrt(2) at k=0 else 1


def make_basis(n_subcarriers: int, alpha: float) -> FrctBasis:
    """Build the transform basis: entry (n, k) =
    sqrt(2/N) * W_k * cos(pi * alpha * (2n+1) * k / (2N))."""
    if n_subcarriers < 1:
        raise ValueError(f"n_subcarriers must be >= 1, got {n_subcarriers}")
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    n = np.arange(n_subcarriers)[:, None]
    k = np.arange(n_subcarriers)[None, :]
    weights = np.ones(n_subcarriers)
    weights[0] = 1.0 / np.sqrt(2.0)
    basis = np.sqrt(2.0 / n_subcarriers) * weights[None, :] * np.cos(
        np.pi * alpha * (2 * n + 1) * k / (2 * n_subcarriers)
    )
    basis.setflags(write=False)
    weights.setflags(write=False)
    return FrctBasis(n_subcarriers, float(alpha), basis, weights)


def ifrct(freq_symbols: np.ndarray, basis: FrctBasis) -> np.ndarray:
    """Inverse transform: multiplex subcarrier amplitudes into time samples.

    Accepts a length-N vector or an (N, nsym) batch of column vectors.
    """
    freq_symbols = np.asarray(freq_symbols, dtype=np.float64)
    if freq_symbols.shape[0] != basis.n_subcarriers:
        raise ValueError(
            f"expected length {basis.n_subcarriers}, got {freq_symbols.shape[0]}"
        )
    return basis.basis @ freq_symbols


def frct(time_samples: np.ndarray, basis: FrctBasis) -> np.ndarray:
    """Forward transform (transpose of the ifrct basis)."""
    time_samples = np.asarray(time_samples, dtype=np.float64)
    if time_samples.shape[0] != basis.n_subcarriers:
        raise ValueError(
            f"expected length {basis.n_subcarriers}, got {time_samples.shape[0]}"
        )
    return basis.basis.T @ time_samples


def correlation_matrix(basis: FrctBasis) -> np.ndarray:
    """Subcarrier cross-correlation matrix C = basis^T basis.

    C quantifies the inter-carrier interference: frct(ifrct(X)) = C X.
    Identity at alpha = 1; symmetrized to make C[l, m] == C[m, l] exact.
    """
    c = basis.basis.T @ basis.basis
    return (c + c.T) / 2.0
