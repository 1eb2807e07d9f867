"""Deterministic starting points for the factorization."""

import numpy as np

from .matrix_core import as_data_matrix

__all__ = ["nndsvd", "init_outliers"]


def _split(x):
    return np.maximum(x, 0.0), np.maximum(-x, 0.0)


def nndsvd(v, k):
    """Non-negative double SVD initialization (Boutsidis & Gallopoulos, 2008).

    Parameters
    ----------
    v : array_like, shape (D, N)
        Non-negative data matrix.
    k : int
        Latent dimension, ``1 <= k <= min(D, N)``.

    Returns
    -------
    w0 : ndarray, shape (D, k)
        Non-negative dictionary with column norms at most one.
    h0 : ndarray, shape (k, N)
        Non-negative coefficients.  Any scale removed from a column of ``w0``
        is moved to the matching row of ``h0`` so the product is unchanged.

    Notes
    -----
    Plain NNDSVD: columns that come out as zero stay zero (no random fill).
    For every singular pair after the first, the (positive, positive) section
    is used unless the (negative, negative) section has a strictly larger
    norm product.
    """
    v = as_data_matrix(v)
    d, n = v.shape
    if not 1 <= k <= min(d, n):
        raise ValueError(f"k must lie in [1, {min(d, n)}], got {k}")
    try:
        u, s, vt = np.linalg.svd(v, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"SVD failed on the data matrix: {exc}") from exc

    w = np.zeros((d, k))
    h = np.zeros((k, n))
    w[:, 0] = np.sqrt(s[0]) * np.abs(u[:, 0])
    h[0, :] = np.sqrt(s[0]) * np.abs(vt[0, :])

    for j in range(1, k):
        xp, xn = _split(u[:, j])
        yp, yn = _split(vt[j, :])
        xp_norm, xn_norm = np.linalg.norm(xp), np.linalg.norm(xn)
        yp_norm, yn_norm = np.linalg.norm(yp), np.linalg.norm(yn)
        mp = xp_norm * yp_norm
        mn = xn_norm * yn_norm
        if mp >= mn:
            x, y, x_norm, y_norm, sigma = xp, yp, xp_norm, yp_norm, mp
        else:
            x, y, x_norm, y_norm, sigma = xn, yn, xn_norm, yn_norm, mn
        if sigma == 0.0:
            continue
        scale = np.sqrt(s[j] * sigma)
        w[:, j] = scale * x / x_norm
        h[j, :] = scale * y / y_norm

    col_norms = np.linalg.norm(w, axis=0)
    shrink = np.maximum(col_norms, 1.0)
    w /= shrink
    h *= shrink[:, None]
    return w, h


def init_outliers(d, n):
    """All-zero ``d x n`` outlier matrix."""
    if d < 1 or n < 1:
        raise ValueError(f"dimensions must be >= 1, got ({d}, {n})")
    return np.zeros((d, n))
