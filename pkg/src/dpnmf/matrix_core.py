"""Projections, soft-thresholding and the robust NMF loss.

Matrices are plain ``numpy.ndarray`` objects of dtype float64.  Samples are
columns: ``V`` is ``D x N``, ``W`` is ``D x K``, ``H`` is ``K x N`` and the
outlier matrix ``R`` has the shape of ``V``.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "Hyperparams",
    "as_data_matrix",
    "clip_column_norms",
    "loss",
    "project_nonneg",
    "project_unit_ball_columns",
    "soft_threshold",
]


@dataclass(frozen=True)
class Hyperparams:
    """Solver settings shared by the private and non-private fits.

    ``eta_w=None`` resolves to ``eta_h`` for the non-private solver and to
    ``eta_h / 1e4`` for the private one.  ``model_outliers=False`` freezes the
    outlier matrix at zero (equivalent to an infinite ``lam``).
    """

    k: int
    lam: float = 0.1
    m: float = 1.0
    eta_h: float = 0.05
    eta_w: Optional[float] = None
    outer_iters: int = 200
    inner_iters: int = 1
    tol: float = 1e-6
    model_outliers: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if not self.eta_h > 0:
            raise ValueError(f"eta_h must be > 0, got {self.eta_h}")
        if self.eta_w is not None and not self.eta_w > 0:
            raise ValueError(f"eta_w must be > 0, got {self.eta_w}")
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")
        if self.m < 0:
            raise ValueError(f"m must be >= 0, got {self.m}")
        if self.outer_iters < 0:
            raise ValueError(f"outer_iters must be >= 0, got {self.outer_iters}")
        if self.inner_iters < 1:
            raise ValueError(f"inner_iters must be >= 1, got {self.inner_iters}")
        if self.tol < 0:
            raise ValueError(f"tol must be >= 0, got {self.tol}")


def as_data_matrix(v) -> np.ndarray:
    """Return ``v`` as a 2-D float array, checking non-negativity."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
        raise ValueError(f"data matrix must be 2-D and non-empty, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("data matrix contains non-finite entries")
    if np.any(v < 0):
        i, j = np.argwhere(v < 0)[0]
        raise ValueError(f"data matrix has a negative entry at ({i}, {j})")
    return v


def project_nonneg(x: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the non-negative orthant."""
    return np.maximum(x, 0.0)


def clip_column_norms(x: np.ndarray, radius: float = 1.0) -> np.ndarray:
    """Rescale every column whose l2 norm exceeds ``radius`` back onto the ball.

    Columns already inside the ball (including zero columns) are untouched.
    """
    norms = np.linalg.norm(x, axis=0)
    scale = np.maximum(norms / radius, 1.0)
    return x / scale


def project_unit_ball_columns(w: np.ndarray) -> np.ndarray:
    """Project each column onto the non-negative part of the unit l2 ball."""
    return clip_column_norms(project_nonneg(w))


def soft_threshold(x: np.ndarray, lam: float, m: float) -> np.ndarray:
    """Entrywise shrink-and-clip operator.

    For each entry this is the minimiser over ``r`` in ``[-m, m]`` of
    ``0.5 * (x - r)**2 + lam * |r|``: zero below ``lam``, shifted towards zero
    by ``lam`` up to ``lam + m``, and ``sign(x) * m`` beyond.
    """
    if lam < 0 or m < 0:
        raise ValueError("lam and m must be non-negative")
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.minimum(np.maximum(np.abs(x) - lam, 0.0), m)


def _check_shapes(v, w, h, r=None):
    d, n = v.shape
    if w.ndim != 2 or w.shape[0] != d:
        raise ValueError(f"W has shape {w.shape}, expected ({d}, K)")
    k = w.shape[1]
    if h.shape != (k, n):
        raise ValueError(f"H has shape {h.shape}, expected ({k}, {n})")
    if r is not None and r.shape != (d, n):
        raise ValueError(f"R has shape {r.shape}, expected ({d}, {n})")


def loss(v: np.ndarray, w: np.ndarray, h: np.ndarray, r: np.ndarray, lam: float) -> float:
    """Robust NMF loss ``(0.5 * ||V - WH - R||_F^2 + lam * sum|R|) / N``."""
    _check_shapes(v, w, h, r)
    resid = v - w @ h - r
    n = v.shape[1]
    return float((0.5 * np.sum(resid * resid) + lam * np.sum(np.abs(r))) / n)
