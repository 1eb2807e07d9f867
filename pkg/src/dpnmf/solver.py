"""Robust NMF by two-block projected gradient descent.

The (H, R) block takes a projected gradient step on H followed by the exact
shrink-and-clip minimiser for R; the W block takes one projected gradient
step on

    f_W(W) = 0.5 * tr(W^T W A) - tr(W^T B),

with the sufficient statistics ``A = H H^T / N`` and ``B = (V - R) H^T / N``.
"""

import logging
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional

import numpy as np

from .init import init_outliers, nndsvd
from .matrix_core import (
    Hyperparams,
    _check_shapes,
    as_data_matrix,
    clip_column_norms,
    loss,
    project_nonneg,
    project_unit_ball_columns,
    soft_threshold,
)

log = logging.getLogger(__name__)

__all__ = [
    "FitResult",
    "NumericalError",
    "Statistics",
    "Trajectory",
    "TrajectoryRecord",
    "fit",
    "grad_h",
    "grad_w",
    "lipschitz_step_sizes",
    "statistics",
    "update_h",
    "update_r",
    "update_w",
]


class NumericalError(FloatingPointError):
    """Raised when an iterate or the loss becomes non-finite."""


class Statistics(NamedTuple):
    a: np.ndarray
    b: np.ndarray


@dataclass
class TrajectoryRecord:
    iter: int
    loss: float
    objective: Optional[float] = None
    eps_overall: Optional[float] = None

    def as_dict(self):
        return {
            "iter": self.iter,
            "loss": self.loss,
            "objective": self.objective,
            "eps_overall": self.eps_overall,
        }


@dataclass
class Trajectory:
    records: List[TrajectoryRecord] = field(default_factory=list)

    def append(self, record: TrajectoryRecord):
        if self.records and record.iter <= self.records[-1].iter:
            raise ValueError("trajectory iterations must be strictly increasing")
        self.records.append(record)

    @property
    def losses(self):
        return np.array([rec.loss for rec in self.records])

    @property
    def objectives(self):
        return np.array(
            [np.nan if rec.objective is None else rec.objective for rec in self.records]
        )

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


class FitResult(NamedTuple):
    w: np.ndarray
    h: np.ndarray
    r: np.ndarray
    trajectory: Trajectory


def grad_h(v, w, h, r):
    """Gradient of ``q(H) = ||V - WH - R||_F^2 / (2N)`` with respect to H."""
    _check_shapes(v, w, h, r)
    n = v.shape[1]
    return (w.T @ (w @ h) - w.T @ (v - r)) / n


def update_h(h, grad, eta_h, bounded=False):
    """Projected gradient step on H.

    With ``bounded=True`` (privacy mode) columns whose norm exceeds one are
    rescaled onto the unit ball after the non-negativity projection.
    """
    if not eta_h > 0:
        raise ValueError(f"eta_h must be > 0, got {eta_h}")
    h_new = project_nonneg(h - eta_h * grad)
    if bounded:
        h_new = clip_column_norms(h_new)
    return h_new


def update_r(v, w, h, lam, m, bounded=False):
    """Closed-form outlier update ``S_{lam,m}(V - WH)``."""
    _check_shapes(v, w, h)
    r = soft_threshold(v - w @ h, lam, m)
    if bounded:
        r = clip_column_norms(r)
    return r


def statistics(v, h, r):
    """Sufficient statistics ``A = H H^T / N`` and ``B = (V - R) H^T / N``."""
    if h.shape[1] != v.shape[1] or r.shape != v.shape:
        raise ValueError(
            f"shape mismatch: V {v.shape}, H {h.shape}, R {r.shape}"
        )
    n = v.shape[1]
    return Statistics(a=(h @ h.T) / n, b=((v - r) @ h.T) / n)


def grad_w(w, stats):
    """Gradient ``W A - B`` of the dictionary subproblem."""
    a, b = stats
    if a.shape != (w.shape[1], w.shape[1]) or b.shape != w.shape:
        raise ValueError(f"shape mismatch: W {w.shape}, A {a.shape}, B {b.shape}")
    return w @ a - b


def update_w(w, grad, eta_w):
    """Projected gradient step onto non-negative unit-ball columns."""
    if not eta_w > 0:
        raise ValueError(f"eta_w must be > 0, got {eta_w}")
    return project_unit_ball_columns(w - eta_w * grad)


def lipschitz_step_sizes(v, k):
    """Fixed step sizes at the inverse Lipschitz constants of both blocks.

    ``eta_h = N / K`` is safe for every feasible W because unit-ball columns
    give ``||W^T W||_2 <= K``.  ``eta_w = N / ||H0||_2^2`` is the inverse of
    ``||A||_2`` at the NNDSVD start.  Note that the H gradient carries a
    ``1 / N`` factor, so useful values of ``eta_h`` scale with N.
    """
    v = as_data_matrix(v)
    n = v.shape[1]
    _, h0 = nndsvd(v, k)
    top = np.linalg.norm(h0, 2) ** 2
    return n / k, (n / top if top > 0 else 1.0)


def curator_step(v, w, h, r, hp, bounded=False):
    """One (H, R) block update with W held fixed.

    Shared by the non-private solver, the private solver and the curator role
    of the two-party protocol so that all three follow identical arithmetic.
    """
    for _ in range(hp.inner_iters):
        h = update_h(h, grad_h(v, w, h, r), hp.eta_h, bounded=bounded)
        if hp.model_outliers:
            r = update_r(v, w, h, hp.lam, hp.m, bounded=bounded)
    return h, r


def check_finite(t, value, *arrays):
    if not np.isfinite(value) or any(not np.all(np.isfinite(x)) for x in arrays):
        raise NumericalError(
            f"non-finite value at iteration {t} (loss={value}); "
            "try smaller step sizes"
        )


def fit(v, hp, clean=None, bounded=False):
    """Fit ``V ~ W H + R`` with the non-private two-block solver.

    Parameters
    ----------
    v : array_like, shape (D, N)
        Non-negative data matrix.
    hp : Hyperparams
        ``hp.eta_w=None`` means ``eta_w = eta_h``.
    clean : array_like, optional
        Noise-free reference matrix; when given, the trajectory also records
        the objective ``||clean - W H||_F^2 / (2N)`` at every iteration.
    bounded : bool
        Keep H and R columns inside the unit ball, as the private solver does.

    Returns
    -------
    FitResult
        ``(w, h, r, trajectory)``.  Iteration stops after ``hp.outer_iters``
        outer steps or once the relative loss change drops below ``hp.tol``.
    """
    from .metrics import objective_value

    v = as_data_matrix(v)
    if clean is not None:
        clean = np.asarray(clean, dtype=float)
        if clean.shape != v.shape:
            raise ValueError(f"clean has shape {clean.shape}, expected {v.shape}")
    eta_w = hp.eta_h if hp.eta_w is None else hp.eta_w

    w, h = nndsvd(v, hp.k)
    r = init_outliers(*v.shape)
    traj = Trajectory()
    prev = loss(v, w, h, r, hp.lam)

    for t in range(1, hp.outer_iters + 1):
        # divergence is reported by check_finite below
        with np.errstate(over="ignore", invalid="ignore"):
            h, r = curator_step(v, w, h, r, hp, bounded=bounded)
            w = update_w(w, grad_w(w, statistics(v, h, r)), eta_w)
            cur = loss(v, w, h, r, hp.lam)
        check_finite(t, cur, w, h, r)
        obj = objective_value(clean, w, h) if clean is not None else None
        traj.append(TrajectoryRecord(iter=t, loss=cur, objective=obj))

        if abs(prev - cur) / max(prev, 1e-12) < hp.tol:
            log.debug("converged at iteration %d (loss %.6g)", t, cur)
            break
        prev = cur

    return FitResult(w, h, r, traj)
