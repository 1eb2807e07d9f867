"""Differentially-private dictionary learning.

The data holder runs the exact (H, R) update, releases the sufficient
statistics A and B through the Gaussian mechanism, and the dictionary W is
updated from the noisy statistics alone.  Every column of H and R is kept in
the unit l2 ball and every column of V must already be there, which is what
bounds the sensitivities:

    Delta_A = 2 / N,
    Delta_B = 4 / N   (2 / N when the outlier matrix is not modelled).
"""

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from .accountant import PrivacySpend, compose, rdp_gaussian, to_dp
from .init import init_outliers, nndsvd
from .matrix_core import as_data_matrix, loss
from .solver import (
    Statistics,
    Trajectory,
    TrajectoryRecord,
    check_finite,
    curator_step,
    statistics,
    update_w,
)

log = logging.getLogger(__name__)

__all__ = [
    "NoisyStatistics",
    "PrivacyParams",
    "PrivateFit",
    "analyst_step",
    "check_unit_columns",
    "fit_dp",
    "gaussian_sigma",
    "noise_rng",
    "noise_scales",
    "perturb_statistics",
    "private_eta_w",
    "sensitivity_a",
    "sensitivity_b",
]

# slack for columns that were normalised in floating point
_NORM_SLACK = 1e-9


@dataclass(frozen=True)
class PrivacyParams:
    """Per-iteration budget, failure probability and noise seed.

    ``epsilon_t`` is either one value used at every iteration or a sequence
    with one value per iteration.  ``math.inf`` switches the noise off
    (``tau = 0``); the reported spend is then infinite.
    """

    epsilon_t: Union[float, Sequence[float]]
    delta: float = 1e-5
    model_outliers: bool = True
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        eps = np.atleast_1d(np.asarray(self.epsilon_t, dtype=float))
        if eps.size == 0 or np.any(~(eps > 0)):
            raise ValueError("every epsilon_t must be > 0")

    def epsilon_at(self, t):
        """Budget of iteration ``t`` (1-based)."""
        if np.ndim(self.epsilon_t) == 0:
            return float(self.epsilon_t)
        schedule = list(self.epsilon_t)
        if t > len(schedule):
            raise ValueError(f"epsilon schedule has {len(schedule)} entries, need iteration {t}")
        return float(schedule[t - 1])


class NoisyStatistics(NamedTuple):
    a_bar: np.ndarray
    b_bar: np.ndarray
    tau_a: float
    tau_b: float


class PrivateFit(NamedTuple):
    w: np.ndarray
    trajectory: Trajectory
    spend: PrivacySpend


def sensitivity_a(n):
    """L2 sensitivity of ``H H^T / N`` for unit-ball columns of H."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return 2.0 / n


def sensitivity_b(n, model_outliers=True):
    """L2 sensitivity of ``(V - R) H^T / N`` for unit-ball columns of V, R and H."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return (4.0 if model_outliers else 2.0) / n


def gaussian_sigma(delta_sens, epsilon, delta):
    """Noise scale ``(delta_sens / epsilon) * sqrt(2 ln(1.25 / delta))``.

    The classical guarantee needs ``epsilon < 1``; larger values are accepted
    with a warning because the reported guarantee comes from RDP accounting.
    """
    if not delta_sens > 0:
        raise ValueError(f"sensitivity must be > 0, got {delta_sens}")
    if not epsilon > 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if epsilon >= 1 and math.isfinite(epsilon):
        log.warning("epsilon=%g >= 1 lies outside the classical Gaussian-mechanism regime", epsilon)
    return delta_sens / epsilon * math.sqrt(2.0 * math.log(1.25 / delta))


def noise_scales(n, epsilon, delta, model_outliers=True):
    """``(tau_a, tau_b)`` for one iteration with budget ``epsilon``."""
    return (
        gaussian_sigma(sensitivity_a(n), epsilon, delta),
        gaussian_sigma(sensitivity_b(n, model_outliers), epsilon, delta),
    )


def noise_rng(seed, t, which):
    """Independent generator for iteration ``t`` and statistic ``which`` (0=A, 1=B)."""
    return np.random.default_rng([seed, t, which])


def perturb_statistics(stats, tau_a, tau_b, rng_a, rng_b=None):
    """Add i.i.d. ``N(0, tau^2)`` noise to every entry of A and of B.

    ``rng_b`` defaults to ``rng_a`` (one stream for both draws).  A zero scale
    returns the corresponding statistic unchanged, without drawing.
    """
    if tau_a < 0 or tau_b < 0:
        raise ValueError("noise scales must be >= 0")
    rng_a = np.random.default_rng(rng_a)
    rng_b = rng_a if rng_b is None else np.random.default_rng(rng_b)
    a, b = stats
    a_bar = a + rng_a.normal(0.0, tau_a, size=a.shape) if tau_a > 0 else a.copy()
    b_bar = b + rng_b.normal(0.0, tau_b, size=b.shape) if tau_b > 0 else b.copy()
    return NoisyStatistics(a_bar, b_bar, tau_a, tau_b)


def analyst_step(w, noisy, eta_w):
    """Dictionary update from released statistics only."""
    return update_w(w, w @ noisy.a_bar - noisy.b_bar, eta_w)


def private_eta_w(hp):
    return hp.eta_h / 1e4 if hp.eta_w is None else hp.eta_w


def check_unit_columns(v):
    norms = np.linalg.norm(v, axis=0)
    worst = int(np.argmax(norms))
    if norms[worst] > 1.0 + _NORM_SLACK:
        raise ValueError(
            f"column {worst} of V has l2 norm {norms[worst]:.6g} > 1; the sensitivity "
            "bounds need unit-ball columns, use normalize_columns(v, 'unit-l2-clip')"
        )


def release(v, h, r, t, pp):
    """Noisy statistics for iteration ``t``: the only thing the data holder publishes."""
    eps = pp.epsilon_at(t)
    n = v.shape[1]
    if math.isinf(eps):
        tau_a = tau_b = 0.0
    else:
        tau_a, tau_b = noise_scales(n, eps, pp.delta, pp.model_outliers)
    return perturb_statistics(
        statistics(v, h, r), tau_a, tau_b,
        noise_rng(pp.seed, t, 0), noise_rng(pp.seed, t, 1),
    )


def iteration_curve(n, pp, t):
    """RDP curve of the two releases made at iteration ``t``; ``None`` if noiseless."""
    eps = pp.epsilon_at(t)
    if math.isinf(eps):
        return None
    tau_a, tau_b = noise_scales(n, eps, pp.delta, pp.model_outliers)
    return compose([
        rdp_gaussian(sensitivity_a(n), tau_a),
        rdp_gaussian(sensitivity_b(n, pp.model_outliers), tau_b),
    ])


def spend_after(n, pp, t):
    """Overall RDP-accounted spend after ``t`` iterations."""
    curves = [iteration_curve(n, pp, s) for s in range(1, t + 1)]
    if any(c is None for c in curves):
        return PrivacySpend(math.inf, pp.delta, math.nan, t)
    return to_dp(compose(curves), pp.delta, t=t)


def fit_dp(v, hp, pp, clean=None):
    """Learn a differentially-private dictionary.

    Parameters
    ----------
    v : array_like, shape (D, N)
        Non-negative data whose columns have l2 norm at most one.
    hp : Hyperparams
        ``hp.eta_w=None`` means ``eta_w = eta_h / 1e4``.  ``hp.tol`` is not
        used: the run always takes ``hp.outer_iters`` iterations, because a
        data-dependent stopping time would leak outside the accounting.
    pp : PrivacyParams
        ``pp.model_outliers`` overrides ``hp.model_outliers``.
    clean : array_like, optional
        Reference matrix for the per-iteration objective.

    Returns
    -------
    PrivateFit
        ``(w, trajectory, spend)``.  Only ``w`` and ``spend`` are meant to be
        published; the trajectory's loss values are computed from raw data.
    """
    from dataclasses import replace

    from .metrics import objective_value

    v = as_data_matrix(v)
    check_unit_columns(v)
    hp = replace(hp, model_outliers=pp.model_outliers)
    eta_w = private_eta_w(hp)
    n = v.shape[1]

    w, h = nndsvd(v, hp.k)
    r = init_outliers(*v.shape)
    traj = Trajectory()
    spend = spend_after(n, pp, 0)
    total = compose([])
    noiseless = False

    for t in range(1, hp.outer_iters + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            h, r = curator_step(v, w, h, r, hp, bounded=True)
            noisy = release(v, h, r, t, pp)
            w = analyst_step(w, noisy, eta_w)
            cur = loss(v, w, h, r, hp.lam)
        check_finite(t, cur, w, noisy.a_bar, noisy.b_bar)
        curve = iteration_curve(n, pp, t)
        if curve is None:
            noiseless = True
        else:
            total = total + curve
        spend = (PrivacySpend(math.inf, pp.delta, math.nan, t) if noiseless
                 else to_dp(total, pp.delta, t=t))
        obj = objective_value(clean, w, h) if clean is not None else None
        traj.append(TrajectoryRecord(t, cur, obj, spend.epsilon))

    return PrivateFit(w, traj, spend)
