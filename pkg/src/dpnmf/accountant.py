"""Renyi-DP accounting for compositions of Gaussian mechanisms.

A Gaussian mechanism with L2 sensitivity ``delta_sens`` and noise standard
deviation ``tau`` is ``(alpha, c * alpha)``-RDP for every ``alpha > 1`` with
``c = delta_sens**2 / (2 * tau**2)``.  Curves of this linear form compose by
adding their rates, and converting ``(alpha, c * alpha)``-RDP to
``(eps, delta)``-DP,

    eps(alpha) = c * alpha + log(1 / delta) / (alpha - 1),

is minimised in closed form at ``alpha = 1 + sqrt(log(1 / delta) / c)``.
All logarithms are natural.
"""

import math
from dataclasses import dataclass
from typing import Iterable

__all__ = [
    "PrivacySpend",
    "RdpCurve",
    "compose",
    "dp_epsilon_at",
    "linear_composition_epsilon",
    "overall_epsilon",
    "rdp_gaussian",
    "to_dp",
]


@dataclass(frozen=True)
class RdpCurve:
    """Linear RDP curve ``alpha -> rate * alpha``."""

    rate: float = 0.0

    def __post_init__(self):
        if not self.rate >= 0:
            raise ValueError(f"RDP rate must be >= 0, got {self.rate}")

    def __call__(self, alpha):
        if not alpha > 1:
            raise ValueError(f"RDP order must be > 1, got {alpha}")
        return self.rate * alpha

    def __add__(self, other):
        return RdpCurve(self.rate + other.rate)


@dataclass(frozen=True)
class PrivacySpend:
    """An ``(epsilon, delta)`` guarantee obtained from an RDP curve.

    ``degenerate`` marks the zero-rate case, where no finite order is optimal
    (``alpha_opt`` is infinite) and epsilon is reported as 0.
    """

    epsilon: float
    delta: float
    alpha_opt: float
    t: int = 0
    degenerate: bool = False


def rdp_gaussian(delta_sens, tau):
    """RDP curve of one Gaussian mechanism."""
    if delta_sens < 0:
        raise ValueError(f"sensitivity must be >= 0, got {delta_sens}")
    if not tau > 0:
        raise ValueError(f"noise scale must be > 0 (tau=0 has unbounded spend), got {tau}")
    return RdpCurve(delta_sens ** 2 / (2.0 * tau ** 2))


def compose(curves: Iterable[RdpCurve]):
    """Adaptive composition: pointwise sum of the RDP curves."""
    total = RdpCurve()
    for curve in curves:
        total = total + curve
    return total


def _check_delta(delta):
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")


def dp_epsilon_at(curve, alpha, delta):
    """DP epsilon implied by ``curve`` at a fixed order ``alpha``."""
    _check_delta(delta)
    return curve(alpha) + math.log(1.0 / delta) / (alpha - 1.0)


def to_dp(curve, delta, t=0):
    """Tightest ``(epsilon, delta)``-DP statement for a linear RDP curve."""
    _check_delta(delta)
    if curve.rate == 0:
        return PrivacySpend(0.0, delta, math.inf, t, degenerate=True)
    log_inv_delta = math.log(1.0 / delta)
    alpha = 1.0 + math.sqrt(log_inv_delta / curve.rate)
    return PrivacySpend(dp_epsilon_at(curve, alpha, delta), delta, alpha, t)


def overall_epsilon(t, delta_a, tau_a, delta_b, tau_b, delta):
    """Spend of ``t`` rounds, each releasing two Gaussian-perturbed statistics."""
    if t < 0:
        raise ValueError(f"iteration count must be >= 0, got {t}")
    per_round = [rdp_gaussian(delta_a, tau_a), rdp_gaussian(delta_b, tau_b)]
    return to_dp(compose(per_round * t), delta, t=t)


def linear_composition_epsilon(epsilons):
    """Basic composition bound: the plain sum of per-release epsilons."""
    return float(sum(epsilons))
