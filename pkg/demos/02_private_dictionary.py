"""Learn a dictionary under differential privacy and read off the spend.

Run with ``python demos/02_private_dictionary.py``.
"""
# %%
import math

from dpnmf import Hyperparams, PrivacyParams, fit, fit_dp, synth_lowrank
from dpnmf.accountant import linear_composition_epsilon
from dpnmf.solver import lipschitz_step_sizes

v = synth_lowrank(20, 200, 3, rng=1)[0]
eta_h, _ = lipschitz_step_sizes(v, 3)
hp = Hyperparams(k=3, eta_h=eta_h, outer_iters=300, tol=0)

# %% [markdown]
# Each iteration releases two noisy statistics.  Smaller per-iteration budgets
# mean more noise, a worse dictionary and a smaller overall epsilon.

# %%
for eps_t in (0.3, 0.5, 0.999, math.inf):
    res = fit_dp(v, hp, PrivacyParams(eps_t, delta=1e-5, seed=1), clean=v)
    rec = res.trajectory.records[-1]
    print(f"eps_t={eps_t:<6} objective={rec.objective:.3e} overall eps={res.spend.epsilon:.3f}")

# %% [markdown]
# Renyi accounting against adding up the per-release budgets.

# %%
res = fit_dp(v, hp, PrivacyParams(0.5, delta=1e-5, seed=1))
naive = linear_composition_epsilon([0.5] * (2 * hp.outer_iters))
print(f"RDP: {res.spend.epsilon:.2f} at alpha={res.spend.alpha_opt:.2f}; linear sum: {naive:.0f}")

# %%
base = fit(v, Hyperparams(k=3, eta_h=eta_h, eta_w=eta_h / 1e4, outer_iters=300, tol=0), clean=v)
print(f"non-private objective with the same steps: {base.trajectory.records[-1].objective:.3e}")
