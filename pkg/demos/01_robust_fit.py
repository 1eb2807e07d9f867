"""Fit a robust NMF to a synthetic low-rank matrix.

Run with ``python demos/01_robust_fit.py``.
"""
# %%
import numpy as np

from dpnmf import Hyperparams, fit, synth_lowrank
from dpnmf.solver import lipschitz_step_sizes

# %% [markdown]
# A 20 x 200 matrix of rank 3.  Every column has l2 norm at most one.

# %%
v, w_true, h_true = synth_lowrank(20, 200, 3, rng=0)
print("data", v.shape, "max column norm", np.linalg.norm(v, axis=0).max().round(3))

# %% [markdown]
# The H gradient is averaged over the N samples, so a useful H step grows
# with N.  ``lipschitz_step_sizes`` picks both steps from the data.

# %%
eta_h, eta_w = lipschitz_step_sizes(v, 3)
hp = Hyperparams(k=3, eta_h=eta_h, eta_w=eta_w, outer_iters=300)
res = fit(v, hp, clean=v)

losses = res.trajectory.losses
print(f"{len(losses)} iterations, loss {losses[0]:.3e} -> {losses[-1]:.3e}")
print("final objective vs clean", f"{res.trajectory.records[-1].objective:.2e}")
print("largest |R| entry", np.abs(res.r).max().round(4))
