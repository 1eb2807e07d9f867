"""Why the outlier matrix matters.

Ten percent of the columns are corrupted.  The fit that models outliers
recovers a much cleaner low-rank part than the one that does not.
"""
# %%
import numpy as np

from dpnmf import Hyperparams, contaminate, fit, objective_value, synth_lowrank
from dpnmf.solver import lipschitz_step_sizes

clean = synth_lowrank(20, 200, 3, rng=2)[0]
noisy, mask = contaminate(clean, col_frac=0.1, entry_frac=0.7, rng=2)
print("corrupted entries:", int(mask.sum()), "in", int(mask.any(axis=0).sum()), "columns")

# %%
eta_h, eta_w = lipschitz_step_sizes(noisy, 3)
common = dict(k=3, eta_h=eta_h, eta_w=eta_w, outer_iters=500, tol=0)
for label, hp in [("with R", Hyperparams(**common)),
                  ("R frozen at 0", Hyperparams(model_outliers=False, **common))]:
    res = fit(noisy, hp)
    print(f"{label:14s} objective vs clean: {objective_value(clean, res.w, res.h):.3e}")

# %% [markdown]
# Where does R put its mass?  Mostly on the corrupted entries.

# %%
res = fit(noisy, Hyperparams(**common))
hit = np.abs(res.r)[mask].sum() / np.abs(res.r).sum()
print(f"share of |R| on corrupted entries: {hit:.1%}")
