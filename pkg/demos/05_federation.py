"""A curator and an analyst learn a private dictionary over a text channel.

The curator never sends anything but noisy statistics.  The transcript can be
replayed and the result matches the single-process private fit exactly.
"""
# %%
import numpy as np

from dpnmf import Hyperparams, PrivacyParams, fit_dp, synth_lowrank
from dpnmf.federation import decode, run_protocol

v = synth_lowrank(12, 60, 2, rng=3)[0]
hp = Hyperparams(k=2, eta_h=30.0, eta_w=0.01, outer_iters=5)
pp = PrivacyParams(0.5, delta=1e-5, seed=3)

w, transcript = run_protocol(v, hp, pp)
for line in transcript[:2]:
    print(line[:90] + " ...")
print(len(transcript), "messages")

# %%
first = decode(transcript[0])
print("first release: A_bar", first.a_bar.shape, "B_bar", first.b_bar.shape)
print("identical to fit_dp:", np.array_equal(w, fit_dp(v, hp, pp).w))
