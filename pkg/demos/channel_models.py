"""
IID Rayleigh versus line of sight
=================================

Users in the LoS model are single plane waves leaving a half-wavelength-ish
ULA at random angles. MF likes this: steering vectors at different angles
are nearly orthogonal once the array is large. ZF does not, because now and
then two users land close together and inverting the Gram matrix costs a
lot of power.
"""

import numpy as np

from mimo_lab import ScenarioConfig, estimate_rates
from mimo_lab.channel import LosConfig, los_channel, steering_vector
from mimo_lab.numerics import derive_stream

# %%
# Correlation between two steering vectors as their angular gap shrinks.
M = 100
a0 = steering_vector(M, 0.0, 0.6)
for gap in (10.0, 1.0, 0.5, 0.1):
    a1 = steering_vector(M, gap, 0.6)
    print(f"gap {gap:5.1f} deg  |a0^H a1|/M = {abs(np.vdot(a0, a1)) / M:.3f}")

# %%
# Row norms are pinned to sqrt(M) so the comparison with IID is fair.
H = los_channel(M, 4, LosConfig(), derive_stream(3, 0))
print("row energies / M:", np.round(np.sum(np.abs(H) ** 2, axis=1) / M, 12))

# %%
# Sum rates. LoS + ZF uses on_singular="skip": the rare draw with two users
# at essentially the same angle has no usable pseudoinverse.
for precoder in ("mf", "zf_exact"):
    for model in ("iid", "los"):
        rep = estimate_rates(ScenarioConfig(M=M, K=10, snr_t_db=10, model=model, precoder=precoder,
                                            realizations=3000, seed=5, on_singular="skip"))
        note = f" ({rep.skipped} skipped)" if rep.skipped else ""
        print(f"{precoder:>8} {model:>4}: {rep.sum_rate:7.3f} +- {rep.sum_rate_stderr:.3f}{note}")
