"""
Amplitude and phase errors on the transmit branches
===================================================

Each antenna branch multiplies its signal by (1 + a) exp(j phi). The base
station precodes using the channel it believes in, which includes those
errors, while users receive through the true channel.
"""

import numpy as np

from mimo_lab import ImpairmentConfig, LinkBudget, ScenarioConfig, estimate_rates
from mimo_lab.analytic import error_factor, sinr_mf, sinr_mf_impaired
from mimo_lab.impairments import sample_branch_errors
from mimo_lab.numerics import derive_stream

cfg = ImpairmentConfig(sigma_a_db=1.0, sigma_phi_deg=20.0)
print(f"sigma_a = {cfg.sigma_a_lin:.4f} (linear), sigma_phi = {cfg.sigma_phi_rad:.4f} rad")

# %%
# A few branch multipliers, and the SINR penalty they imply for MF.
eps = sample_branch_errors(5, cfg, derive_stream(0, 0))
print("eps:", np.round(eps, 3))
print(f"exact factor {error_factor(cfg, 'exact'):.4f}, small-error factor {error_factor(cfg, 'small_error'):.4f}")

budget = LinkBudget.from_db(10.0, 10, 100)
print(f"MF SINR at M=100: {sinr_mf(budget):.3f} clean, {sinr_mf_impaired(budget, cfg):.3f} impaired")

# %%
# Relative sum-rate loss from a phase error sweep. ZF pays more because its
# nulls depend on the channel phases being right.
M, K = 100, 10
base = {p: estimate_rates(ScenarioConfig(M=M, K=K, snr_t_db=10, precoder=p, realizations=2000, seed=2))
        for p in ("mf", "zf_exact")}
for phi in (5.0, 10.0, 20.0, 30.0):
    losses = []
    for p in ("mf", "zf_exact"):
        rep = estimate_rates(ScenarioConfig(M=M, K=K, snr_t_db=10, precoder=p, realizations=2000, seed=2,
                                            impairments=ImpairmentConfig(0.0, phi)))
        losses.append(1 - rep.sum_rate / base[p].sum_rate)
    print(f"phi {phi:4.1f} deg: MF loss {100 * losses[0]:5.2f}%  ZF loss {100 * losses[1]:5.2f}%")
