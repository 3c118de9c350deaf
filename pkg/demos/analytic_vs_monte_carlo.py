"""
Closed forms against simulation
===============================

Sum rate of a K=10 user downlink at a 10 dB target SNR, as the array
grows. The Monte Carlo column averages log2(1 + SINR) over random IID
Rayleigh channels; the analytic column plugs the large-array SINR
approximation into the same rate formula.
"""

from mimo_lab import ScenarioConfig, estimate_rates

K, SNR_DB = 10, 10.0

print(f"{'M':>5} {'precoder':>9} {'mc':>8} {'+-':>6} {'analytic':>9}")
for M in (20, 50, 100, 200, 500):
    for precoder in ("mf", "zf_exact"):
        rep = estimate_rates(ScenarioConfig(M=M, K=K, snr_t_db=SNR_DB, precoder=precoder,
                                            realizations=2000, seed=1))
        print(f"{M:5d} {precoder:>9} {rep.sum_rate:8.3f} {rep.sum_rate_stderr:6.3f} {rep.analytic_sum_rate:9.3f}")

# The gap closes as M grows: log2(1 + E[SINR]) overestimates E[log2(1 + SINR)]
# less once the SINR stops fluctuating. At M=20 ZF sits a few percent off.
