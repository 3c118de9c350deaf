"""
How many antennas for a 3 dB gap
================================

The array size at which each precoder's SINR reaches half the
interference-free SNR.
"""

from mimo_lab import ImpairmentConfig, LinkBudget
from mimo_lab.analytic import antennas_for_3db, required_antennas, sinr_mf, sinr_zf

K, SNR = 10, 10.0

for precoder in ("mf", "zf"):
    print(f"{precoder}: M = {antennas_for_3db(precoder, K, SNR)}")

# MF needs an array that grows with the SNR; ZF does not.
for snr_db in (0, 10, 20):
    snr = 10 ** (snr_db / 10)
    print(f"SNR {snr_db:2d} dB: MF {antennas_for_3db('mf', K, snr):5d}  ZF {antennas_for_3db('zf', K, snr)}")

# %%
# Hardware errors push the MF requirement up.
cfg = ImpairmentConfig(1.0, 20.0)
print(f"impaired MF: M = {required_antennas('mf', K, SNR, cfg):.2f} -> {antennas_for_3db('mf', K, SNR, cfg)}")

# %%
# Plugging the unrounded counts back in lands exactly on SNR/2.
print(sinr_mf(LinkBudget(SNR, K, required_antennas("mf", K, SNR))),
      sinr_zf(LinkBudget(SNR, K, required_antennas("zf", K, SNR))))
