"""
Closed-form SINR and rate approximations for the IID Rayleigh downlink.

Everything here works in linear units; use `LinkBudget.from_db` to enter a
target SNR in dB. Transmit power follows ``P = N0 * SNR_t / M`` so that the
interference-free SNR stays at ``SNR_t`` as the array grows.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, InfeasibleError

__all__ = [
    "LinkBudget",
    "tx_power",
    "sinr_mf",
    "sinr_zf",
    "error_factor",
    "sinr_mf_impaired",
    "rate_from_sinr",
    "sum_rate_analytic",
    "required_antennas",
    "antennas_for_3db",
]


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def linear_to_db(x):
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class LinkBudget:
    """Operating point: target SNR (linear), users, antennas and noise power.

    `M` may be non-integer so rule-of-thumb values can be plugged back in.
    """

    snr_t: float
    K: int
    M: float
    n0: float = 1.0

    def __post_init__(self):
        if not self.snr_t > 0:
            raise ArgumentError(f"snr_t must be positive, got {self.snr_t}")
        if self.K < 1:
            raise ArgumentError(f"K must be >= 1, got {self.K}")
        if not self.M >= 1:
            raise ArgumentError(f"M must be >= 1, got {self.M}")
        if not self.n0 > 0:
            raise ArgumentError(f"n0 must be positive, got {self.n0}")

    @classmethod
    def from_db(cls, snr_t_db, K, M, n0=1.0):
        return cls(db_to_linear(snr_t_db), K, M, n0)

    @property
    def snr_t_db(self):
        return linear_to_db(self.snr_t)


def tx_power(budget):
    """Transmit power ``N0 SNR_t / M``."""
    return budget.n0 * budget.snr_t / budget.M


def sinr_mf(budget):
    """Matched-filter SINR ``SNR_t / (1 + SNR_t (K - 1) / M)``."""
    s = budget.snr_t
    return s / (1.0 + s * (budget.K - 1) / budget.M)


def sinr_zf(budget):
    """Zero-forcing SINR ``SNR_t (1 - K / M)``; requires ``M > K``."""
    if budget.M <= budget.K:
        raise InfeasibleError(f"zero forcing needs M > K, got K={budget.K}, M={budget.M}")
    return budget.snr_t * (1.0 - budget.K / budget.M)


def error_factor(config, mode="exact"):
    """SINR reduction caused by branch errors under MF precoding.

    ``'exact'`` gives ``exp(-sphi^2) / (1 + sa^2)``; ``'small_error'`` its
    first-order form ``1 / (1 + sa^2 + sphi^2)``.
    """
    sa2 = config.sigma_a_lin**2
    sp2 = config.sigma_phi_rad**2
    if mode == "exact":
        return math.exp(-sp2) / (1.0 + sa2)
    if mode == "small_error":
        return 1.0 / (1.0 + sa2 + sp2)
    raise ArgumentError(f"unknown error factor mode {mode!r}")


def sinr_mf_impaired(budget, config):
    return sinr_mf(budget) * error_factor(config, "exact")


def rate_from_sinr(sinr):
    """Per-user rate ``log2(1 + sinr)`` in bit/s/Hz."""
    sinr = np.asarray(sinr, dtype=float)
    if np.any(sinr < 0):
        raise ArgumentError("SINR must be non-negative")
    out = np.log2(1.0 + sinr)
    return float(out) if out.ndim == 0 else out


def sum_rate_analytic(K, sinr):
    """Sum rate when all `K` users share the same SINR."""
    return K * rate_from_sinr(sinr)


def required_antennas(precoder, K, snr_t, config=None):
    """Unrounded antenna count that puts the SINR 3 dB below ``SNR_t``.

    Parameters
    ----------
    precoder : {'mf', 'zf'}
    K : int
    snr_t : float
        Linear target SNR; ignored for ZF.
    config : ImpairmentConfig, optional
        Branch errors; only honoured for MF.
    """
    precoder = precoder.lower()
    if precoder.startswith("zf"):
        return 2.0 * K
    if precoder != "mf":
        raise ArgumentError(f"unknown precoder {precoder!r}")
    base = (K - 1) * snr_t
    if config is None or config.is_zero:
        return base
    s2 = config.total_variance
    if s2 >= 1.0:
        raise InfeasibleError(f"total error variance {s2:.4g} >= 1: 3 dB point unreachable")
    return (1.0 + s2) / (1.0 - s2) * base


def antennas_for_3db(precoder, K, snr_t, config=None):
    """Rule-of-thumb antenna count, rounded up to an integer."""
    # round first so values like 90.00000000000001 do not step up
    return int(math.ceil(round(required_antennas(precoder, K, snr_t, config), 9)))
