"""
Multiplicative per-antenna amplitude and phase errors.

Each base-station branch ``m`` multiplies every user's coefficient on that
antenna by ``eps_m = (1 + a_m) exp(j phi_m)`` with ``a_m ~ N(0, sa^2)``
and ``phi_m ~ N(0, sphi^2)``. The perturbed channel only feeds the
precoder; SINR is always evaluated on the true channel.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ArgumentError

__all__ = ["ImpairmentConfig", "sigma_a_linear", "sample_branch_errors", "apply_impairments"]


def sigma_a_linear(sigma_a_db):
    """Linear amplitude-error std for a dB figure: ``10**(dB/20) - 1``."""
    if sigma_a_db < 0:
        raise ArgumentError(f"amplitude error must be non-negative, got {sigma_a_db} dB")
    return 10.0 ** (sigma_a_db / 20.0) - 1.0


@dataclass(frozen=True)
class ImpairmentConfig:
    """Amplitude error (dB) and phase error (degrees) standard deviations.

    ``amplitude_lin`` bypasses the dB conversion and supplies the linear
    std of ``a_m`` directly.
    """

    sigma_a_db: float = 0.0
    sigma_phi_deg: float = 0.0
    amplitude_lin: Optional[float] = None

    def __post_init__(self):
        if self.sigma_a_db < 0:
            raise ArgumentError(f"sigma_a_db must be non-negative, got {self.sigma_a_db}")
        if self.sigma_phi_deg < 0:
            raise ArgumentError(f"sigma_phi_deg must be non-negative, got {self.sigma_phi_deg}")
        if self.amplitude_lin is not None and self.amplitude_lin < 0:
            raise ArgumentError(f"amplitude_lin must be non-negative, got {self.amplitude_lin}")

    @property
    def sigma_a_lin(self):
        if self.amplitude_lin is not None:
            return float(self.amplitude_lin)
        return sigma_a_linear(self.sigma_a_db)

    @property
    def sigma_phi_rad(self):
        return math.radians(self.sigma_phi_deg)

    @property
    def total_variance(self):
        return self.sigma_a_lin**2 + self.sigma_phi_rad**2

    @property
    def is_zero(self):
        return self.sigma_a_lin == 0.0 and self.sigma_phi_rad == 0.0


def sample_branch_errors(M, config, stream):
    """Draw the ``M`` complex branch multipliers.

    A zero config returns exact ones and consumes nothing from `stream`.
    """
    M = int(M)
    if M < 1:
        raise ArgumentError(f"M must be >= 1, got {M}")
    if config.is_zero:
        return np.ones(M, dtype=complex)
    draws = stream.standard_normal((2, M))
    a = config.sigma_a_lin * draws[0]
    phi = config.sigma_phi_rad * draws[1]
    return (1.0 + a) * np.exp(1j * phi)


def apply_impairments(H, eps):
    """Scale column ``m`` of `H` by ``eps[m]``, i.e. ``H @ diag(eps)``."""
    H = np.asarray(H)
    eps = np.asarray(eps)
    if eps.shape[-1] != H.shape[-1]:
        raise ArgumentError(f"{eps.shape[-1]} branch errors for {H.shape[-1]} antennas")
    return H * eps[..., None, :]
