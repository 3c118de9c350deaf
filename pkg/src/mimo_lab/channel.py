"""
Channel generators: IID Rayleigh and single-path line of sight from a ULA.

Channel matrices have shape ``(K, M)``: row ``k`` is the vector from the
``M`` base-station elements to user ``k``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError
from .numerics import sample_complex_gaussian_matrix

__all__ = [
    "LosConfig",
    "iid_rayleigh",
    "element_pattern_amplitude",
    "sample_aod",
    "steering_vector",
    "los_channel",
]


@dataclass(frozen=True)
class LosConfig:
    """Geometry and element pattern of the line-of-sight model.

    Parameters
    ----------
    spacing : float
        Element separation in wavelengths.
    aod_range : tuple of float
        Interval (degrees) the user angles of departure are drawn from.
    theta_3db : float
        Element half-power beamwidth in degrees.
    am_db : float
        Front-to-back attenuation floor of the element pattern in dB.
    normalize : bool
        Rescale each row to squared norm ``M``.
    """

    spacing: float = 0.6
    aod_range: tuple = (-60.0, 60.0)
    theta_3db: float = 90.0
    am_db: float = 20.0
    normalize: bool = True

    def __post_init__(self):
        lo, hi = self.aod_range
        object.__setattr__(self, "aod_range", (float(lo), float(hi)))
        if not self.spacing > 0:
            raise ArgumentError(f"spacing must be positive, got {self.spacing}")
        if not self.theta_3db > 0:
            raise ArgumentError(f"theta_3db must be positive, got {self.theta_3db}")
        if not self.am_db > 0:
            raise ArgumentError(f"am_db must be positive, got {self.am_db}")
        if not (-90.0 < lo <= hi < 90.0):
            raise ArgumentError(f"aod_range must be an interval inside (-90, 90), got {self.aod_range}")


def iid_rayleigh(M, K, stream):
    """``K x M`` channel with IID CN(0, 1) entries."""
    return sample_complex_gaussian_matrix(K, M, 1.0, stream)


def element_pattern_amplitude(azimuth, theta_3db=90.0, am_db=20.0):
    """Amplitude gain of one array element at `azimuth` degrees off boresight.

    Uses the parabolic pattern ``min(12 (az / theta_3db)**2, am_db)`` dB.
    """
    if not theta_3db > 0:
        raise ArgumentError(f"theta_3db must be positive, got {theta_3db}")
    att = np.minimum(12.0 * (np.asarray(azimuth, dtype=float) / theta_3db) ** 2, am_db)
    return 10.0 ** (-att / 20.0)


def sample_aod(config, stream, size=None):
    """Draw angle(s) of departure in degrees, uniform over ``config.aod_range``."""
    lo, hi = config.aod_range
    if lo == hi:
        return np.full(size, lo) if size is not None else lo
    return stream.uniform(lo, hi, size)


def steering_vector(M, aod, spacing):
    """Unit-modulus ULA response ``exp(j 2 pi spacing m sin(aod))``, m = 0..M-1.

    `aod` may be an array of angles; the element axis is appended last.
    """
    m = np.arange(int(M))
    s = np.sin(np.deg2rad(np.asarray(aod, dtype=float)))[..., None]
    return np.exp(2j * np.pi * spacing * m * s)


def los_channel(M, K, config=None, stream=None, aods=None):
    """Single planar-wavefront channel for `K` users.

    Parameters
    ----------
    M, K : int
        Antennas and users.
    config : LosConfig, optional
    stream : numpy.random.Generator, optional
        Used to draw the AoDs when `aods` is not given.
    aods : array_like of float, optional
        Force the angles of departure (degrees), one per user.

    Returns
    -------
    ndarray, shape (K, M)
    """
    config = LosConfig() if config is None else config
    M, K = int(M), int(K)
    if M < 1 or K < 1:
        raise ArgumentError(f"invalid dimensions M={M}, K={K}")
    if aods is None:
        if stream is None:
            raise ArgumentError("either a stream or forced aods is required")
        aods = sample_aod(config, stream, K)
    aods = np.broadcast_to(np.asarray(aods, dtype=float), (K,))
    gain = element_pattern_amplitude(aods, config.theta_3db, config.am_db)
    H = gain[:, None] * steering_vector(M, aods, config.spacing)
    if config.normalize:
        H *= (np.sqrt(M) / np.linalg.norm(H, axis=1))[:, None]
    return H
