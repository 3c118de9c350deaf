"""
Matched-filter and zero-forcing precoders.

All functions take a channel (or channel estimate) of shape ``(..., K, M)``
and return precoding matrices of shape ``(..., M, K)`` whose column ``k``
serves user ``k``. Power is split equally over users.
"""

import math

import numpy as np

from .errors import ArgumentError, DegenerateChannelError, PrecoderInfeasibleError, SingularMatrixError
from .numerics import right_pseudoinverse

__all__ = ["mf_precoder", "zf_precoder_exact", "zf_precoder_scaled"]


def _ctranspose(a):
    return np.conj(np.swapaxes(a, -1, -2))


def _check_rows(H):
    norms = np.linalg.norm(H, axis=-1)
    zero = norms == 0
    if np.any(zero):
        raise DegenerateChannelError(np.argwhere(zero)[0][-1])
    return norms


def mf_precoder(H, norm="exact", sigma_a_lin=0.0):
    """Matched filter ``w_k = h_k^H / c_k``.

    Parameters
    ----------
    H : array_like, shape (..., K, M)
    norm : {'exact', 'expected'}
        ``'exact'`` uses ``c_k = ||h_k||`` so every column has unit norm.
        ``'expected'`` uses the constant ``c = sqrt(M (1 + sigma_a_lin**2))``,
        the root of the expected squared norm of an impaired IID row.
    sigma_a_lin : float
        Linear amplitude-error std, only used by ``'expected'``.
    """
    H = np.asarray(H, dtype=complex)
    norms = _check_rows(H)
    if norm == "exact":
        scale = norms
    elif norm == "expected":
        scale = math.sqrt(H.shape[-1] * (1.0 + sigma_a_lin**2))
        scale = np.broadcast_to(scale, norms.shape)
    else:
        raise ArgumentError(f"unknown MF norm mode {norm!r}")
    return _ctranspose(H) / scale[..., None, :]


def _pinv(H):
    K, M = H.shape[-2:]
    if M <= K:
        raise PrecoderInfeasibleError(f"zero forcing needs M > K, got K={K}, M={M}")
    _check_rows(H)
    try:
        return right_pseudoinverse(H)
    except SingularMatrixError as exc:
        raise PrecoderInfeasibleError(f"channel Gram matrix is singular: {exc}") from exc


def zf_precoder_exact(H):
    """Zero forcing with each pseudoinverse column scaled to unit norm."""
    H = np.asarray(H, dtype=complex)
    P = _pinv(H)
    return P / np.linalg.norm(P, axis=-2, keepdims=True)


def zf_precoder_scaled(H):
    """Zero forcing ``sqrt(M - K) * pinv(H)``.

    The constant makes the average total power equal to ``K`` for an IID
    Rayleigh channel, and gives ``H W = sqrt(M - K) I``.
    """
    H = np.asarray(H, dtype=complex)
    P = _pinv(H)
    K, M = H.shape[-2:]
    return math.sqrt(M - K) * P
