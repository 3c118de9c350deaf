"""
Dense complex linear algebra and reproducible random streams.

Matrices are plain complex ``numpy`` arrays. Every routine that takes a
matrix also accepts a stack of matrices with shape ``(..., rows, cols)``
so the Monte Carlo engine can process a block of realizations at once.

Random streams are counter-based: a stream is a ``numpy`` Generator on a
Philox bit generator keyed by ``(seed, index)``. The draws for
realization ``r`` therefore do not depend on which worker evaluates it or
in which order.
"""

import numpy as np

from .errors import ArgumentError, SingularMatrixError

__all__ = [
    "MAX_CONDITION",
    "RngStream",
    "derive_stream",
    "sample_complex_gaussian_matrix",
    "gram",
    "cholesky",
    "hermitian_solve",
    "right_pseudoinverse",
]

#: Matrices whose estimated condition number exceeds this are treated as
#: numerically singular.
MAX_CONDITION = 1e8

_MASK64 = (1 << 64) - 1

RngStream = np.random.Generator


def derive_stream(seed, index):
    """Return the random stream for work unit ``index`` of experiment ``seed``.

    Parameters
    ----------
    seed : int
        Root seed, reduced modulo 2**64.
    index : int
        Non-negative stream index (typically the realization number).

    Returns
    -------
    numpy.random.Generator
        A fresh generator; equal ``(seed, index)`` pairs give identical
        sequences.
    """
    index = int(index)
    if index < 0:
        raise ArgumentError(f"stream index must be non-negative, got {index}")
    key = np.array([int(seed) & _MASK64, index & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_complex_gaussian_matrix(rows, cols, variance, stream):
    """Draw a ``rows x cols`` matrix of IID CN(0, variance) entries.

    Real and imaginary parts are independent normals with variance
    ``variance / 2`` each.
    """
    rows, cols = int(rows), int(cols)
    if rows < 1 or cols < 1:
        raise ArgumentError(f"invalid dimensions {rows}x{cols}")
    if not np.isfinite(variance) or variance <= 0:
        raise ArgumentError(f"variance must be positive and finite, got {variance}")
    parts = stream.standard_normal((2, rows, cols))
    parts *= np.sqrt(variance / 2.0)
    return parts[0] + 1j * parts[1]


def _ctranspose(a):
    return np.conj(np.swapaxes(a, -1, -2))


def gram(H):
    """Return ``H @ H^H``, exactly Hermitian."""
    H = np.asarray(H)
    A = H @ _ctranspose(H)
    # (A + A^H)/2 is bitwise Hermitian with a real diagonal.
    return 0.5 * (A + _ctranspose(A))


def cholesky(A, max_condition=MAX_CONDITION):
    """Lower Cholesky factor of a (stack of) Hermitian positive definite matrices.

    Only the lower triangle of ``A`` is read.

    Raises
    ------
    SingularMatrixError
        If a pivot is non-positive, or if the condition estimate
        ``(max diag(L) / min diag(L))**2`` exceeds `max_condition`.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim < 2 or A.shape[-1] != A.shape[-2]:
        raise ArgumentError(f"expected square matrices, got shape {A.shape}")
    n = A.shape[-1]
    L = np.zeros_like(A)
    diag = np.empty(A.shape[:-1])
    for j in range(n):
        row = L[..., j, :j]
        d = A[..., j, j].real - np.sum(row.real**2 + row.imag**2, axis=-1)
        bad = ~(d > 0)
        if np.any(bad):
            raise SingularMatrixError(j, _first_index(bad))
        ljj = np.sqrt(d)
        diag[..., j] = ljj
        L[..., j, j] = ljj
        if j + 1 < n:
            col = A[..., j + 1:, j] - (L[..., j + 1:, :j] @ np.conj(row)[..., None])[..., 0]
            L[..., j + 1:, j] = col / ljj[..., None]
    ratio = diag.max(axis=-1) / diag.min(axis=-1)
    bad = ratio**2 > max_condition
    if np.any(bad):
        pos = _first_index(bad)
        pivot = int(np.argmin(diag[pos] if pos is not None else diag))
        raise SingularMatrixError(pivot, pos, reason="condition estimate above threshold")
    return L


def _first_index(mask):
    if mask.ndim == 0:
        return None
    return tuple(int(i) for i in np.argwhere(mask)[0])


def hermitian_solve(A, B, max_condition=MAX_CONDITION):
    """Solve ``A X = B`` for Hermitian positive definite ``A`` via Cholesky.

    Parameters
    ----------
    A : array_like, shape (..., K, K)
    B : array_like, shape (..., K, N) or (..., K)

    Returns
    -------
    X : ndarray with the shape of ``B``
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    vector = B.ndim == A.ndim - 1
    if vector:
        B = B[..., None]
    if B.shape[-2] != A.shape[-1]:
        raise ArgumentError(f"B has {B.shape[-2]} rows, A is {A.shape[-1]}x{A.shape[-1]}")
    L = cholesky(A, max_condition)
    n = A.shape[-1]
    batch = np.broadcast_shapes(L.shape[:-2], B.shape[:-2])
    Y = np.empty(batch + B.shape[-2:], dtype=complex)
    for i in range(n):
        acc = B[..., i, :] - (L[..., i, None, :i] @ Y[..., :i, :])[..., 0, :]
        Y[..., i, :] = acc / L[..., i, i, None]
    X = np.empty_like(Y)
    for i in reversed(range(n)):
        upper = np.conj(L[..., i + 1:, i])[..., None, :]
        acc = Y[..., i, :] - (upper @ X[..., i + 1:, :])[..., 0, :]
        X[..., i, :] = acc / L[..., i, i, None]
    return X[..., 0] if vector else X


def right_pseudoinverse(H, max_condition=MAX_CONDITION):
    """Right pseudoinverse ``H^H (H H^H)^{-1}`` of a wide ``K x M`` matrix.

    Raises
    ------
    ArgumentError
        If ``M <= K``.
    SingularMatrixError
        If ``H H^H`` is numerically singular.
    """
    H = np.asarray(H, dtype=complex)
    K, M = H.shape[-2:]
    if M <= K:
        raise ArgumentError(f"right pseudoinverse needs M > K, got K={K}, M={M}")
    eye = np.eye(K, dtype=complex)
    inv = hermitian_solve(gram(H), np.broadcast_to(eye, H.shape[:-2] + (K, K)), max_condition)
    return _ctranspose(H) @ inv
