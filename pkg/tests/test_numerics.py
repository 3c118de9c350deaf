import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mimo_lab.errors import ArgumentError, SingularMatrixError
from mimo_lab.numerics import (
    cholesky,
    derive_stream,
    gram,
    hermitian_solve,
    right_pseudoinverse,
    sample_complex_gaussian_matrix,
)


def brute_gram(H):
    K, M = H.shape
    out = np.zeros((K, K), dtype=complex)
    for i in range(K):
        for j in range(K):
            for m in range(M):
                out[i, j] += H[i, m] * np.conj(H[j, m])
    return out


class TestStreams:
    def test_same_key_same_state(self):
        a, b = derive_stream(42, 0), derive_stream(42, 0)
        sa, sb = a.bit_generator.state["state"], b.bit_generator.state["state"]
        assert all(np.array_equal(sa[k], sb[k]) for k in sa)
        assert np.array_equal(a.standard_normal(100), b.standard_normal(100))

    def test_distinct_indices_differ(self):
        a = derive_stream(42, 0).standard_normal(100)
        b = derive_stream(42, 1).standard_normal(100)
        assert np.all(a != b)

    def test_mean_of_standard_normals(self):
        x = derive_stream(42, 7).standard_normal(1_000_000)
        assert abs(x.mean()) < 0.004

    def test_cross_correlation_small(self):
        a = derive_stream(5, 0).standard_normal(100_000)
        b = derive_stream(5, 1).standard_normal(100_000)
        assert abs(np.corrcoef(a, b)[0, 1]) < 0.01

    def test_negative_index_rejected(self):
        with pytest.raises(ArgumentError):
            derive_stream(1, -1)

    def test_large_seed_wraps(self):
        a = derive_stream(-1, 3).standard_normal(4)
        b = derive_stream(2**64 - 1, 3).standard_normal(4)
        assert np.array_equal(a, b)


class TestComplexGaussian:
    def test_bitwise_reproducible(self):
        a = sample_complex_gaussian_matrix(2, 3, 1.0, derive_stream(9, 0))
        b = sample_complex_gaussian_matrix(2, 3, 1.0, derive_stream(9, 0))
        assert a.shape == (2, 3)
        assert np.array_equal(a, b)

    def test_second_and_fourth_moment(self):
        z = sample_complex_gaussian_matrix(1, 1_000_000, 1.0, derive_stream(11, 0))
        p = np.abs(z) ** 2
        assert abs(p.mean() - 1.0) < 0.005
        assert abs((p**2).mean() - 2.0) < 0.02

    def test_circular_symmetry(self):
        z = sample_complex_gaussian_matrix(1, 200_000, 4.0, derive_stream(12, 0))
        assert abs(z.real.var() - 2.0) < 0.03
        assert abs(z.imag.var() - 2.0) < 0.03
        assert abs(np.mean(z**2)) < 0.05  # pseudo-covariance vanishes

    @pytest.mark.parametrize("rows,cols,var", [(0, 2, 1.0), (2, 0, 1.0), (1, 1, 0.0), (1, 1, -1.0), (1, 1, np.inf)])
    def test_invalid_arguments(self, rows, cols, var):
        with pytest.raises(ArgumentError):
            sample_complex_gaussian_matrix(rows, cols, var, derive_stream(0, 0))


class TestGram:
    def test_identity(self):
        assert np.array_equal(gram(np.eye(2)), np.eye(2))

    def test_row(self):
        assert np.allclose(gram(np.array([[1, 1j]])), [[2.0]])

    def test_against_double_loop(self):
        H = sample_complex_gaussian_matrix(3, 5, 1.0, derive_stream(1, 0))
        assert np.allclose(gram(H), brute_gram(H), atol=1e-13)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 6), st.integers(1, 12), st.integers(0, 2**32))
    def test_exactly_hermitian(self, K, M, seed):
        A = gram(sample_complex_gaussian_matrix(K, M, 1.0, derive_stream(seed, 0)))
        assert np.max(np.abs(A - A.conj().T)) == 0.0
        assert np.all(np.linalg.eigvalsh(A) > -1e-10)

    def test_stacked(self):
        H = sample_complex_gaussian_matrix(12, 7, 1.0, derive_stream(3, 0)).reshape(4, 3, 7)
        for i in range(4):
            assert np.allclose(gram(H)[i], brute_gram(H[i]))


class TestHermitianSolve:
    def test_identity(self):
        B = sample_complex_gaussian_matrix(3, 2, 1.0, derive_stream(2, 0))
        assert np.allclose(hermitian_solve(np.eye(3), B), B, atol=0)

    def test_diagonal(self):
        B = np.array([[1.0, 2.0], [4.0, 8.0]], dtype=complex)
        X = hermitian_solve(np.diag([2.0, 4.0]), B)
        assert np.allclose(X, [[0.5, 1.0], [1.0, 2.0]])

    def test_residual_random(self):
        s = derive_stream(4, 0)
        G = sample_complex_gaussian_matrix(4, 4, 1.0, s)
        A = G @ G.conj().T + np.eye(4)
        B = sample_complex_gaussian_matrix(4, 3, 1.0, s)
        X = hermitian_solve(A, B)
        assert np.linalg.norm(A @ X - B) / np.linalg.norm(B) < 1e-10

    def test_vector_rhs(self):
        A = np.array([[4.0, 1j], [-1j, 3.0]])
        b = np.array([1.0, 2.0 + 1j])
        assert np.allclose(A @ hermitian_solve(A, b), b)

    def test_factor_matches_numpy(self):
        s = derive_stream(6, 0)
        G = sample_complex_gaussian_matrix(5, 8, 1.0, s)
        A = gram(G)
        assert np.allclose(cholesky(A), np.linalg.cholesky(A), atol=1e-12)

    def test_not_positive_definite_reports_pivot(self):
        A = np.diag([1.0, 2.0, -1.0, 3.0]).astype(complex)
        with pytest.raises(SingularMatrixError) as info:
            hermitian_solve(A, np.eye(4))
        assert info.value.pivot == 2

    def test_stacked_failure_reports_matrix(self):
        A = np.stack([np.eye(2), np.diag([1.0, 0.0])]).astype(complex)
        with pytest.raises(SingularMatrixError) as info:
            cholesky(A)
        assert info.value.pivot == 1
        assert info.value.batch_index == (1,)

    def test_ill_conditioned_rejected(self):
        with pytest.raises(SingularMatrixError):
            cholesky(np.diag([1.0, 1e-10]))

    def test_shape_mismatch(self):
        with pytest.raises(ArgumentError):
            hermitian_solve(np.eye(2), np.ones((3, 1)))


class TestPseudoinverse:
    def test_orthonormal_rows(self):
        Q, _ = np.linalg.qr(sample_complex_gaussian_matrix(6, 6, 1.0, derive_stream(8, 0)))
        H = Q[:2]
        assert np.allclose(right_pseudoinverse(H), H.conj().T, atol=1e-12)

    def test_scalar_row(self):
        assert np.allclose(right_pseudoinverse(np.array([[2.0, 0.0]])), [[0.5], [0.0]])

    def test_defining_property(self):
        H = sample_complex_gaussian_matrix(3, 8, 1.0, derive_stream(10, 0))
        assert np.linalg.norm(H @ right_pseudoinverse(H) - np.eye(3)) < 1e-10

    def test_square_rejected(self):
        with pytest.raises(ArgumentError):
            right_pseudoinverse(np.eye(3))

    def test_rank_deficient(self):
        h = sample_complex_gaussian_matrix(1, 6, 1.0, derive_stream(13, 0))
        with pytest.raises(SingularMatrixError):
            right_pseudoinverse(np.vstack([h, 2 * h]))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 8), st.integers(1, 40), st.integers(0, 2**32))
    def test_property_random(self, K, extra, seed):
        M = K + extra
        H = sample_complex_gaussian_matrix(K, M, 1.0, derive_stream(seed, 0))
        A = gram(H)
        if np.linalg.cond(A) > 1e8:
            return
        assert np.linalg.norm(H @ right_pseudoinverse(H) - np.eye(K)) <= 1e-8 * np.sqrt(K)
