"""
Tests for the dense matrix primitives.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from core.matrix_core import (
    DEFAULT_TOLERANCE,
    NotPositiveDefiniteError,
    ShapeError,
    Tolerance,
    as_column,
    as_matrix,
    cholesky,
    col_sq_norm,
    frob_norm,
    gram_cholesky,
    matmul,
    max_abs_diff,
    pivot_tolerance,
    solve_spd,
    transpose,
)

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


class TestTolerance:
    def test_defaults(self):
        assert DEFAULT_TOLERANCE.zero_sq == 1e-10
        assert DEFAULT_TOLERANCE.residual_rel == 1e-8
        assert DEFAULT_TOLERANCE.relative is False

    @pytest.mark.parametrize("kwargs", [{"zero_sq": 0.0}, {"zero_sq": -1.0}, {"residual_rel": 0.0}])
    def test_rejects_non_positive_thresholds(self, kwargs):
        with pytest.raises(ValueError):
            Tolerance(**kwargs)

    def test_absolute_threshold_is_strict(self):
        tol = Tolerance(zero_sq=1e-10)
        assert tol.is_zero(9.9e-11)
        assert not tol.is_zero(1e-10)
        # the reference is ignored in absolute mode
        assert not tol.is_zero(1e-6, reference_sq=1e12)

    def test_relative_threshold_scales_with_reference(self):
        tol = Tolerance(zero_sq=1e-10, relative=True)
        assert tol.is_zero(1e-6, reference_sq=1e6)
        assert not tol.is_zero(1e-6, reference_sq=1.0)
        # without a reference the absolute test applies
        assert tol.is_zero(1e-11)

    def test_hash_depends_on_every_field(self):
        hashes = {
            Tolerance().get_hash(),
            Tolerance(zero_sq=1e-12).get_hash(),
            Tolerance(residual_rel=1e-6).get_hash(),
            Tolerance(relative=True).get_hash(),
        }
        assert len(hashes) == 4
        assert Tolerance().get_hash() == Tolerance().get_hash()


class TestConstructors:
    def test_as_matrix_reads_vectors_as_columns(self):
        assert as_matrix([1, 2, 3]).shape == (3, 1)

    def test_as_matrix_copies(self):
        src = np.eye(2)
        out = as_matrix(src)
        out[0, 0] = 5.0
        assert src[0, 0] == 1.0

    def test_as_matrix_rejects_non_finite(self):
        with pytest.raises(ValueError, match="finite"):
            as_matrix([[1.0, np.nan]])

    def test_as_matrix_rejects_3d(self):
        with pytest.raises(ShapeError):
            as_matrix(np.zeros((2, 2, 2)))

    def test_as_column_checks_length(self):
        assert as_column([[1, 2]]).shape == (2, 1)
        with pytest.raises(ShapeError):
            as_column([1, 2], rows=3)


class TestMatmul:
    def test_identity(self):
        np.testing.assert_array_equal(matmul(np.eye(2), np.eye(2)), np.eye(2))

    def test_zero_column(self):
        np.testing.assert_array_equal(matmul(np.array([[1.0, 2.0], [3.0, 4.0]]), np.zeros((2, 1))), np.zeros((2, 1)))

    def test_hand_product(self):
        a = np.array([[1.0, 2.0], [3.0, 4.0]])
        b = np.array([[5.0], [6.0]])
        expected = [[sum(a[i, k] * b[k, 0] for k in range(2))] for i in range(2)]
        np.testing.assert_array_equal(matmul(a, b), [[17.0], [39.0]])
        np.testing.assert_array_equal(matmul(a, b), expected)

    def test_mismatch_names_both_shapes(self):
        with pytest.raises(ShapeError, match=r"\(2, 3\).*\(2, 3\)"):
            matmul(np.zeros((2, 3)), np.zeros((2, 3)))

    def test_associativity(self, rng):
        for _ in range(50):
            m, k, l, n = rng.integers(1, 12, size=4)
            a, b, c = rng.standard_normal((m, k)), rng.standard_normal((k, l)), rng.standard_normal((l, n))
            left = matmul(matmul(a, b), c)
            right = matmul(a, matmul(b, c))
            assert frob_norm(left - right) <= 1e-10 * max(1.0, frob_norm(left))


class TestTranspose:
    def test_examples(self):
        np.testing.assert_array_equal(transpose(np.eye(3)), np.eye(3))
        np.testing.assert_array_equal(transpose(np.ones((2, 3))), np.ones((3, 2)))
        np.testing.assert_array_equal(transpose(np.array([[1.0, 2.0], [3.0, 4.0]])), [[1.0, 3.0], [2.0, 4.0]])

    def test_returns_new_array(self):
        a = np.ones((2, 3))
        t = transpose(a)
        t[0, 0] = 7.0
        assert a[0, 0] == 1.0

    @given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 6)), elements=finite))
    def test_double_transpose_is_bit_identical(self, a):
        assert np.array_equal(transpose(transpose(a)), a)


class TestNorms:
    def test_examples(self):
        assert frob_norm(np.eye(2)) == pytest.approx(np.sqrt(2.0))
        assert col_sq_norm(np.array([[3.0], [4.0]]), 0) == 25.0
        assert frob_norm(np.zeros((2, 3))) == 0.0

    def test_col_sq_norm_out_of_range(self):
        with pytest.raises(IndexError):
            col_sq_norm(np.zeros((2, 2)), 2)

    def test_max_abs_diff(self):
        assert max_abs_diff(np.zeros((2, 2)), np.array([[0.0, -3.0], [1.0, 0.0]])) == 3.0
        with pytest.raises(ShapeError):
            max_abs_diff(np.zeros((2, 2)), np.zeros((2, 1)))


class TestCholesky:
    def test_examples(self):
        np.testing.assert_allclose(cholesky(np.array([[4.0]])), [[2.0]])
        np.testing.assert_allclose(cholesky(np.eye(3)), np.eye(3))
        lower = cholesky(np.array([[4.0, 2.0], [2.0, 5.0]]))
        np.testing.assert_allclose(lower, [[2.0, 0.0], [1.0, 2.0]])
        np.testing.assert_allclose(lower @ lower.T, [[4.0, 2.0], [2.0, 5.0]])

    def test_reconstruction_on_gram_matrices(self, rng):
        for _ in range(50):
            n = int(rng.integers(1, 10))
            c = rng.standard_normal((n + int(rng.integers(1, 10)), n))
            gram = c.T @ c
            lower = cholesky(gram)
            assert np.allclose(lower, np.tril(lower))
            assert frob_norm(lower @ lower.T - gram) <= 1e-10 * (1.0 + frob_norm(gram))

    def test_rank_deficient_gram_fails(self):
        c = np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])
        with pytest.raises(NotPositiveDefiniteError):
            cholesky(c.T @ c)

    def test_indefinite_fails(self):
        with pytest.raises(NotPositiveDefiniteError):
            cholesky(np.array([[1.0, 2.0], [2.0, 1.0]]))

    def test_failure_is_a_linalg_error(self):
        assert issubclass(NotPositiveDefiniteError, np.linalg.LinAlgError)

    def test_pivot_floor(self):
        assert pivot_tolerance(np.diag([1e6, 1.0])) == pytest.approx(1e-6)
        assert pivot_tolerance(np.diag([1e-3, 1e-3])) == pytest.approx(1e-12)
        with pytest.raises(NotPositiveDefiniteError):
            cholesky(np.diag([1e6, 1e-7]))

    def test_rejects_non_square_and_asymmetric(self):
        with pytest.raises(ShapeError):
            cholesky(np.zeros((2, 3)))
        with pytest.raises(ValueError, match="symmetric"):
            cholesky(np.array([[4.0, 2.0], [0.0, 5.0]]))

    def test_rounding_asymmetry_is_symmetrized(self):
        spd = np.array([[4.0, 2.0], [2.0 + 1e-15, 5.0]])
        np.testing.assert_allclose(cholesky(spd), [[2.0, 0.0], [1.0, 2.0]])


class TestGramCholesky:
    def test_factors_full_rank_columns(self):
        c = np.array([[1.0, 1.0], [0.0, 2.0], [0.0, 0.0]])
        lower = gram_cholesky(c)
        np.testing.assert_allclose(lower @ lower.T, c.T @ c)

    def test_small_pivot_follows_the_zero_test(self):
        # pivot 9e-12 clears the plain pivot floor but not zero_sq = 1e-10
        c = np.array([[1.0, 0.0], [0.0, 3e-6], [0.0, 0.0]])
        cholesky(c.T @ c)
        with pytest.raises(NotPositiveDefiniteError, match="pivot 1"):
            gram_cholesky(c)

    def test_relative_tolerance_uses_reference_columns(self):
        c = np.array([[1.0, 0.0], [0.0, 3e-6], [0.0, 0.0]])
        relative = Tolerance(relative=True)
        assert gram_cholesky(c, relative).shape == (2, 2)
        with pytest.raises(NotPositiveDefiniteError):
            gram_cholesky(c, relative, reference=np.array([[1.0, 1.0], [0.0, 0.0], [0.0, 0.0]]))


class TestSolveSpd:
    def test_examples(self):
        b = np.array([[3.0], [-1.0]])
        np.testing.assert_allclose(solve_spd(np.eye(2), b), b)
        np.testing.assert_allclose(solve_spd(np.diag([2.0, 4.0]), np.array([[2.0], [8.0]])), [[1.0], [2.0]])
        spd = np.array([[4.0, 2.0], [2.0, 5.0]])
        rhs = np.array([[8.0], [9.0]])
        assert frob_norm(spd @ solve_spd(spd, rhs) - rhs) <= 1e-12

    def test_recovers_solution_up_to_condition_1e6(self, rng):
        for _ in range(30):
            n = int(rng.integers(1, 10))
            q, _ = np.linalg.qr(rng.standard_normal((n, n)))
            spd = q @ np.diag(np.logspace(0, 6, n)) @ q.T
            spd = 0.5 * (spd + spd.T)
            x = rng.standard_normal((n, 2))
            recovered = solve_spd(spd, spd @ x)
            assert frob_norm(recovered - x) <= 1e-8 * max(1.0, frob_norm(x))

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            solve_spd(np.eye(2), np.ones((3, 1)))

    @settings(max_examples=50, deadline=None)
    @given(arrays(np.float64, st.tuples(st.integers(2, 8), st.integers(1, 4)), elements=finite))
    def test_regularized_gram_is_solvable(self, c):
        spd = np.eye(c.shape[1]) + c.T @ c
        x = solve_spd(spd, np.ones((c.shape[1], 1)))
        assert frob_norm(spd @ x - 1.0) <= 1e-8 * (1.0 + frob_norm(spd) * frob_norm(x))
