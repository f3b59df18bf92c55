import numpy as np
import numpy.testing as npt
import pytest

from layerwise.errors import DimensionMismatch, SingularMatrix
from layerwise.linalg import as_matrix, gram, matmul, pseudoinverse, solve_spd_right


def test_as_matrix_coerces_nested_lists():
    a = as_matrix([[1, 2], [3, 4]])
    assert a.dtype == np.float64
    npt.assert_array_equal(a, [[1.0, 2.0], [3.0, 4.0]])


def test_as_matrix_rejects_wrong_ndim():
    with pytest.raises(DimensionMismatch):
        as_matrix([1.0, 2.0])
    with pytest.raises(DimensionMismatch):
        as_matrix(np.zeros((2, 2, 2)))


def test_as_matrix_rejects_non_finite():
    with pytest.raises(ValueError):
        as_matrix([[1.0, np.nan]])
    with pytest.raises(ValueError):
        as_matrix([[np.inf, 0.0]])


def test_matmul_matches_numpy_and_checks_dims():
    rng = np.random.Generator(np.random.PCG64(0))
    a = rng.normal(size=(3, 5))
    b = rng.normal(size=(5, 2))
    npt.assert_array_equal(matmul(a, b), a @ b)
    with pytest.raises(DimensionMismatch):
        matmul(a, a)


def test_matmul_zero_column_operand():
    a = np.zeros((3, 4))
    b = np.zeros((4, 0))
    assert matmul(a, b).shape == (3, 0)


def test_gram_is_bitwise_symmetric_and_correct():
    rng = np.random.Generator(np.random.PCG64(1))
    for _ in range(20):
        z = rng.normal(size=(rng.integers(1, 8), rng.integers(1, 30)))
        g = gram(z)
        assert np.array_equal(g, g.T)
        npt.assert_allclose(g, z @ z.T, rtol=1e-13, atol=1e-13)
        # Gram matrices are positive semidefinite
        assert np.linalg.eigvalsh(g).min() > -1e-10 * max(1.0, g.max())


def test_gram_rejects_empty():
    with pytest.raises(DimensionMismatch):
        gram(np.zeros((0, 5)))


def test_solve_spd_right_recovers_planted_solution():
    rng = np.random.Generator(np.random.PCG64(2))
    for _ in range(25):
        n = rng.integers(1, 10)
        m = rng.integers(1, 5)
        root = rng.normal(size=(n, n + 3))
        spd = gram(root) + np.eye(n)
        truth = rng.normal(size=(m, n))
        got = solve_spd_right(truth @ spd, spd)
        npt.assert_allclose(got, truth, rtol=1e-9, atol=1e-9)


def test_solve_spd_right_matches_numpy_solve():
    rng = np.random.Generator(np.random.PCG64(3))
    root = rng.normal(size=(6, 9))
    spd = gram(root) + 0.5 * np.eye(6)
    rhs = rng.normal(size=(2, 6))
    # M spd = rhs  <=>  spd M' = rhs' since spd is symmetric
    oracle = np.linalg.solve(spd, rhs.T).T
    npt.assert_allclose(solve_spd_right(rhs, spd), oracle, rtol=1e-10, atol=1e-12)


def test_solve_spd_right_raises_on_singular():
    z = np.array([[1.0, 2.0], [2.0, 4.0]])  # rank 1
    g = gram(z)
    with pytest.raises(SingularMatrix):
        solve_spd_right(np.ones((1, 2)), g)


def test_solve_spd_right_raises_on_near_singular_pivot():
    spd = np.diag([1.0, 1e-15])
    with pytest.raises(SingularMatrix):
        solve_spd_right(np.ones((1, 2)), spd)


def test_solve_spd_right_rejects_bad_shapes_and_asymmetry():
    with pytest.raises(DimensionMismatch):
        solve_spd_right(np.ones((1, 2)), np.ones((2, 3)))
    with pytest.raises(DimensionMismatch):
        solve_spd_right(np.ones((1, 3)), np.eye(2))
    with pytest.raises(ValueError):
        solve_spd_right(np.ones((1, 2)), np.array([[1.0, 0.1], [0.0, 1.0]]))


def _penrose_ok(z, zp, rtol=1e-8):
    scale = max(1.0, np.abs(z).max()) * max(1.0, np.abs(zp).max())
    tol = rtol * scale
    return (
        np.abs(z @ zp @ z - z).max() <= tol
        and np.abs(zp @ z @ zp - zp).max() <= tol
        and np.abs((z @ zp).T - z @ zp).max() <= tol
        and np.abs((zp @ z).T - zp @ z).max() <= tol
    )


def test_pseudoinverse_penrose_conditions_full_rank():
    rng = np.random.Generator(np.random.PCG64(4))
    for _ in range(20):
        z = rng.normal(size=(rng.integers(1, 7), rng.integers(1, 7)))
        assert _penrose_ok(z, pseudoinverse(z))


def test_pseudoinverse_penrose_conditions_rank_deficient():
    rng = np.random.Generator(np.random.PCG64(5))
    for _ in range(20):
        n, r, m = 6, 3, 8
        z = rng.normal(size=(n, r)) @ rng.normal(size=(r, m))
        zp = pseudoinverse(z)
        assert _penrose_ok(z, zp)
        # rank must match the construction
        assert np.linalg.matrix_rank(zp) == r


def test_pseudoinverse_matches_numpy_pinv():
    rng = np.random.Generator(np.random.PCG64(6))
    z = rng.normal(size=(4, 9))
    npt.assert_allclose(pseudoinverse(z), np.linalg.pinv(z), rtol=1e-10, atol=1e-12)


def test_pseudoinverse_of_zero_matrix_is_zero():
    npt.assert_array_equal(pseudoinverse(np.zeros((3, 4))), np.zeros((4, 3)))
