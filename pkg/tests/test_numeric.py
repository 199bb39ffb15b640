import numpy as np
import pytest

from catlearn.exceptions import DimensionError, NonFiniteError
from catlearn.numeric import (CHAIN, EXACT, Tolerance, approx_eq, concat, finite_diff_pullback,
                              make_rng, max_abs_diff, permute_blocks, relative_error,
                              sample_vec, vec)


def test_vec_checks_dimension_and_finiteness():
    assert vec([1, 2], 2).dtype == np.float64
    with pytest.raises(DimensionError) as info:
        vec([1, 2, 3], 2)
    assert (info.value.expected, info.value.actual) == (2, 3)
    with pytest.raises(NonFiniteError):
        vec([1.0, np.nan])
    with pytest.raises(DimensionError):
        vec(np.zeros((2, 2)))


def test_empty_vector_is_a_point_of_r0():
    assert vec([], 0).shape == (0,)
    assert concat().shape == (0,)


@pytest.mark.parametrize("x, y, tol, expected", [
    ([1.0], [1.0 + 1e-12], Tolerance(abs=1e-9), True),
    ([1.0], [1.1], Tolerance(abs=1e-9, rel=0), False),
    ([0, 0], [0, 0], Tolerance(abs=1e-12), True),
    ([100.0], [100.5], Tolerance(rel=1e-2), True),
])
def test_approx_eq(x, y, tol, expected):
    assert approx_eq(x, y, tol) is expected


def test_approx_eq_rejects_mismatched_dimensions():
    with pytest.raises(DimensionError):
        approx_eq([1.0], [1.0, 2.0], EXACT)


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(abs=-1)
    with pytest.raises(ValueError):
        Tolerance()
    assert CHAIN.abs == 1e-9 and EXACT.abs == 1e-12


def test_fd_square():
    g = finite_diff_pullback(lambda x: x ** 2, [3.0], [1.0], h=1e-6)
    assert abs(g[0] - 6.0) <= 1e-6


def test_fd_sine_at_zero():
    assert abs(finite_diff_pullback(np.sin, [0.0], [1.0])[0] - 1.0) <= 1e-9


def test_fd_linear_map_gives_transpose(rng):
    M = rng.uniform(-1, 1, size=(3, 4))
    x, w = rng.uniform(-1, 1, 4), rng.uniform(-1, 1, 3)
    assert max_abs_diff(finite_diff_pullback(lambda v: M @ v, x, w), M.T @ w) <= 1e-9


def test_fd_reports_non_finite_probe():
    with pytest.raises(NonFiniteError, match="probe"):
        finite_diff_pullback(lambda x: 1.0 / x if x[0] > 0 else np.array([np.inf]), [0.0], [1.0])


def test_fd_rejects_bad_step_and_cotangent():
    with pytest.raises(ValueError):
        finite_diff_pullback(np.sin, [0.0], [1.0], h=0)
    with pytest.raises(DimensionError):
        finite_diff_pullback(np.sin, [0.0], [1.0, 2.0])


def test_sampling_is_seed_determined():
    a = sample_vec(make_rng(1), 3)
    assert np.array_equal(a, sample_vec(make_rng(1), 3))
    assert sample_vec(make_rng(1), 0).shape == (0,)
    assert not np.array_equal(a, sample_vec(make_rng(2), 3))
    assert np.all((a >= -1) & (a <= 1))


def test_sample_vec_rejects_empty_interval(rng):
    with pytest.raises(ValueError):
        sample_vec(rng, 2, 1.0, 1.0)


def test_relative_error_uses_floor():
    assert relative_error([1e-12], [0.0]) == pytest.approx(1e-4)
    assert relative_error([2.0], [1.0]) == pytest.approx(0.5)
    assert relative_error([], []) == 0.0


def test_permute_blocks():
    f = permute_blocks([2, 1, 3], [1, 2, 0])
    assert f(np.arange(6.0)).tolist() == [2, 3, 4, 5, 0, 1]
