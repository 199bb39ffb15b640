import math

import numpy as np
import pytest

from catlearn.error_models import (cross_entropy, get_model, quadratic, total_error,
                                   xy_error)
from catlearn.exceptions import DomainError
from catlearn.numeric import finite_diff_pullback, relative_error
from catlearn.para import identity_para


def test_quadratic_values():
    q = quadratic()
    assert q.e(1.0, 3.0) == 2.0
    assert q.inv_de_dx(2.0, 5.0) == -3.0
    assert q.alpha(1) == q.alpha(7) == 1.0


def test_quadratic_inverse_is_involution(rng):
    q = quadratic()
    x0, y = rng.uniform(-5, 5, 50), rng.uniform(-5, 5, 50)
    assert np.max(np.abs(q.inv_de_dx(x0, q.de_dx(x0, y)) - y)) <= 1e-12


def test_cross_entropy_values():
    ce = cross_entropy()
    assert ce.de_dx(0.5, 1.0) == pytest.approx(2.0)
    assert ce.inv_de_dx(0.5, 2.0) == pytest.approx(1.0)
    assert ce.alpha(4) == 0.25


@pytest.mark.parametrize("z", [0.0, 1.0, -0.5, 1.5])
def test_cross_entropy_domain_errors(z):
    ce = cross_entropy()
    with pytest.raises(DomainError):
        ce.e(np.array([z]), np.array([0.5]))
    with pytest.raises(DomainError):
        ce.de_dx(np.array([z]), np.array([0.5]))


def test_domain_error_names_coordinate():
    with pytest.raises(DomainError) as info:
        cross_entropy().check(np.array([0.3, 0.9, 1.2]), "output")
    assert info.value.index == 2 and info.value.value == 1.2


def test_cross_entropy_inverse(rng):
    ce = cross_entropy()
    z, y = rng.uniform(0.01, 0.99, 50), rng.uniform(-3, 3, 50)
    assert np.max(np.abs(ce.inv_de_dx(z, ce.de_dx(z, y)) - y)) <= 1e-9


@pytest.mark.parametrize("model", [quadratic(), cross_entropy(), xy_error()],
                         ids=lambda m: m.name)
def test_derivative_matches_finite_difference(model, rng):
    lo, hi = (0.05, 0.95) if model.name == "cross_entropy" else (-2, 2)
    z, y = rng.uniform(lo, hi, 20), rng.uniform(lo, hi, 20)
    fd = finite_diff_pullback(lambda v: model.e(v, y), z, np.ones(20))
    assert relative_error(model.de_dx(z, y), fd) <= 1e-5


def test_alpha_positive():
    for model in (quadratic(), cross_entropy(), xy_error()):
        assert all(model.alpha(m) > 0 for m in range(1, 10))


def test_xy_model():
    xy = xy_error()
    assert xy.de_dx(np.array([3.0]), np.array([7.0])).tolist() == [7.0]


def test_total_error_examples():
    assert total_error(quadratic(), identity_para(2), [], [1, 2], [1, 2]) == 0.0
    assert total_error(quadratic(), identity_para(1), [], [1], [3]) == 2.0
    assert total_error(cross_entropy(), identity_para(1), [], [0.5], [0.5]) == pytest.approx(
        math.log(0.5), abs=1e-12)


def test_get_model():
    assert get_model("cross_entropy").name == "cross_entropy"
    with pytest.raises(ValueError, match="quadratic"):
        get_model("hinge")
