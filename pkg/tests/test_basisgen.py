import math

import numpy as np
import pytest

from tridiag_spectra.basisgen import (BasisSpec, ExpDecay, JacobiType, LaguerreType, Linear,
                                      Logistic, Power, Quadratic, Tanh, basis_derivatives,
                                      basis_eval, boundary_check, map_coordinate, normalization)
from tridiag_spectra.errors import DomainError, ParameterDomainError


def test_map_values():
    assert map_coordinate(Logistic(1.0), 0.0) == -1.0
    assert map_coordinate(Logistic(1.0), 60.0) == pytest.approx(1.0)
    assert map_coordinate(ExpDecay(1.0, 2.0), math.log(2)) == pytest.approx(1.0, rel=1e-15)
    assert map_coordinate(Quadratic(2.0), 1.5) == pytest.approx(9.0)


@pytest.mark.parametrize("cmap", [Linear(0.7), Quadratic(1.3), Power(0.8, 1.5), Power(1.1, -0.7),
                                  ExpDecay(0.9, 1.7), Logistic(1.2), Tanh(0.6)])
def test_maps_monotone_and_invertible(cmap):
    lo = -8.0 if cmap.full_line else 0.01
    r = np.linspace(lo, 8.0, 401)
    x = map_coordinate(cmap, r)
    d = np.diff(x)
    assert np.all(d > 0) or np.all(d < 0)
    assert np.allclose(cmap.inverse(x), r, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("cmap", [Linear(0.7), Power(0.8, 1.5), ExpDecay(0.9, 1.7), Tanh(0.6)])
def test_map_derivatives(cmap):
    r = np.linspace(0.3, 3.0, 7)
    h = 1e-5
    num = (cmap.x(r + h) - cmap.x(r - h)) / (2 * h)
    h = 1e-3
    num2 = (cmap.x(r + h) - 2 * cmap.x(r) + cmap.x(r - h)) / h ** 2
    assert np.allclose(cmap.dx(r), num, rtol=1e-8)
    assert np.allclose(cmap.d2x(r), num2, rtol=1e-4, atol=1e-6)


def test_radial_map_rejects_negative_r():
    with pytest.raises(DomainError):
        map_coordinate(Linear(1.0), -0.1)


def test_invalid_parameters():
    with pytest.raises(ParameterDomainError):
        Linear(0.0)
    with pytest.raises(ParameterDomainError):
        Power(1.0, 2.0)
    with pytest.raises(ParameterDomainError):
        LaguerreType(0.0, 0.5, 0.0)
    with pytest.raises(ParameterDomainError):
        BasisSpec(Logistic(1.0), LaguerreType(1.0, 0.5, 0.0))


def test_normalization_frozen():
    assert normalization(BasisSpec(Linear(1.0), LaguerreType(1.0, 0.5, 0.0)), 0) == 1.0
    assert normalization(BasisSpec(Quadratic(1.0), LaguerreType(0.75, 0.5, 0.5)), 0) \
        == pytest.approx(math.sqrt(2 / math.gamma(1.5)), rel=1e-14)
    spec = BasisSpec(Logistic(1.0), JacobiType(0.5, 0.5, 0.0, 0.0), ell=0)
    assert normalization(spec, 0) == pytest.approx(math.sqrt(0.5), rel=1e-14)


def test_quadratic_prefactor_frozen():
    # ratio of the quadratic-map and linear-map constants is sqrt(2) at nu=0, n=0
    q = normalization(BasisSpec(Quadratic(1.0), LaguerreType(0.75, 0.5, 0.0)), 0)
    l = normalization(BasisSpec(Linear(1.0), LaguerreType(1.0, 0.5, 0.0)), 0)
    assert q / l == pytest.approx(math.sqrt(2), rel=1e-14)


def test_vanishes_at_boundaries():
    spec = BasisSpec(Linear(1.0), LaguerreType(1.0, 0.5, 1.0), ell=0)
    assert basis_eval(spec, 0, 0.0) == 0.0
    assert abs(basis_eval(spec, 0, 800.0)) < 1e-150
    hul = BasisSpec(Logistic(1.0), JacobiType(0.7, 0.4, 0.4, 1.4), ell=0)
    assert basis_eval(hul, 0, 0.0) == 0.0


def test_boundary_reports():
    assert boundary_check(BasisSpec(Linear(1.0), LaguerreType(1.0, 0.5, 1.0), ell=0), 3).passed
    morse = BasisSpec(ExpDecay(1.0), LaguerreType(0.75, 0.5, 1.5), ell=None)
    assert boundary_check(morse, 0).passed
    neg = BasisSpec(Power(1.0, -0.8), LaguerreType(2.0, 0.5, 1.3), ell=1)
    assert boundary_check(neg, 2).passed


def test_derivatives_against_finite_differences():
    spec = BasisSpec(Power(0.9, 1.5), LaguerreType(1.1, 0.5, 0.7), ell=1)
    r = np.linspace(0.4, 6.0, 9)
    phi, d1, d2 = basis_derivatives(spec, 4, r)
    h = 1e-4
    p_plus, _, _ = basis_derivatives(spec, 4, r + h)
    p_minus, _, _ = basis_derivatives(spec, 4, r - h)
    assert np.allclose(d1, (p_plus - p_minus) / (2 * h), atol=1e-7)
    assert np.allclose(d2, (p_plus - 2 * phi + p_minus) / h ** 2, atol=1e-5)
    assert np.allclose(phi[3], basis_eval(spec, 3, r), rtol=1e-13, atol=1e-300)


def test_large_index_is_finite():
    spec = BasisSpec(Linear(1.0), LaguerreType(1.0, 0.5, 2.0), ell=0)
    assert math.isfinite(normalization(spec, 400))
    assert np.all(np.isfinite(basis_eval(spec, 300, np.linspace(0, 2000, 50))))
