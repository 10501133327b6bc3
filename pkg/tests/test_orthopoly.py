import math

import numpy as np
import pytest
from scipy.special import eval_genlaguerre, eval_jacobi, gamma, loggamma

from tridiag_spectra.errors import AccuracyError, DomainError, ParameterDomainError
from tridiag_spectra.orthopoly import (ContinuousDualHahn, Jacobi, Laguerre, Pollaczek,
                                       complex_loggamma, eval_all, eval_hypergeometric,
                                       eval_recursive, has_discrete_part, log_abs_gamma, norm,
                                       orthogonality_check, weight)

FAMILIES = [Laguerre(1.3), Jacobi(0.7, -0.4), Pollaczek(0.8, 1.4, 0.3),
            ContinuousDualHahn(0.6, 0.9, 1.2)]
POINTS = {Laguerre: 2.3, Jacobi: 0.41, Pollaczek: -0.37, ContinuousDualHahn: 1.7}


# frozen values

def test_laguerre_first_step():
    assert eval_recursive(Laguerre(1.0), 1, 0.5) == pytest.approx(1.5, abs=1e-15)


@pytest.mark.parametrize("family", FAMILIES)
def test_degree_zero_is_one(family):
    assert eval_recursive(family, 0, 0.3) == 1.0
    assert eval_hypergeometric(family, 0, 0.3) == 1.0


def test_dual_hahn_first_step():
    assert eval_recursive(ContinuousDualHahn(0.5, 0.5, 0.5), 1, 0.0) == pytest.approx(0.75)


def test_jacobi_at_one():
    assert eval_hypergeometric(Jacobi(1.0, 0.3), 1, 1.0) == pytest.approx(2.0, abs=1e-15)


def test_laguerre_hypergeometric_matches_recursion():
    a = eval_hypergeometric(Laguerre(1.0), 5, 0.7)
    assert a == pytest.approx(eval_recursive(Laguerre(1.0), 5, 0.7), rel=1e-13)


def test_weights_frozen():
    assert weight(Laguerre(0.0), 0.0) == 1.0
    assert weight(Jacobi(2.0, 0.0), 1.0) == 0.0
    # |Gamma(1/2 + i)|^2 = pi / cosh(pi)
    dh = ContinuousDualHahn(0.5, 0.5, 0.5)
    expected = (math.pi / math.cosh(math.pi)) ** 3 / (2 * math.pi * abs(gamma(2j)) ** 2)
    assert weight(dh, 1.0) == pytest.approx(expected, rel=1e-12)


def test_norms_frozen():
    assert orthogonality_check(Laguerre(0.0), 0, 0) == pytest.approx(1.0, rel=1e-10)
    assert norm(Jacobi(1.0, 1.0), 0) == pytest.approx(4 / 3, rel=1e-14)
    assert orthogonality_check(Jacobi(1.0, 1.0), 0, 0) == pytest.approx(4 / 3, rel=1e-10)
    h1 = norm(Laguerre(2.0), 1)
    assert abs(orthogonality_check(Laguerre(2.0), 1, 3)) <= 1e-8 * h1


# agreement with scipy for the classical families

@pytest.mark.parametrize("nu", [-0.5, 0.0, 2.7])
def test_laguerre_against_scipy(nu):
    x = np.linspace(0, 30, 61)
    p = eval_all(Laguerre(nu), 20, x)
    for n in range(21):
        ref = eval_genlaguerre(n, nu, x)
        assert np.allclose(p[n], ref, rtol=1e-10, atol=1e-10 * np.abs(ref).max())


@pytest.mark.parametrize("mu,nu", [(0.0, 0.0), (1.5, -0.5), (-0.7, 3.2)])
def test_jacobi_against_scipy(mu, nu):
    x = np.linspace(-1, 1, 41)
    p = eval_all(Jacobi(mu, nu), 20, x)
    for n in range(21):
        ref = eval_jacobi(n, mu, nu, x)
        assert np.allclose(p[n], ref, rtol=1e-10, atol=1e-11 * np.abs(ref).max())


def test_eval_all_shape_and_scalar():
    p = eval_all(Jacobi(0.2, 0.3), 4, np.zeros((2, 3)))
    assert p.shape == (5, 2, 3)
    assert eval_recursive(Jacobi(0.2, 0.3), 3, 0.25) == pytest.approx(
        eval_jacobi(3, 0.2, 0.3, 0.25), rel=1e-13)


# Gamma helpers

@pytest.mark.parametrize("z", [0.3 + 0.0j, 2.5 + 1.0j, 0.5 + 7.0j, -2.3 + 0.4j, 40 + 30j])
def test_complex_loggamma_against_scipy(z):
    ours = complex_loggamma(z)
    ref = loggamma(z)
    assert ours.real == pytest.approx(ref.real, rel=1e-12, abs=1e-12)
    assert abs(np.exp(1j * (ours.imag - ref.imag)) - 1) < 1e-10


def test_reflection_identity():
    # |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
    for y in (0.1, 1.0, 3.0, 10.0):
        lhs = 2 * log_abs_gamma(0.5 + 1j * y)
        assert lhs == pytest.approx(math.log(math.pi / math.cosh(math.pi * y)), rel=1e-12)


# domain handling

def test_parameter_domain_errors():
    with pytest.raises(ParameterDomainError):
        Laguerre(-1.0)
    with pytest.raises(ParameterDomainError):
        Jacobi(0.0, -1.5)
    with pytest.raises(ParameterDomainError):
        Pollaczek(0.0, 1.0, 0.0)
    with pytest.raises(ParameterDomainError):
        ContinuousDualHahn(-1.0, 0.5, 0.5)
    ContinuousDualHahn(-1.0, 0.5, 0.5, check=False)


def test_negative_degree_and_support():
    with pytest.raises(DomainError):
        eval_recursive(Laguerre(0.0), -1, 0.0)
    with pytest.raises(DomainError):
        weight(Jacobi(0.0, 0.0), 1.5)
    with pytest.raises(DomainError):
        weight(Laguerre(0.0), -0.1)


def test_discrete_part_detection():
    assert not has_discrete_part(Pollaczek(0.8, 1.4, 0.3))
    assert has_discrete_part(Pollaczek(0.8, 1.0, 0.5))
    assert has_discrete_part(ContinuousDualHahn(-0.2, 0.9, 1.2, check=False))
    with pytest.raises(DomainError):
        orthogonality_check(Pollaczek(0.8, 1.0, 0.5), 0, 0)


def test_high_degree_stays_finite():
    p = eval_all(Laguerre(0.5), 200, np.array([0.1, 50.0, 400.0]))
    assert np.all(np.isfinite(p))


def test_orthogonality_failure_is_reported():
    with pytest.raises(AccuracyError):
        orthogonality_check(Laguerre(0.0), 12, 12, epsabs=1e-300, epsrel=1e-300)


@pytest.mark.parametrize("family", FAMILIES)
def test_recursion_matches_series_low_degree(family):
    x = POINTS[type(family)]
    for n in range(8):
        a = eval_recursive(family, n, x)
        b = eval_hypergeometric(family, n, x)
        assert a == pytest.approx(b, rel=1e-11, abs=1e-12)
