import math

import numpy as np
import pytest

from tridiag_spectra import cases as cs
from tridiag_spectra.errors import DomainError, UnsupportedCaseError
from tridiag_spectra.spectra import (closed_form_spectrum, diagonalization_conditions,
                                     generalized_tridiagonal_eigvals, numeric_spectrum)
from tridiag_spectra.tridiag import SymTridiagonal

LADDERS = [
    (cs.CoulombPlain(-1.0), 1, None),
    (cs.CoulombBarrier(-1.0, 0.3), 1, None),
    (cs.Oscillator(1.3), 1, None),
    (cs.OscillatorBarrier(0.3), 1, 1.1),
    (cs.PowerLaw1(1.5, 0.0, (1.5 * 0.8 / 2) ** 2), 1, 0.8),
    (cs.PowerLaw2(1.5, 0.3, 0.0), 1, 0.8),
    (cs.Hulthen1(-6.0, 0.0, 1.5), 0, 1.0),
    (cs.Hulthen2(-6.0, 0.3), 0, 1.0),
    (cs.Hulthen3(-6.0, 0.4, 1.5), 0, 1.0),
    (cs.Morse1(-4.0, 1 / 8), None, None),
    (cs.Morse2(-4.0), None, 1.0),
    (cs.RosenMorse(-12.0, 0.0, 2.0, 1.0), None, 1.0),
]


def test_coulomb_frozen():
    r = closed_form_spectrum(cs.CoulombPlain(-1.0), 1, ell=0)
    assert r.values.tolist() == [-0.5, -0.125]
    assert r.meta["lam"].tolist() == [2.0, 1.0]


def test_morse_frozen():
    r = closed_form_spectrum(cs.Morse1(-1.0, 0.125), 0)
    assert r.values[0] == pytest.approx(-1.125, abs=1e-15)


@pytest.mark.parametrize("ell", [0, 1, 3])
def test_barrier_free_coulomb_matches_plain(ell):
    a = closed_form_spectrum(cs.CoulombBarrier(-1.0, 0.0), 6, ell=ell)
    b = closed_form_spectrum(cs.CoulombPlain(-1.0), 6, ell=ell)
    assert np.allclose(a.values, b.values, rtol=1e-15)
    assert np.allclose(a.meta["free"], 2 * ell)


def test_oscillator_spacing():
    r = closed_form_spectrum(cs.Oscillator(1.7), 8, ell=2)
    assert np.allclose(np.diff(r.values), 2 * 1.7, rtol=1e-14)
    assert r.values[0] == pytest.approx(1.7 * (2 + 1.5))


@pytest.mark.parametrize("case,ell,lam", LADDERS, ids=[c.tag for c, _, _ in LADDERS])
def test_conditions_vanish_on_ladder(case, ell, lam):
    res = closed_form_spectrum(case, 10, ell=ell, lam=lam)
    assert len(res) >= 1
    free = res.meta.get("free", [None] * len(res))
    for n, v in enumerate(res.values):
        c = diagonalization_conditions(case, n, ell=ell)
        assert c.quantity == res.quantity
        assert abs(c.off(v, res.meta["lam"][n], free[n])) < 1e-12
        assert abs(c.diag(v, res.meta["lam"][n], free[n])) < 1e-12


@pytest.mark.parametrize("case,ell,lam", LADDERS, ids=[c.tag for c, _, _ in LADDERS])
def test_energy_ladders_increase(case, ell, lam):
    res = closed_form_spectrum(case, 10, ell=ell, lam=lam)
    if res.quantity == "E":
        assert np.all(np.diff(res.values) > 0)


def test_condition_forms():
    c = diagonalization_conditions(cs.Oscillator(1.0), 0)
    lam = 1.3
    assert c.off(0.0, lam) == pytest.approx((1.0 / lam) ** 2 / lam ** 2 - 1)
    mu, lam = 1.5, 0.8
    c = diagonalization_conditions(cs.PowerLaw1(mu, 0.0, 0.4), 0)
    # residual is (B - (mu lam/2)**2) / (mu lam)**2
    assert c.off(0.0, lam) * (mu * lam) ** 2 == pytest.approx(0.4 - (mu * lam / 2) ** 2)


def test_finite_ladders_are_cut():
    r = closed_form_spectrum(cs.Morse1(-1.0, 0.125), 20)
    assert len(r) == 2          # 2A/lam**2 + n + 1/2 < 0 holds for n = 0, 1
    r = closed_form_spectrum(cs.RosenMorse(-3.0, 0.0, 1.0, 1.0), 20, lam=1.0)
    assert 0 < len(r) < 21


def test_empty_ladder_has_reason():
    r = closed_form_spectrum(cs.CoulombPlain(1.0), 3)
    assert len(r) == 0 and "Z < 0" in r.meta["reason"]
    r = closed_form_spectrum(cs.Hulthen1(0.5, 0.0, 1.0), 3, lam=1.0)
    assert len(r) == 0 and r.meta["reason"]


def test_unsupported_ladders():
    with pytest.raises(UnsupportedCaseError):
        closed_form_spectrum(cs.Hulthen1(-1.0, 0.2, 1.0), 3, lam=1.0)
    with pytest.raises(UnsupportedCaseError):
        closed_form_spectrum(cs.RosenMorse(-1.0, 0.2, 1.0, 1.0), 3, lam=1.0)
    with pytest.raises(DomainError):
        closed_form_spectrum(cs.CoulombPlain(-1.0), -1)


# numeric route

def test_numeric_coulomb():
    r = numeric_spectrum(cs.CoulombPlain(-1.0), 40, ell=0, lam=2.0)
    assert r.values[0] == pytest.approx(-0.5, abs=1e-6)


def test_numeric_oscillator():
    r = numeric_spectrum(cs.Oscillator(1.0), 40, ell=0, lam=1.0)
    assert np.allclose(r.values[:3], [1.5, 3.5, 5.5], atol=1e-8)


@pytest.mark.parametrize("case,lam", [(cs.CoulombPlain(-1.0), 1.3), (cs.Oscillator(1.0), 0.8)])
def test_variational_monotone(case, lam):
    exact = closed_form_spectrum(case, 0).values[0]
    ground = [numeric_spectrum(case, N, ell=0, lam=lam).values[0] for N in (5, 10, 20, 40, 60)]
    assert np.all(np.diff(ground) <= 1e-12)
    assert ground[-1] >= exact - 1e-6


def test_numeric_matches_ladders_for_other_linear_cases():
    r = numeric_spectrum(cs.OscillatorBarrier(0.3), 40, ell=1, lam=1.1, nu=0.7)
    ref = closed_form_spectrum(cs.OscillatorBarrier(0.3), 2, ell=1, lam=1.1).values
    assert np.allclose(r.values[:3], ref, atol=1e-8)
    r = numeric_spectrum(cs.Morse2(-2.0), 60, lam=1.0, nu=1.0)
    # levels near the threshold converge slowly; check the deeply bound ones
    ref = closed_form_spectrum(cs.Morse2(-2.0), 1, lam=1.0).values
    assert np.allclose(r.values[:2], ref, atol=1e-7)


def test_numeric_rejects_energy_dependent_basis():
    with pytest.raises(UnsupportedCaseError):
        numeric_spectrum(cs.Morse1(-1.0, 0.125), 10, lam=1.0)


def test_generalized_single_entry():
    h = SymTridiagonal(np.array([3.0]), np.array([]))
    s = SymTridiagonal(np.array([2.0]), np.array([]))
    assert generalized_tridiagonal_eigvals(h, s) == pytest.approx([1.5])


def test_generalized_against_scipy():
    from scipy.linalg import eigh
    rng = np.random.default_rng(1)
    N = 50
    h = SymTridiagonal(rng.normal(size=N), rng.normal(size=N - 1))
    s = SymTridiagonal(3 + rng.uniform(size=N), 0.5 * rng.normal(size=N - 1))
    ref = eigh(h.dense(), s.dense(), eigvals_only=True)
    assert np.allclose(generalized_tridiagonal_eigvals(h, s), ref, rtol=1e-12, atol=1e-12)


def test_generalized_needs_positive_definite_overlap():
    h = SymTridiagonal(np.ones(3), np.zeros(2))
    s = SymTridiagonal(np.array([1.0, -1.0, 1.0]), np.zeros(2))
    with pytest.raises(DomainError):
        generalized_tridiagonal_eigvals(h, s)
