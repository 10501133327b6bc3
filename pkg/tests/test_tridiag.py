import numpy as np
import pytest

from tridiag_spectra import cases as cs
from tridiag_spectra import tridiag as td
from tridiag_spectra.basisgen import BasisSpec, ExpDecay, JacobiType, LaguerreType, Linear, Logistic
from tridiag_spectra.errors import DomainError, ParameterDomainError, UnsupportedCaseError
from tridiag_spectra.oracle import overlap_numeric, wave_operator_matrix

TAGS = sorted(td.READINGS)


# frozen examples

def test_coulomb_on_ladder_point():
    rep = td.build_rep(cs.CoulombPlain(-1.0), 8, ell=0, lam=2.0, E=-0.5)
    assert np.all(rep.offdiag == 0)
    assert np.allclose(rep.diag - rep.y, np.arange(8), atol=1e-15)


def test_oscillator_offdiag_vanishes_when_frequency_matches():
    # with the calibrated reading omega = Omega/lam the match is Omega = lam**2
    rep = td.build_rep(cs.Oscillator(1.3 ** 2), 6, ell=1, lam=1.3, E=0.7)
    assert np.abs(rep.offdiag).max() < 1e-14


def test_powerlaw_offdiag_vanishes_on_ladder():
    mu, lam = 1.5, 0.8
    rep = td.build_rep(cs.PowerLaw1(mu, -0.3, (mu * lam / 2) ** 2), 6, ell=0, lam=lam)
    assert np.all(rep.offdiag == 0)


def test_morse_offdiag_vanishes_on_ladder():
    lam = 0.9
    rep = td.build_rep(cs.Morse1(-1.0, 0.5 * (lam / 2) ** 2), 6, lam=lam, E=-0.3)
    assert np.all(rep.offdiag == 0)


def test_rosen_morse_at_zero_b():
    mu, nu, A, lam = 1.5, 0.7, -1.2, 0.9
    rep = td.build_rep(cs.RosenMorse(A, 0.0, mu, nu), 7, lam=lam)
    n = np.arange(7)
    assert np.all(rep.offdiag == 0)
    expected = 0.25 * (2 * n + mu + nu + 1) ** 2 + 2 * A / lam ** 2 - 0.25
    assert np.allclose(rep.diag - rep.y, expected, rtol=1e-14)


@pytest.mark.parametrize("case,kw", [
    (cs.CoulombBarrier(-1.0, 0.2), dict(E=0.1)),
    (cs.Hulthen1(-1.0, 0.0, 1.5), dict(lam=1.0, E=0.1)),
    (cs.Hulthen2(-1.0, 0.3), dict(lam=1.0, E=0.0)),
    (cs.Morse1(-1.0, 0.1), dict(lam=1.0, E=0.2)),
])
def test_nonnegative_energy_rejected(case, kw):
    with pytest.raises(DomainError):
        td.build_rep(case, 4, **kw)


def test_invalid_inputs():
    with pytest.raises(DomainError):
        td.build_rep(cs.CoulombPlain(-1.0), 0, ell=0, lam=1.0, E=-0.1)
    with pytest.raises(DomainError):
        td.build_rep(cs.CoulombPlain(-1.0), 4, ell=-1, lam=1.0, E=-0.1)
    with pytest.raises(ParameterDomainError):
        cs.CoulombPlain(float("nan"))


def test_reps_are_immutable():
    rep = td.build_rep(cs.CoulombPlain(-1.0), 5, ell=1, lam=1.2, E=-0.2)
    with pytest.raises(ValueError):
        rep.diag[0] = 1.0
    with pytest.raises(ValueError):
        rep.offdiag[0] = 1.0


def test_matrix_layout():
    rep = td.build_rep(cs.Hulthen1(-1.0, 0.3, 1.5), 5, lam=1.0, E=-0.4)
    M = rep.matrix()
    assert np.allclose(np.diag(M), rep.diag - rep.y)
    assert np.allclose(np.diag(M, 1), rep.offdiag)
    assert np.allclose(M, M.T)
    assert np.allclose(rep.operator_matrix(), M / rep.scale)


@pytest.mark.parametrize("tag", TAGS)
def test_random_points_match_oracle(tag):
    rng = np.random.default_rng(11)
    for _ in range(2):
        case, kw = td.sample_parameters(tag, rng)
        rep = td.build_rep(case, 10, **kw)
        V = td.potential_for(case, rep.meta["lam"])
        mat, _ = wave_operator_matrix(rep.basis, V, rep.energy, 10)
        ref = rep.matrix()
        assert np.abs(mat * rep.scale - ref).max() <= 1e-8 * np.abs(ref).max()


@pytest.mark.parametrize("tag", TAGS)
def test_calibration_is_frozen(tag):
    assert td.calibrate(tag).chosen == td.FROZEN_READINGS[tag]


def test_calibration_rejects_alternatives():
    errors = td.calibrate("hulthen1").errors
    assert errors[td.FROZEN_READINGS["hulthen1"]] < 1e-9
    assert max(v for k, v in errors.items() if k != td.FROZEN_READINGS["hulthen1"]) > 1e-3


# E-linear split and overlaps

@pytest.mark.parametrize("tag", sorted(td.E_LINEAR))
def test_e_linear_split(tag):
    rng = np.random.default_rng(5)
    case, kw = td.sample_parameters(tag, rng)
    rep = td.build_rep(case, 8, **kw)
    H, S = rep.e_linear
    M = H.dense() - rep.energy * S.dense()
    assert np.allclose(M, rep.matrix(), atol=1e-12 * np.abs(M).max())
    # S / scale is the basis overlap matrix
    assert np.allclose(S.dense() / rep.scale, td.overlap_matrix(rep.basis, 8).matrix(), atol=1e-12)


@pytest.mark.parametrize("spec", [
    BasisSpec(Linear(1.3), LaguerreType(1.0, 0.5, 2.0), ell=0),
    BasisSpec(Linear(1.3), LaguerreType(1.0, 0.5, 1.0), ell=0),
    BasisSpec(ExpDecay(1.1), LaguerreType(1.3, 0.5, 1.6), ell=None),
    BasisSpec(Logistic(0.8), JacobiType(0.5, 0.5, 0.0, 0.0), ell=0),
    BasisSpec(Logistic(0.8), JacobiType(1.2, 0.7, 0.4, 1.4), ell=0),
    BasisSpec(Logistic(0.8), JacobiType(0.7, 1.2, 0.4, 1.4), ell=0),
])
def test_overlap_matrix_against_quadrature(spec):
    ref = td.overlap_matrix(spec, 6).matrix()
    num, _ = overlap_numeric(spec, 6)
    assert np.allclose(num, ref, atol=1e-9)


def test_overlap_single_entry_positive():
    S = td.overlap_matrix(BasisSpec(Linear(1.0), LaguerreType(1.0, 0.5, 2.0), ell=0), 1).matrix()
    assert S.shape == (1, 1) and S[0, 0] > 0


def test_overlap_unsupported():
    with pytest.raises(UnsupportedCaseError):
        td.overlap_matrix(BasisSpec(Linear(1.0), LaguerreType(2.0, 0.5, 0.5), ell=0), 4)
