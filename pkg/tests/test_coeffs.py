import math

import numpy as np
import pytest
from scipy.special import eval_jacobi, gamma

from tridiag_spectra import cases as cs
from tridiag_spectra import coeffs as cf
from tridiag_spectra import tridiag as td
from tridiag_spectra.errors import DomainError, UnsupportedCaseError
from tridiag_spectra.oracle import RadialGrid, ode_residual

CLOSED = cf.POLLACZEK_CASES + cf.DUAL_HAHN_CASES + cf.DEFORMED_JACOBI_CASES


def test_single_term_rep():
    rep = td.build_rep(cs.CoulombPlain(-1.0), 1, ell=0, lam=1.0, E=-0.3)
    seq = cf.solve_forward(rep, f0=2.5)
    assert seq.values.tolist() == [2.5] and not seq.truncated


def test_coulomb_bound_state_truncates_at_zero():
    rep = td.build_rep(cs.CoulombPlain(-1.0), 10, ell=0, lam=2.0, E=-0.5)
    seq = cf.solve_forward(rep)
    assert seq.truncated and len(seq) == 1
    assert seq.condition.index == 0 and seq.condition.satisfied
    assert cf.bound_state_condition(rep).satisfied


def test_off_ladder_truncation_is_not_a_solution():
    # sigma_+ = 0 but the diagonal condition fails (lam on the wrong level)
    rep = td.build_rep(cs.CoulombPlain(-1.0), 10, ell=0, lam=2.0 * math.sqrt(0.6), E=-0.3)
    cond = cf.bound_state_condition(rep)
    assert cond is not None and not cond.satisfied


def test_coulomb_scattering_matches_pollaczek():
    rep = td.build_rep(cs.CoulombPlain(-1.0), 12, ell=0, lam=1.0, E=0.5)
    closed = cf.pollaczek_coeffs(rep)
    fwd = cf.solve_forward(rep, f0=closed.values[0])
    assert fwd.values[1] == pytest.approx(closed.values[1], rel=1e-13)
    assert np.allclose(fwd.values, closed.values, rtol=1e-10)


def test_pollaczek_signal_instead_of_crash():
    rep = td.build_rep(cs.CoulombPlain(-1.0), 10, ell=0, lam=2.0, E=-0.5)
    seq = cf.pollaczek_coeffs(rep)
    assert seq.truncated and seq.condition.satisfied
    with pytest.raises(DomainError):
        cf.pollaczek_parameters(rep)


def test_seed_values():
    rep = td.build_rep(cs.CoulombPlain(-1.0), 5, ell=1, lam=1.0, E=0.3)
    nu = rep.meta["nu"]
    assert cf.pollaczek_coeffs(rep).values[0] == pytest.approx(math.sqrt(1 / gamma(nu + 1)))
    rep = td.build_rep(cs.CoulombBarrier(-1.0, 0.2), 5, ell=1, E=-0.3, nu=1.3)
    assert cf.cdhahn_coeffs(rep).values[0] == pytest.approx(math.sqrt(gamma(1.3 + 1)))


@pytest.mark.parametrize("tag", CLOSED)
def test_closed_forms_satisfy_recursion(tag):
    rng = np.random.default_rng(17)
    for _ in range(3):
        case, kw = td.sample_parameters(tag, rng)
        rep = td.build_rep(case, 31, **kw)
        seq = cf.closed_form_coeffs(rep)
        assert len(seq) == 31
        assert cf.recursion_residuals(rep, seq).max() <= 1e-10


@pytest.mark.parametrize("tag", CLOSED)
def test_forward_solution_matches_closed_form(tag):
    rng = np.random.default_rng(23)
    case, kw = td.sample_parameters(tag, rng)
    rep = td.build_rep(case, 20, **kw)
    closed = cf.closed_form_coeffs(rep).values
    fwd = cf.solve_forward(rep, f0=closed[0]).values
    assert np.allclose(fwd, closed, rtol=1e-8, atol=1e-12 * np.abs(closed).max())


def test_rescaling_round_trip():
    f = np.array([0.3, -1.2, 4.0, 0.7])
    for kind, kw in (("pollaczek", {}), ("cdhahn", {}), ("jacobi", {"mu": 0.4})):
        p = cf.to_polynomial(f, kind, 1.3, **kw)
        assert np.allclose(cf.from_polynomial(p, kind, 1.3, **kw), f, rtol=1e-15)


def test_deformed_jacobi_seed_and_gamma_zero():
    fam = cf.DeformedJacobi(1.0, 1.5, 0.1, "weighted")
    assert fam.evaluate(0.3, 5)[0] == 1.0
    # shifted form at gamma = 0 is the Jacobi recursion in y = (1+x)/2:
    # P_n(y) = P_n^(mu,nu)(x) up to an n-dependent constant
    mu, nu, x = 0.6, 1.2, 0.37
    fam = cf.DeformedJacobi(mu, nu, 0.0, "shifted")
    p, q = fam.evaluate((1 + x) / 2, 8), fam.evaluate(1.0, 8)
    ref = np.array([eval_jacobi(n, mu, nu, x) for n in range(8)])
    lead = np.array([eval_jacobi(n, mu, nu, 1.0) for n in range(8)])
    assert np.allclose(p / ref, q / lead, rtol=1e-12)


def test_deformed_jacobi_needs_b():
    rep = td.build_rep(cs.Hulthen1(-1.0, 0.0, 1.5), 5, lam=1.0, E=-0.3)
    with pytest.raises(DomainError):
        cf.deformed_jacobi_coeffs(rep)


def test_unsupported_dispatch():
    rep = td.build_rep(cs.CoulombPlain(-1.0), 5, ell=0, lam=1.0, E=0.3)
    with pytest.raises(UnsupportedCaseError):
        cf.cdhahn_coeffs(rep)
    with pytest.raises(UnsupportedCaseError):
        cf.deformed_jacobi_coeffs(rep)


def test_bad_seed_and_length():
    rep = td.build_rep(cs.CoulombPlain(-1.0), 5, ell=0, lam=1.0, E=0.3)
    with pytest.raises(DomainError):
        cf.solve_forward(rep, f0=0.0)
    with pytest.raises(DomainError):
        cf.solve_forward(rep, n_terms=6)


# reconstructed wavefunctions

def test_coulomb_bound_state_residual():
    rep = td.build_rep(cs.CoulombPlain(-1.0), 12, ell=0, lam=2.0, E=-0.5)
    f = np.zeros(12)
    f[0] = 1.0
    rep_res = ode_residual(rep.basis, f, rep.case, -0.5, RadialGrid(1e-6, 40.0, 4000))
    assert rep_res.value < 1e-8


def test_morse_bound_state_residual():
    case = cs.Morse1(-1.0, 0.125)
    lam = 1.0
    rep = td.build_rep(case, 12, lam=lam, E=-1.125)
    seq = cf.solve_forward(rep)
    assert seq.truncated and seq.condition.satisfied
    f = np.zeros(12)
    f[:len(seq)] = seq.values
    res = ode_residual(rep.basis, f, case, -1.125, RadialGrid(-8.0, 30.0, 4000))
    assert res.value < 1e-8


def test_residual_decreases_with_truncation():
    # true Coulomb ground state in an off-ladder basis; the coefficients are the
    # minimal solution, so forward evaluation is only trusted for the first terms
    case = cs.CoulombPlain(-1.0)
    rep = td.build_rep(case, 20, ell=0, lam=1.0, E=-0.5)
    f = cf.pollaczek_coeffs(rep).values
    grid = RadialGrid(1e-6, 60.0, 6000)
    res = [ode_residual(rep.basis, f[:m], case, -0.5, grid).value for m in (5, 10, 20)]
    assert res[0] > res[1] > res[2]
    assert res[2] < 1e-6
