"""Bound-state spectra: closed-form ladders and numerical diagonalisation.

A closed-form level arises when the off-diagonal entries of the
representation vanish at index ``n`` together with a diagonal condition.
For the power-law cases the energy is pinned to zero and the ladder runs over
a potential strength instead; :class:`SpectrumResult` records which quantity
the ``values`` array holds.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.linalg import cholesky_banded, hessenberg, solve_triangular

from . import cases as cs
from .eigen import tridiagonal_ql
from .errors import DomainError, ParameterDomainError, UnsupportedCaseError
from .tridiag import E_LINEAR, build_rep, jacobi_mid


@dataclass(frozen=True)
class SpectrumResult:
    """Levels ``n = 0, 1, ...`` of a ladder or of a truncated matrix.

    Attributes
    ----------
    values : ndarray
        Energies, or the potential strength named by ``quantity``.
    quantity : str
        ``"E"`` for energies, otherwise the name of the varied parameter.
    energies : ndarray
        Energies of the levels (zeros for zero-energy ladders).
    provenance : str
        ``"closed-form"`` or ``"numeric"``.
    meta : dict
        Per-level side conditions: ``lam`` and ``free`` (the free basis index,
        where the case has one), plus case-specific entries.  An empty
        ladder carries a ``reason``.
    """

    values: np.ndarray
    quantity: str
    energies: np.ndarray
    provenance: str
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class Conditions:
    """Residuals whose common roots are the closed-form levels.

    ``off(q, lam, free)`` vanishes when the off-diagonal coupling from index
    ``n`` to ``n+1`` does; ``diag(q, lam, free)`` is the accompanying diagonal
    condition.  ``q`` is the energy, or the ladder quantity for zero-energy
    cases.
    """

    n: int
    quantity: str
    off: object
    diag: object


def _require_levels(n_max):
    if int(n_max) != n_max or n_max < 0:
        raise DomainError(f"n_max must be a nonnegative integer, got {n_max}")
    return int(n_max)


def _lam(lam):
    if lam is None or not lam > 0:
        raise ParameterDomainError(f"lambda must be positive, got {lam}")
    return float(lam)


def _ell(case, ell):
    if case.one_dimensional or case.s_wave_only:
        return 0
    if ell is None or int(ell) != ell or ell < 0:
        raise ParameterDomainError(f"ell must be a nonnegative integer, got {ell}")
    return int(ell)


def _result(values, quantity, provenance, lam, free=None, energies=None, **extra):
    values = np.asarray(values, dtype=float)
    m = values.size
    lam = np.broadcast_to(np.asarray(lam, dtype=float), (m,)).copy()
    meta = {"lam": lam}
    if free is not None:
        meta["free"] = np.broadcast_to(np.asarray(free, dtype=float), (m,)).copy()
    meta.update(extra)
    if m == 0 and "reason" not in meta:
        meta["reason"] = "no level satisfies its side condition"
    if energies is None:
        energies = values if quantity == "E" else np.zeros(m)
    return SpectrumResult(values, quantity, np.asarray(energies, dtype=float), provenance, meta)


def _empty(reason):
    return _result([], "E", "closed-form", 1.0, reason=reason)


def _keep(mask, *arrays):
    # ladders are cut at the first level that violates its side condition
    stop = int(np.argmin(mask)) if not np.all(mask) else len(mask)
    return [a[:stop] for a in arrays]


def closed_form_spectrum(case, n_max, ell=0, lam=None):
    """Closed-form levels ``n = 0..n_max`` that satisfy their side conditions.

    Parameters
    ----------
    case : PotentialCase
    n_max : int
        Highest level index to try; finite ladders may return fewer levels.
    ell : int
        Angular momentum (ignored for one-dimensional and S-wave cases).
    lam : float
        Length scale; not needed for ``coulomb1``, ``coulomb2``,
        ``oscillator1`` and ``morse1``, where it follows from the levels or
        the potential.
    """
    n_max = _require_levels(n_max)
    ell = _ell(case, ell)
    n = np.arange(n_max + 1, dtype=float)
    tag = case.tag
    if tag == "coulomb1":
        if not case.Z < 0:
            return _empty("coulomb1 has bound states only for Z < 0")
        E = -0.5 * (case.Z / (n + ell + 1)) ** 2
        return _result(E, "E", "closed-form", 2 * abs(case.Z) / (n + ell + 1))
    if tag == "coulomb2":
        if not case.Z < 0:
            return _empty("coulomb2 has bound states only for Z < 0")
        rad = (ell + 0.5) ** 2 + 2 * case.B
        if rad <= 0:
            raise ParameterDomainError("coulomb2 needs (l + 1/2)**2 + 2B > 0")
        nu = 2 * math.sqrt(rad) - 1
        E = -0.5 * (case.Z / (n + nu / 2 + 1)) ** 2
        return _result(E, "E", "closed-form", 2 * np.sqrt(-2 * E), free=nu)
    if tag == "oscillator1":
        om = case.omega
        return _result(om * (2 * n + ell + 1.5), "E", "closed-form", math.sqrt(om))
    if tag == "oscillator2":
        lam = _lam(lam)
        rad = (ell + 0.5) ** 2 + 2 * case.B
        if rad <= 0:
            raise ParameterDomainError("oscillator2 needs (l + 1/2)**2 + 2B > 0")
        nu = math.sqrt(rad) - 1
        return _result(lam ** 2 * (2 * n + nu + 2), "E", "closed-form", lam, free=nu)
    if tag == "powerlaw1":
        lam = _lam(lam)
        m = case.mu
        if m < 0 and ell < 1:
            raise ParameterDomainError("powerlaw1 with mu < 0 needs l >= 1")
        nu = (2 * ell + 1) / abs(m)
        A = -(m * lam / 2) ** 2 * (2 * n + nu + 1)
        return _result(A, "A", "closed-form", lam, B=(m * lam / 2) ** 2)
    if tag == "powerlaw2":
        lam = _lam(lam)
        m = case.mu
        s = (m * lam) ** 2
        rad = ((ell + 0.5) / m) ** 2 + 2 * case.A / s
        if rad <= 0:
            raise ParameterDomainError("powerlaw2 needs ((l + 1/2)/mu)**2 + 2A/(mu lam)**2 > 0")
        nu = 2 * math.sqrt(rad) - 1
        if not (nu > 0 and (1 + nu + 1 / m) > 0):
            raise ParameterDomainError(f"powerlaw2 ladder needs nu > 0 and alpha > 0 (nu={nu})")
        B = -s * (n + nu / 2 + 1)
        return _result(B, "B", "closed-form", lam, free=nu)
    if tag in ("hulthen1", "hulthen3"):
        lam = _lam(lam)
        if tag == "hulthen1" and case.B != 0:
            raise UnsupportedCaseError("hulthen1 has a closed-form ladder only for B = 0")
        C = cs.hulthen_c(lam, case.nu)
        k = n + (case.nu + 1) / 2
        strength = case.A - C + (case.B if tag == "hulthen3" else 0.0)
        root = k + 2 * strength / (lam ** 2 * k)
        E = -(lam ** 2 / 8) * root ** 2
        if tag == "hulthen3":
            E = E + case.B
            free = -root - 1      # mu = 2 m - 1 with m = -root/2
            E, free = _keep(root < 0, E, free)
            return _result(E, "E", "closed-form", lam, free=free, C=C)
        E, = _keep(root < 0, E)
        return _result(E, "E", "closed-form", lam, C=C)
    if tag == "hulthen2":
        lam = _lam(lam)
        disc = lam ** 2 + 8 * case.B
        if disc < 0:
            raise ParameterDomainError("hulthen2 needs lam**2 + 8B >= 0")
        nu = (math.sqrt(disc) - lam) / lam
        K = n + nu / 2 + 1
        root = K + 2 * case.A / (lam ** 2 * K)
        E = -(lam ** 2 / 8) * root ** 2
        E, = _keep(root < 0, E)
        return _result(E, "E", "closed-form", lam, free=nu)
    if tag == "morse1":
        if not case.B > 0:
            raise DomainError("morse1 ladder needs B > 0 (it fixes lam**2 = 8B)")
        lam = math.sqrt(8 * case.B)
        root = 2 * case.A / lam ** 2 + n + 0.5
        E, = _keep(root < 0, -(lam ** 2 / 2) * root ** 2)
        return _result(E, "E", "closed-form", lam)
    if tag == "morse2":
        lam = _lam(lam)
        root = 2 * case.A / lam ** 2 + n + 0.5
        E = -(lam ** 2 / 2) * root ** 2
        free = -2 * root - 1
        E, free = _keep(root < 0, E, free)
        return _result(E, "E", "closed-form", lam, free=free)
    if tag == "rosenmorse":
        lam = _lam(lam)
        if case.B != 0:
            raise UnsupportedCaseError("rosen-morse has a closed-form ladder only for B = 0")
        if not case.A < 0:
            return _empty("rosen-morse has bound states only for A < 0")
        C = case.coupling(lam)
        d = (-lam + math.sqrt(lam ** 2 - 8 * case.A)) / (2 * lam)
        t = d - n
        with np.errstate(divide="ignore", invalid="ignore"):
            q = C / (lam ** 2 * t)
            E = -(lam ** 2 / 2) * (t ** 2 + q ** 2)
        ok = (t > 0) & (t + q > 0) & (t - q > 0)
        E, mu, nu = _keep(ok, E, t + q, t - q)
        return _result(E, "E", "closed-form", lam, free=mu, nu=nu, C=C)
    raise UnsupportedCaseError(f"unknown case {tag!r}")


def diagonalization_conditions(case, n, ell=0):
    """Residual functions for level ``n`` (see :class:`Conditions`).

    Where the case has a free basis index, ``free`` is that index (``nu`` or
    ``mu``); otherwise it is ignored.
    """
    n = _require_levels(n)
    ell = _ell(case, ell)
    tag = case.tag

    def mu_of(E, lam):
        return 2 / lam * math.sqrt(-2 * E)

    if tag == "coulomb1":
        Z = case.Z
        off = lambda E, lam, free=None: 2 * E / lam ** 2 + 0.25
        diag = lambda E, lam, free=None: 2 * (n + ell + 1) * (0.25 - 2 * E / lam ** 2) + 2 * Z / lam
        return Conditions(n, "E", off, diag)
    if tag == "coulomb2":
        off = lambda E, lam, nu: n + nu / 2 + 1 + case.Z / math.sqrt(-2 * E)
        diag = lambda E, lam, nu: -((nu + 1) / 2) ** 2 + (ell + 0.5) ** 2 + 2 * case.B
        return Conditions(n, "E", off, diag)
    if tag == "oscillator1":
        nu = ell + 0.5
        w = lambda lam: (case.omega / lam) ** 2 / lam ** 2
        off = lambda E, lam, free=None: w(lam) - 1
        diag = lambda E, lam, free=None: (2 * n + nu + 1) * (w(lam) + 1) - 2 * E / lam ** 2
        return Conditions(n, "E", off, diag)
    if tag == "oscillator2":
        off = lambda E, lam, nu: n + nu / 2 + 1 - E / (2 * lam ** 2)
        diag = lambda E, lam, nu: -((nu + 1) / 2) ** 2 + ((ell + 0.5) / 2) ** 2 + case.B / 2
        return Conditions(n, "E", off, diag)
    if tag == "powerlaw1":
        nu = (2 * ell + 1) / abs(case.mu)
        s = lambda lam: (case.mu * lam) ** 2
        off = lambda A, lam, free=None: case.B / s(lam) - 0.25
        diag = lambda A, lam, free=None: (case.B / s(lam) + 0.25) * (2 * n + nu + 1) + 2 * A / s(lam)
        return Conditions(n, "A", off, diag)
    if tag == "powerlaw2":
        s = lambda lam: (case.mu * lam) ** 2
        off = lambda B, lam, nu: n + nu / 2 + 1 + B / s(lam)
        diag = lambda B, lam, nu: (-((nu + 1) / 2) ** 2 + ((ell + 0.5) / case.mu) ** 2
                                   + 2 * case.A / s(lam))
        return Conditions(n, "B", off, diag)
    if tag == "hulthen1":
        nu = case.nu
        off = lambda E, lam, free=None: 2 * case.B / lam ** 2
        diag = lambda E, lam, free=None: (n * (n + mu_of(E, lam) + nu + 1)
                                          + 0.5 * (mu_of(E, lam) + 1) * (nu + 1) + 2 * case.A / lam ** 2)
        return Conditions(n, "E", off, diag)
    if tag == "hulthen2":
        def off(E, lam, nu):
            return 0.25 * (2 * n + mu_of(E, lam) + nu + 2) ** 2 + 2 * (E + case.A) / lam ** 2

        def diag(E, lam, nu):
            return ((nu + 1) / 2) ** 2 - 2 * case.B / lam ** 2 - 0.25

        return Conditions(n, "E", off, diag)
    if tag == "hulthen3":
        nu = case.nu

        def off(E, lam, mu):
            C = cs.hulthen_c(lam, nu)
            return 0.25 * (2 * n + mu + nu + 2) ** 2 + 2 * (E + case.A - C) / lam ** 2

        def diag(E, lam, mu):
            return 2 * (E - case.B) / lam ** 2 + ((mu + 1) / 2) ** 2

        return Conditions(n, "E", off, diag)
    if tag == "morse1":
        off = lambda E, lam, free=None: 2 * case.B / lam ** 2 - 0.25
        diag = lambda E, lam, free=None: ((2 * n + mu_of(E, lam) + 1) * (2 * case.B / lam ** 2 + 0.25)
                                          + 2 * case.A / lam ** 2)
        return Conditions(n, "E", off, diag)
    if tag == "morse2":
        off = lambda E, lam, nu: n + nu / 2 + 1 + 2 * case.A / lam ** 2
        diag = lambda E, lam, nu: ((nu + 1) / 2) ** 2 + 2 * E / lam ** 2
        return Conditions(n, "E", off, diag)
    if tag == "rosenmorse":
        def indices(E, lam):
            C = case.coupling(lam)
            return math.sqrt(2 * (C - E)) / lam, math.sqrt(-2 * (E + C)) / lam

        off = lambda E, lam, free=None: 2 * case.B / lam ** 2

        def diag(E, lam, free=None):
            mu, nu = indices(E, lam)
            return 0.25 * (2 * n + mu + nu + 1) ** 2 + 2 * case.A / lam ** 2 - 0.25

        return Conditions(n, "E", off, diag)
    raise UnsupportedCaseError(f"unknown case {tag!r}")


# --- numerical spectrum ----------------------------------------------------------------

def generalized_tridiagonal_eigvals(h, s):
    """Eigenvalues of ``H f = E S f`` for symmetric tridiagonal ``H`` and ``S``.

    ``S`` must be positive definite.  It is factored as ``L L^T`` (banded
    Cholesky), the problem is reduced to ``L^-1 H L^-T``, brought back to
    tridiagonal form by Householder reduction and solved by QL.
    """
    N = len(h.diag)
    if np.allclose(s.off, 0.0) and np.allclose(s.diag, s.diag[0]):
        if not s.diag[0] > 0:
            raise DomainError("overlap matrix is not positive definite")
        return tridiagonal_ql(h.diag / s.diag[0], h.off / s.diag[0])
    band = np.zeros((2, N))
    band[0] = s.diag
    band[1, :-1] = s.off
    try:
        low = cholesky_banded(band, lower=True)
    except np.linalg.LinAlgError as exc:
        raise DomainError("overlap matrix is not positive definite") from exc
    L = np.diag(low[0]) + np.diag(low[1, :-1], -1)
    A = solve_triangular(L, h.dense(), lower=True)
    A = solve_triangular(L, A.T, lower=True)
    A = 0.5 * (A + A.T)
    T = hessenberg(A)
    return tridiagonal_ql(np.diag(T).copy(), 0.5 * (np.diag(T, 1) + np.diag(T, -1)))


def numeric_spectrum(case, N, ell=0, lam=None, nu=None, mu=None):
    """Eigenvalues of the ``N``-function truncation for an energy-linear case.

    Builds the representation once, splits it as ``H - E S`` and solves the
    generalized eigenproblem.  Cases whose basis depends on ``E`` raise
    :class:`UnsupportedCaseError`.
    """
    if int(N) != N or N < 1:
        raise DomainError(f"basis size must be a positive integer, got {N}")
    if case.tag not in E_LINEAR:
        raise UnsupportedCaseError(
            f"{case.tag}: the basis depends on the energy, so the matrix is not H - E S")
    if case.tag == "hulthen3" and mu is None:
        mu = 1.0
    rep = build_rep(case, int(N), ell=ell, lam=lam, E=0.0, nu=nu, mu=mu)
    h, s = rep.e_linear
    w = generalized_tridiagonal_eigvals(h, s)
    return _result(w, "E", "numeric", rep.meta["lam"],
                   free=rep.meta.get("nu") if case.tag != "hulthen3" else rep.meta["mu"])


__all__ = ["SpectrumResult", "Conditions", "closed_form_spectrum", "diagonalization_conditions",
           "generalized_tridiagonal_eigvals", "numeric_spectrum", "jacobi_mid"]
