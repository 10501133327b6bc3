"""Independent numerical ground truth.

* matrix elements ``<phi_n|H - E|phi_m>`` by adaptive quadrature, with the
  kinetic term taken either from the analytic chain rule or from
  Richardson-extrapolated central differences;
* bound-state energies from a three-point finite-difference discretisation
  of the radial (or one-dimensional) Schroedinger equation, refined by
  Richardson extrapolation over two grids;
* residuals ``||(H - E) psi|| / ||psi||`` of reconstructed wavefunctions.

Units are atomic (hbar = m = 1): ``H = -1/2 d2/dr2 + l(l+1)/(2 r**2) + V``.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .basisgen import basis_derivatives, basis_eval, Linear, LaguerreType, BasisSpec
from .errors import AccuracyError, DomainError
from .quadrature import integrate


QUAD_EPSABS = 1e-10
QUAD_EPSREL = 1e-8


@dataclass(frozen=True)
class OracleReport:
    """One oracle comparison; ``passed`` iff ``|value - target| <= max(abs_tol, rel_tol |target|)``."""

    quantity: str
    value: float
    error: float
    target: float | None = None
    abs_tol: float = QUAD_EPSABS
    rel_tol: float = QUAD_EPSREL
    passed: bool | None = None

    @classmethod
    def compare(cls, quantity, value, error, target=None, abs_tol=QUAD_EPSABS,
                rel_tol=QUAD_EPSREL):
        passed = None
        if target is not None:
            passed = bool(abs(value - target) <= max(abs_tol, rel_tol * abs(target)))
        return cls(quantity, float(value), float(error), target, abs_tol, rel_tol, passed)


@dataclass(frozen=True)
class RadialGrid:
    """Grid description for the finite-difference solver and residual checks."""

    r_min: float
    r_max: float
    count: int = 2000
    spacing: str = "uniform"

    def __post_init__(self):
        if self.count < 100:
            raise DomainError(f"grid needs at least 100 points, got {self.count}")
        if not self.r_max > self.r_min:
            raise DomainError("grid needs r_max > r_min")
        if self.spacing not in ("uniform", "geometric"):
            raise DomainError(f"unknown spacing rule {self.spacing!r}")
        if self.spacing == "geometric" and not self.r_min > 0:
            raise DomainError("geometric grid needs r_min > 0")

    def points(self):
        if self.spacing == "geometric":
            return np.geomspace(self.r_min, self.r_max, self.count)
        return np.linspace(self.r_min, self.r_max, self.count)


# --- matrix elements ------------------------------------------------------------

def _centrifugal(spec):
    ell = spec.ell
    if ell is None or ell == 0:
        return None
    return lambda r: 0.5 * ell * (ell + 1) / r ** 2


def numeric_second_derivative(spec, n_max, r):
    """``d2 phi_n/dr2`` by Richardson-extrapolated central differences."""
    r = np.asarray(r, dtype=float)
    h = 2e-3 / spec.lam * np.ones_like(r)
    if not spec.map.full_line:
        h = np.minimum(h, 0.25 * r)

    def second(step):
        fp = basis_derivatives(spec, n_max, r + step)[0]
        f0 = basis_derivatives(spec, n_max, r)[0]
        fm = basis_derivatives(spec, n_max, r - step)[0]
        return (fp - 2 * f0 + fm) / step ** 2

    coarse, fine = second(h), second(h / 2)
    return (4 * fine - coarse) / 3


def _integration_layout(spec, size):
    """Length scale and shift used to map the r-domain onto a finite interval."""
    cmap = spec.map
    if spec.map.target == "jacobi":
        centre = float(cmap.inverse(0.0)) if cmap.full_line else 0.0
        return 2.0 / cmap.lam, centre
    # place the bulk of the Laguerre envelope near the middle of the map
    bulk = size + spec.kind.nu + 1.0
    r_bulk = float(cmap.inverse(bulk))
    if cmap.full_line:
        return 4.0 / cmap.lam, r_bulk
    return max(r_bulk, 1e-3 / cmap.lam), 0.0


def _integrate_rows(spec, rows, size, epsabs, epsrel):
    scale, centre = _integration_layout(spec, size)

    def shifted(u):
        r = u + centre
        out = rows(r)
        return np.where(np.isfinite(out), out, 0.0)

    lo, hi = spec.map.r_domain
    return integrate(shifted, lo - centre if math.isfinite(lo) else lo, hi, epsabs=epsabs,
                     epsrel=epsrel, scale=scale, limit=20000)


def wave_operator_matrix(spec, potential, E, size, kinetic="analytic",
                         epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL):
    """Full ``size x size`` matrix of ``<phi_n|H - E|phi_m>`` by quadrature.

    Parameters
    ----------
    spec : BasisSpec
    potential : callable
        ``V(r)``, vectorised.
    E : float
    size : int
    kinetic : {"analytic", "numeric"}
        Source of ``d2 phi_m/dr2``.

    Returns
    -------
    matrix, error : ndarray
    """
    if kinetic not in ("analytic", "numeric"):
        raise DomainError(f"unknown kinetic path {kinetic!r}")
    cent = _centrifugal(spec)
    n_max = size - 1

    def rows(r):
        phi, _, d2phi = basis_derivatives(spec, n_max, r)
        if kinetic == "numeric":
            d2phi = numeric_second_derivative(spec, n_max, r)
        with np.errstate(all="ignore"):
            pot = potential(r) - E
            if cent is not None:
                pot = pot + cent(r)
            hphi = -0.5 * d2phi + pot * phi
            hphi = np.where(phi == 0, np.where(np.isfinite(hphi), hphi, 0.0), hphi)
        return np.einsum("nk,mk->knm", phi, hphi)

    return _integrate_rows(spec, rows, size, epsabs, epsrel)


def overlap_numeric(spec, size, epsabs=1e-12, epsrel=1e-10):
    """``<phi_n|phi_m>`` by quadrature."""

    def rows(r):
        phi = basis_derivatives(spec, size - 1, r)[0]
        return np.einsum("nk,mk->knm", phi, phi)

    return _integrate_rows(spec, rows, size, epsabs, epsrel)


def integrate_matrix_element(spec, case, n, m, E, target=None, kinetic="analytic",
                             abs_tol=QUAD_EPSABS, rel_tol=QUAD_EPSREL):
    """``<phi_n|H - E|phi_m>`` for a single pair, as an :class:`OracleReport`.

    ``case`` is either a :class:`~tridiag_spectra.cases.PotentialCase` (its
    potential is built with the basis scale ``spec.lam``) or a plain callable.
    """
    if n < 0 or m < 0:
        raise DomainError("matrix indices must be nonnegative")
    V = case.potential(spec.lam) if hasattr(case, "potential") else case
    size = max(n, m) + 1
    mat, err = wave_operator_matrix(spec, V, E, size, kinetic=kinetic)
    return OracleReport.compare(f"<{n}|H-E|{m}>", mat[n, m], err[n, m], target,
                                abs_tol, rel_tol)


def derivative_path_agreement(spec, n_max, r):
    """Largest relative gap between analytic and finite-difference ``phi''``."""
    analytic = basis_derivatives(spec, n_max, r)[2]
    numeric = numeric_second_derivative(spec, n_max, r)
    scale = np.max(np.abs(analytic), axis=1, keepdims=True)
    scale[scale == 0] = 1.0
    return float(np.max(np.abs(analytic - numeric) / scale))


# --- finite differences -----------------------------------------------------------

@dataclass(frozen=True)
class FDSpectrum:
    """Finite-difference eigenvalues with a Richardson error estimate."""

    energies: np.ndarray
    errors: np.ndarray
    coarse: np.ndarray
    fine: np.ndarray
    meta: dict = field(default_factory=dict)


def _fd_levels(V, ell, a, b, count, n_states, dirichlet_left):
    # interior points of a uniform grid with hard walls at a and b
    r = np.linspace(a, b, count + 2)[1:-1]
    h = r[1] - r[0]
    pot = V(r)
    if ell:
        pot = pot + 0.5 * ell * (ell + 1) / r ** 2
    diag = 1.0 / h ** 2 + pot
    off = np.full(count - 1, -0.5 / h ** 2)
    return eigh_tridiagonal(diag, off, select="i", select_range=(0, n_states - 1),
                            eigvals_only=True)


def fd_bound_states(case, ell, grid, n_states, lam=None, tol=1e-6, strict=True):
    """Lowest ``n_states`` eigenvalues of the three-point discretisation, Richardson-refined.

    The problem is solved on ``count``, ``2 count + 1`` and ``4 count + 3``
    interior points (the step halves each time); Richardson extrapolation of
    the two finer grids is returned, with the gap to the extrapolation of the
    two coarser grids as error estimate.

    Parameters
    ----------
    case : PotentialCase or callable
        Potential source; a case is evaluated with basis scale ``lam``.
    ell : int or None
        Angular momentum (``None`` or 0 for one-dimensional problems).
    grid : RadialGrid
        Only ``r_min``, ``r_max`` and ``count`` are used; walls sit at the ends.
        For radial problems pass ``r_min = 0``; :func:`fd_window` suggests walls.
    n_states : int
    tol : float
        Raise :class:`AccuracyError` when the Richardson error estimate exceeds it.
    """
    V = case.potential(lam) if hasattr(case, "potential") else case
    a, b = grid.r_min, grid.r_max
    counts = (grid.count, 2 * grid.count + 1, 4 * grid.count + 3)
    levels = [_fd_levels(V, ell, a, b, c, n_states, True) for c in counts]
    first = (4 * levels[1] - levels[0]) / 3
    refined = (4 * levels[2] - levels[1]) / 3
    # the gap between successive extrapolants bounds the error of the finer one
    errors = np.abs(refined - first)
    if strict and np.any(errors > tol):
        raise AccuracyError(
            f"finite-difference levels not converged: estimate {errors.max():.2e} > {tol:.1e}",
            estimate=refined, error=errors)
    return FDSpectrum(refined, errors, levels[0], levels[2],
                      {"r_min": a, "r_max": b, "count": grid.count})


def fd_window(V, ell, e_max, full_line=False, depth=36.0, reach=1e4):
    """Wall positions for :func:`fd_bound_states` at energies up to ``e_max``.

    A wall is placed where the WKB decay exponent ``int sqrt(2(V_eff - e_max)) dr``,
    counted from the outermost classical turning point, reaches ``depth``; the
    wavefunction there is of order ``exp(-depth)``.
    """
    def v_eff(r):
        with np.errstate(all="ignore"):
            out = V(r)
            if ell:
                out = out + 0.5 * ell * (ell + 1) / r ** 2
        return np.where(np.isfinite(out), out, np.inf)

    def outward(r):
        # r is ordered in the outward direction
        veff = v_eff(r)
        allowed = np.nonzero(veff < e_max)[0]
        start = allowed[-1] if allowed.size else 0
        r, veff = r[start:], veff[start:]
        kappa = np.sqrt(np.clip(2 * (veff - e_max), 0.0, 1e300))
        acc = np.concatenate([[0.0], np.cumsum(0.5 * (kappa[1:] + kappa[:-1]) * np.abs(np.diff(r)))])
        hit = np.nonzero(acc >= depth)[0]
        if not hit.size:
            raise DomainError("no decay within the search range; is e_max below the threshold?")
        return float(r[hit[0]])

    if not full_line:
        return 0.0, outward(np.linspace(1e-6, reach, 400001))
    right = outward(np.linspace(-reach, reach, 800001))
    left = outward(np.linspace(reach, -reach, 800001))
    return left, right


# --- reconstructed wavefunctions ------------------------------------------------------

def ode_residual(spec, coeffs, case, E, grid):
    """``||(H - E) psi|| / ||psi||`` on ``grid`` for ``psi = sum f_n phi_n``."""
    values = np.asarray(getattr(coeffs, "values", coeffs), dtype=float)
    if values.size < 1:
        raise DomainError("need at least one coefficient")
    V = case.potential(spec.lam) if hasattr(case, "potential") else case
    r = grid.points()
    phi, _, d2phi = basis_derivatives(spec, values.size - 1, r)
    psi = values @ phi
    d2psi = values @ d2phi
    pot = V(r) - E
    cent = _centrifugal(spec)
    if cent is not None:
        pot = pot + cent(r)
    res = -0.5 * d2psi + pot * psi
    res = np.where(np.isfinite(res), res, 0.0)
    num = math.sqrt(np.trapezoid(res ** 2, r))
    den = math.sqrt(np.trapezoid(psi ** 2, r))
    value = num / den if den > 0 else math.inf
    return OracleReport.compare("residual", value, 0.0)
