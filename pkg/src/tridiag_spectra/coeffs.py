"""Expansion coefficients ``f_n`` of ``psi = sum_n f_n phi_n``.

The three-term recursion

    (a_n - y) f_n + b_{n-1} f_{n-1} + b_n f_{n+1} = 0

is solved upward from ``f_0``.  In closed form, after a rescaling,
the coefficients are

* Pollaczek polynomials for ``coulomb1``, ``oscillator1``, ``powerlaw1``, ``morse1``;
* continuous dual Hahn polynomials for ``coulomb2``, ``oscillator2``,
  ``powerlaw2``, ``morse2``;
* deformed Jacobi polynomials (a Jacobi recursion with a quadratic
  diagonal shift) for the Hulthen cases and Rosen-Morse.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, UnsupportedCaseError
from .orthopoly import ContinuousDualHahn, Pollaczek, eval_all
from .tridiag import jacobi_mid

POLLACZEK_CASES = ("coulomb1", "oscillator1", "powerlaw1", "morse1")
DUAL_HAHN_CASES = ("coulomb2", "oscillator2", "powerlaw2", "morse2")
DEFORMED_JACOBI_CASES = ("hulthen1", "hulthen2", "hulthen3", "rosenmorse")


@dataclass(frozen=True)
class BoundStateCondition:
    """Outcome of a vanishing off-diagonal entry at ``index``.

    ``residual`` is row ``index`` of the recursion evaluated on the computed
    coefficients, relative to the size of its terms; it vanishes exactly when
    ``f_0 .. f_index`` is a finite (bound-state) solution.
    """

    index: int
    residual: float
    satisfied: bool


@dataclass(frozen=True)
class CoefficientSequence:
    """Coefficients ``f_0 .. f_{len-1}``.

    ``truncated`` is set when the recursion met a vanishing ``b_n`` and
    stopped; ``condition`` then reports whether the finite block is a solution.
    """

    values: np.ndarray
    truncated: bool = False
    condition: BoundStateCondition | None = None
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.values)


def solve_forward(rep, f0=1.0, n_terms=None, zero_tol=1e-14, residual_tol=1e-9):
    """Solve the recursion of ``rep`` upward from ``f_0``.

    Parameters
    ----------
    rep : TridiagonalRep
    f0 : float
        Seed; must be nonzero.
    n_terms : int, optional
        Number of coefficients (default ``rep.size``).
    zero_tol : float
        ``b_n`` counts as zero when ``|b_n| <= zero_tol * max(|a - y|, |b|)``.
    residual_tol : float
        Threshold on the relative row residual for ``condition.satisfied``.
    """
    if f0 == 0 or not math.isfinite(f0):
        raise DomainError("f0 must be finite and nonzero")
    N = rep.size if n_terms is None else int(n_terms)
    if N < 1 or N > rep.size:
        raise DomainError(f"n_terms must lie in 1..{rep.size}, got {n_terms}")
    d = rep.diag - rep.y
    b = rep.offdiag
    size = max(np.max(np.abs(d)), np.max(np.abs(b)) if b.size else 0.0, 1e-300)
    f = np.zeros(N)
    f[0] = f0
    for n in range(N - 1):
        lower = b[n - 1] * f[n - 1] if n > 0 else 0.0
        if abs(b[n]) <= zero_tol * size:
            return CoefficientSequence(f[:n + 1].copy(), True,
                                       _row_condition(d, b, f, n, residual_tol),
                                       {"stop": n})
        f[n + 1] = -(d[n] * f[n] + lower) / b[n]
    return CoefficientSequence(f, False, None, {})


def _row_condition(d, b, f, n, tol):
    lower = b[n - 1] * f[n - 1] if n > 0 else 0.0
    res = d[n] * f[n] + lower
    scale = max(abs(d[n] * f[n]), abs(lower), 1e-300)
    rel = abs(res) / scale
    return BoundStateCondition(n, float(rel), bool(rel <= tol))


def recursion_residuals(rep, values):
    """Row residuals of the recursion on ``values``, each relative to its largest term.

    Row ``n`` (``n = 0 .. len(values) - 2``) is
    ``(a_n - y) f_n + b_{n-1} f_{n-1} + b_n f_{n+1}``.
    """
    f = np.asarray(getattr(values, "values", values), dtype=float)
    m = f.size - 1
    if m < 1 or m > rep.size - 1:
        raise DomainError(f"need 2..{rep.size} coefficients, got {f.size}")
    d = (rep.diag - rep.y)[:m] * f[:m]
    up = rep.offdiag[:m] * f[1:m + 1]
    low = np.zeros(m)
    low[1:] = rep.offdiag[:m - 1] * f[:m - 1]
    scale = np.maximum(np.maximum(np.abs(d), np.abs(up)), np.abs(low))
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.abs(d + up + low) / scale
    return np.where(scale > 0, out, 0.0)


def bound_state_condition(rep, f0=1.0, zero_tol=1e-14, residual_tol=1e-9):
    """Check whether ``rep`` truncates to a finite solution.

    Returns ``None`` when no off-diagonal entry vanishes.
    """
    return solve_forward(rep, f0, zero_tol=zero_tol, residual_tol=residual_tol).condition


# --- rescalings ------------------------------------------------------------------------

def _scale_factors(kind, n, nu=None, mu=None):
    # f_n = factor_n * P_n
    n = np.asarray(n, dtype=float)
    if kind == "pollaczek":
        return np.exp(0.5 * (gammaln(n + 1) - gammaln(n + nu + 1)))
    if kind == "cdhahn":
        return np.exp(0.5 * (gammaln(n + nu + 1) - gammaln(n + 1)))
    if kind == "jacobi":
        s = mu + nu
        log_h = (gammaln(n + mu + 1) + gammaln(n + nu + 1) - gammaln(n + 1)
                 - gammaln(n + s + 1) - np.log(np.abs(2 * n + s + 1)))
        if s + 1 == 0:
            # n = 0 limit of Gamma(s+1) (2n+s+1) -> Gamma(s+2)
            log_h = np.where(n == 0, gammaln(mu + 1) + gammaln(nu + 1) - gammaln(s + 2), log_h)
        return np.exp(-0.5 * log_h)
    raise UnsupportedCaseError(f"unknown rescaling {kind!r}")


def to_polynomial(f, kind, nu, mu=None):
    """Map coefficients ``f_n`` to the polynomial normalisation ``P_n``.

    ``kind`` is ``"pollaczek"`` (``f_n = sqrt(n!/Gamma(n+nu+1)) P_n``),
    ``"cdhahn"`` (``f_n = sqrt(Gamma(n+nu+1)/n!) S_n``) or ``"jacobi"``
    (``f_n = P_n / sqrt(h_n)`` with ``h_n`` the Jacobi norm up to ``2**(mu+nu+1)``).
    """
    f = np.asarray(f, dtype=float)
    return f / _scale_factors(kind, np.arange(f.size), nu, mu)


def from_polynomial(p, kind, nu, mu=None):
    """Inverse of :func:`to_polynomial`."""
    p = np.asarray(p, dtype=float)
    return p * _scale_factors(kind, np.arange(p.size), nu, mu)


# --- closed forms -------------------------------------------------------------------------

def _ctx(rep):
    if rep.case is None:
        raise DomainError("representation carries no case record")
    return rep.case, rep.meta["lam"], rep.energy, rep.meta["nu"], rep.meta


def _div(a, b):
    return a / b if b != 0 else math.inf


def pollaczek_parameters(rep):
    """``(Pollaczek family, argument, nu)`` for the Pollaczek-type cases.

    Raises :class:`DomainError` when the off-diagonal vanishes identically
    (the argument is infinite); :func:`pollaczek_coeffs` turns that case into
    a truncated sequence instead.
    """
    fam, x, nu = _pollaczek_parts(rep)
    if not math.isfinite(x):
        raise DomainError(f"{rep.case.tag}: off-diagonal vanishes; the recursion truncates")
    return fam, x, nu


def _pollaczek_parts(rep):
    case, lam, E, nu, meta = _ctx(rep)
    tag = case.tag
    if tag == "coulomb1":
        sp, sm = 2 * E / lam ** 2 + 0.25, 2 * E / lam ** 2 - 0.25
        x = _div(sm, sp)
        fam = Pollaczek((nu + 1) / 2, 1 + 2 * case.Z / lam, -2 * case.Z / lam)
    elif tag == "oscillator1":
        w = (case.omega / lam) ** 2 / lam ** 2
        x = _div(w + 1, w - 1)
        t = E / (2 * lam ** 2)
        fam = Pollaczek((nu + 1) / 2, 1 - t, t)
    elif tag in ("powerlaw1", "morse1"):
        # reduced strengths: B/(mu lam)^2, A/(mu lam)^2 or 2B/lam^2, A/lam^2
        s = (case.mu * lam) ** 2 if tag == "powerlaw1" else lam ** 2
        B = case.B / s * (1 if tag == "powerlaw1" else 2)
        A = case.A / s
        x = _div(B + 0.25, B - 0.25)
        fam = Pollaczek((nu + 1) / 2, 1 + 2 * A, -2 * A)
    else:
        raise UnsupportedCaseError(f"{tag} coefficients are not Pollaczek polynomials")
    return fam, x, nu


def pollaczek_coeffs(rep, n_terms=None):
    """``f_n = sqrt(n!/Gamma(n+nu+1)) P_n^{(nu+1)/2}(x; a, b)``.

    When the off-diagonal vanishes identically (``sigma_+ = 0`` for
    ``coulomb1``) the result is the truncated sequence ``[f_0]`` whose
    ``condition`` tells whether the energy lies on the bound-state ladder.
    """
    fam, x, nu = _pollaczek_parts(rep)
    N = rep.size if n_terms is None else int(n_terms)
    if not math.isfinite(x):
        f0 = float(_scale_factors("pollaczek", 0, nu))
        seq = solve_forward(rep, f0=f0, n_terms=N)
        return CoefficientSequence(seq.values, seq.truncated, seq.condition,
                                   {"family": fam, "x": x, **seq.meta})
    p = eval_all(fam, N - 1, x)
    return CoefficientSequence(from_polynomial(p, "pollaczek", nu), False, None,
                               {"family": fam, "x": x})


def cdhahn_parameters(rep):
    """``(dual Hahn family, squared argument, nu)`` for the dual-Hahn-type cases."""
    case, lam, E, nu, meta = _ctx(rep)
    ell = meta["ell"]
    tag = case.tag
    h = (nu + 1) / 2
    dh = lambda b: ContinuousDualHahn(h, b, h, check=False)
    if tag == "coulomb2":
        tau = case.Z / math.sqrt(-2 * E)
        fam, x2 = dh(tau + 0.5), -2 * case.B - (ell + 0.5) ** 2
    elif tag == "oscillator2":
        tau = E / (2 * lam ** 2)
        fam, x2 = dh(0.5 - tau), -case.B / 2 - ((ell + 0.5) / 2) ** 2
    elif tag == "powerlaw2":
        s = (case.mu * lam) ** 2
        fam = dh(case.B / s + 0.5)
        x2 = -2 * case.A / s - ((ell + 0.5) / case.mu) ** 2
    elif tag == "morse2":
        fam, x2 = dh(2 * case.A / lam ** 2 + 0.5), 2 * E / lam ** 2
    else:
        raise UnsupportedCaseError(f"{tag} coefficients are not continuous dual Hahn polynomials")
    return fam, x2, nu


def cdhahn_coeffs(rep, n_terms=None):
    """``f_n = sqrt(Gamma(n+nu+1)/n!) S_n(x**2; (nu+1)/2, b, (nu+1)/2)``."""
    fam, x2, nu = cdhahn_parameters(rep)
    N = rep.size if n_terms is None else int(n_terms)
    s = eval_all(fam, N - 1, x2)
    return CoefficientSequence(from_polynomial(s, "cdhahn", nu), False, None,
                               {"family": fam, "x2": x2})


@dataclass(frozen=True)
class DeformedJacobi:
    """Recursion ``y P_n = A_n P_n + c_n P_{n-1} + d_n P_{n+1}`` (deformed Jacobi)."""

    mu: float
    nu: float
    gamma: float
    form: str   # "shifted": gamma (2n+mu+nu+1)^2/4 added to the Jacobi diagonal
                # "weighted": diagonal/off-diagonal multiplied by (2n+mu+nu+2)^2/4 + gamma
    sign: float = 1.0
    upper_arg: str = "nu"

    def coefficients(self, N):
        """Arrays ``(A, c, d)`` of length ``N`` (``c_0`` and ``d_{N-1}`` included)."""
        mu, nu, g = self.mu, self.nu, self.gamma
        n = np.arange(N, dtype=float)
        s = mu + nu
        with np.errstate(divide="ignore", invalid="ignore"):
            lower = np.where(n == 0, 0.0, (n + mu) * (n + nu) / ((2 * n + s) * (2 * n + s + 1)))
        with np.errstate(invalid="ignore", divide="ignore"):
            upper = np.where(2 * n + s + 1 == 0, 1.0 / (s + 2),
                             (n + 1) * (n + s + 1) / ((2 * n + s + 1) * (2 * n + s + 2)))
        mid = jacobi_mid(n, mu, nu, nu if self.upper_arg == "nu" else mu)
        if self.form == "shifted":
            A = g / 4 * (2 * n + s + 1) ** 2 + mid
            c, d = lower, upper
        elif self.form == "weighted":
            extra = n * (n + (mu if self.upper_arg == "nu" else nu))
            with np.errstate(divide="ignore", invalid="ignore"):
                head = np.where(n == 0, 0.0, extra / (2 * n + s))
            A = -head + mid * (0.25 * (2 * n + s + 2) ** 2 + g)
            c = lower * (0.25 * (2 * n + s) ** 2 + g)
            d = upper * (0.25 * (2 * n + s + 2) ** 2 + g)
        else:
            raise UnsupportedCaseError(f"unknown deformed Jacobi form {self.form!r}")
        return A, self.sign * c, self.sign * d

    def evaluate(self, y, N):
        """``P_0 .. P_{N-1}`` at ``y`` with ``P_0 = 1``."""
        A, c, d = self.coefficients(N)
        p = np.zeros(N)
        p[0] = 1.0
        for n in range(N - 1):
            prev = c[n] * p[n - 1] if n > 0 else 0.0
            if d[n] == 0:
                raise DomainError(f"deformed Jacobi recursion breaks down at n={n}")
            p[n + 1] = ((y - A[n]) * p[n] - prev) / d[n]
        return p


def deformed_jacobi_parameters(rep):
    """``(DeformedJacobi, y)`` for the Hulthen cases and Rosen-Morse."""
    case, lam, E, nu, meta = _ctx(rep)
    mu = meta["mu"]
    tag = case.tag
    if tag in ("hulthen1", "rosenmorse"):
        if case.B == 0:
            raise DomainError(f"{tag} with B = 0 is already diagonal; no recursion to solve")
        gamma = lam ** 2 / (2 * case.B)
        if tag == "hulthen1":
            y = (meta["C"] - case.A - E) / case.B
        else:
            y = lam ** 2 / (8 * case.B) - case.A / case.B
        return DeformedJacobi(mu, nu, gamma, "shifted"), y
    if tag == "hulthen2":
        y = ((nu + 1) / 2) ** 2 - 2 * case.B / lam ** 2 - 0.25
        return DeformedJacobi(mu, nu, 2 * (E + case.A) / lam ** 2, "weighted"), y
    if tag == "hulthen3":
        y = 2 * (E - case.B) / lam ** 2 + ((mu + 1) / 2) ** 2
        gamma = 2 * (E + case.A - meta["C"]) / lam ** 2
        return DeformedJacobi(mu, nu, gamma, "weighted", sign=-1.0, upper_arg="mu"), y
    raise UnsupportedCaseError(f"{tag} coefficients are not deformed Jacobi polynomials")


def deformed_jacobi_coeffs(rep, n_terms=None):
    """``f_n = P_n / sqrt(h_n)`` with ``P_n`` from the deformed Jacobi recursion."""
    fam, y = deformed_jacobi_parameters(rep)
    N = rep.size if n_terms is None else int(n_terms)
    p = fam.evaluate(y, N)
    return CoefficientSequence(from_polynomial(p, "jacobi", fam.nu, fam.mu), False, None,
                               {"family": fam, "y": y})


def closed_form_coeffs(rep, n_terms=None):
    """Dispatch to the closed form that matches ``rep.case``."""
    tag = rep.case.tag if rep.case is not None else None
    if tag in POLLACZEK_CASES:
        return pollaczek_coeffs(rep, n_terms)
    if tag in DUAL_HAHN_CASES:
        return cdhahn_coeffs(rep, n_terms)
    if tag in DEFORMED_JACOBI_CASES:
        return deformed_jacobi_coeffs(rep, n_terms)
    raise UnsupportedCaseError(f"no closed-form coefficients for case {tag!r}")
