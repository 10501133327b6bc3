"""Laguerre, Jacobi, Pollaczek and continuous dual Hahn polynomials.

Every family is evaluated by upward three-term recurrence seeded with
``P_{-1} = 0, P_0 = 1``.  The terminating hypergeometric series of each
family is summed independently (in exact rational arithmetic, so that the
alternating series does not lose digits) and serves as a cross-check.

Pollaczek convention
--------------------
The Pollaczek polynomials used here obey

    (n+1) P_{n+1} = 2[(n+nu+a-1) x + b] P_n - (n+2nu-1) P_{n-1},

which is the form the Coulomb, oscillator, power-law and Morse expansion
coefficients satisfy.  It equals the classical Pollaczek family
``P_n^nu(x; a-1, b)``; the weight, norm and hypergeometric form below are
shifted accordingly.

Continuous dual Hahn convention
-------------------------------
``S_n`` is the ``3F2`` form normalised to ``S_n = 1`` at ``n = 0``.  It is a
polynomial in ``x**2``; :func:`eval_recursive` and
:func:`eval_hypergeometric` take that squared argument (which may be
negative), while :func:`weight` takes ``x >= 0`` itself.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import cmath
import math

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, ParameterDomainError
from .quadrature import integrate


@dataclass(frozen=True)
class Laguerre:
    nu: float

    def __post_init__(self):
        if not self.nu > -1:
            raise ParameterDomainError(f"Laguerre requires nu > -1, got {self.nu}")


@dataclass(frozen=True)
class Jacobi:
    """Jacobi family with weight ``(1-x)**mu (1+x)**nu``."""

    mu: float
    nu: float

    def __post_init__(self):
        if not (self.mu > -1 and self.nu > -1):
            raise ParameterDomainError(
                f"Jacobi requires mu > -1 and nu > -1, got ({self.mu}, {self.nu})")


@dataclass(frozen=True)
class Pollaczek:
    nu: float
    a: float
    b: float

    def __post_init__(self):
        if not self.nu > 0:
            raise ParameterDomainError(f"Pollaczek requires nu > 0, got {self.nu}")


@dataclass(frozen=True)
class ContinuousDualHahn:
    """``check=False`` allows any parameters for purely algebraic use of the recursion."""

    a: float
    b: float
    c: float
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        if self.check and not (self.a + self.b > 0 and self.a + self.c > 0):
            raise ParameterDomainError(
                "continuous dual Hahn requires a+b > 0 and a+c > 0, "
                f"got a+b={self.a + self.b}, a+c={self.a + self.c}")


PolyFamily = Laguerre | Jacobi | Pollaczek | ContinuousDualHahn


def support(family):
    """Interval on which the weight of ``family`` lives (in the weight variable)."""
    if isinstance(family, Laguerre):
        return (0.0, math.inf)
    if isinstance(family, (Jacobi, Pollaczek)):
        return (-1.0, 1.0)
    return (0.0, math.inf)


def _check_index(n):
    if int(n) != n or n < 0:
        raise DomainError(f"polynomial index must be a nonnegative integer, got {n}")
    return int(n)


def _step(family, k, x):
    """Coefficients (p, q) with P_{k+1} = p P_k - q P_{k-1}."""
    if isinstance(family, Laguerre):
        nu = family.nu
        return (2 * k + nu + 1 - x) / (k + 1), (k + nu) / (k + 1)
    if isinstance(family, Jacobi):
        mu, nu = family.mu, family.nu
        s = mu + nu
        if k == 0:
            # limit form of the first step, valid also when s is 0 or -1
            return (s + 2) * (1 + x) / 2 - (nu + 1), 0.0
        diag = (2 * k * (k + s + 1) + s * (nu + 1)) / ((2 * k + s) * (2 * k + s + 2))
        lower = (k + mu) * (k + nu) / ((2 * k + s) * (2 * k + s + 1))
        upper = (k + 1) * (k + s + 1) / ((2 * k + s + 1) * (2 * k + s + 2))
        return ((1 + x) / 2 - diag) / upper, lower / upper
    if isinstance(family, Pollaczek):
        nu, a, b = family.nu, family.a, family.b
        return 2 * ((k + nu + a - 1) * x + b) / (k + 1), (k + 2 * nu - 1) / (k + 1)
    a, b, c = family.a, family.b, family.c
    up = (k + a + b) * (k + a + c)
    low = k * (k + b + c - 1)
    return (up + low - a * a - x) / up, low / up


def eval_all(family, n_max, x):
    """Values ``P_0 .. P_{n_max}`` at ``x``; result has shape ``(n_max+1,) + x.shape``."""
    n_max = _check_index(n_max)
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    out[0] = cur
    for k in range(n_max):
        p, q = _step(family, k, x)
        prev, cur = cur, p * cur - q * prev
        out[k + 1] = cur
    return out


def eval_recursive(family, n, x):
    """``P_n(x)`` by upward recurrence (``x`` is ``x**2`` for continuous dual Hahn)."""
    n = _check_index(n)
    values = eval_all(family, n, x)[n]
    return float(values) if values.ndim == 0 else values


# --- hypergeometric forms ---------------------------------------------------

def _frac(v):
    return Fraction(float(v))


def _cmul(u, v):
    return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])


def _cdiv_real(u, r):
    return (u[0] / r, u[1] / r)


def _hyper_laguerre(nu, n, x):
    nu1 = _frac(nu) + 1
    xf = _frac(x)
    term, total = Fraction(1), Fraction(1)
    for k in range(n):
        term = term * (k - n) * xf / ((nu1 + k) * (k + 1))
        total += term
    log_pref = gammaln(n + nu + 1) - gammaln(n + 1) - gammaln(nu + 1)
    return math.exp(log_pref) * float(total)


def _hyper_jacobi(mu, nu, n, x):
    mu1 = _frac(mu) + 1
    top = _frac(mu) + _frac(nu) + n + 1
    z = (1 - _frac(x)) / 2
    term, total = Fraction(1), Fraction(1)
    for k in range(n):
        term = term * (k - n) * (top + k) * z / ((mu1 + k) * (k + 1))
        total += term
    log_pref = gammaln(n + mu + 1) - gammaln(n + 1) - gammaln(mu + 1)
    return math.exp(log_pref) * float(total)


def _pollaczek_omega(family, x):
    return ((family.a - 1) * x + family.b) / math.sqrt(1 - x * x)


def _hyper_pollaczek(family, n, x):
    nu = family.nu
    theta = math.acos(x)
    omega = _pollaczek_omega(family, x)
    zc = 1 - cmath.exp(-2j * theta)
    z = (_frac(zc.real), _frac(zc.imag))
    p = (_frac(nu), _frac(omega))
    two_nu = 2 * _frac(nu)
    term = (Fraction(1), Fraction(0))
    total = (Fraction(1), Fraction(0))
    for k in range(n):
        shifted = (p[0] + k, p[1])
        term = _cmul(_cmul(term, shifted), z)
        term = _cdiv_real(term, (two_nu + k) * (k + 1))
        term = (term[0] * (k - n), term[1] * (k - n))
        total = (total[0] + term[0], total[1] + term[1])
    value = complex(float(total[0]), float(total[1])) * cmath.exp(1j * n * theta)
    log_pref = gammaln(n + 2 * nu) - gammaln(n + 1) - gammaln(2 * nu)
    return math.exp(log_pref) * value.real


def _hyper_dual_hahn(family, n, x2):
    a, b, c = (_frac(v) for v in (family.a, family.b, family.c))
    x2f = _frac(x2)
    term, total = Fraction(1), Fraction(1)
    for k in range(n):
        term = term * (k - n) * ((a + k) ** 2 + x2f) / ((a + b + k) * (a + c + k) * (k + 1))
        total += term
    return float(total)


def eval_hypergeometric(family, n, x):
    """``P_n(x)`` from the terminating hypergeometric series of the family.

    Scalar ``x`` only; the finite sum is accumulated exactly and rounded once.
    """
    n = _check_index(n)
    x = float(x)
    if isinstance(family, Laguerre):
        return _hyper_laguerre(family.nu, n, x)
    if isinstance(family, Jacobi):
        return _hyper_jacobi(family.mu, family.nu, n, x)
    if isinstance(family, Pollaczek):
        if not -1 < x < 1:
            raise DomainError("Pollaczek hypergeometric form needs -1 < x < 1")
        return _hyper_pollaczek(family, n, x)
    return _hyper_dual_hahn(family, n, x)


# --- complex Gamma -------------------------------------------------------------

_LANCZOS_G = 7
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def complex_loggamma(z):
    """``log Gamma(z)`` for complex ``z`` by the Lanczos approximation (g = 7).

    Only the real part (``log|Gamma|``) is needed by the weights; the branch of
    the imaginary part is not normalised.  The left half-plane is reached by
    reflection.
    """
    z = complex(z)
    if z.real < 0.5:
        return math.log(math.pi) - _log_sin(math.pi * z) - complex_loggamma(1 - z)
    z -= 1
    acc = _LANCZOS_COEF[0]
    for k in range(1, _LANCZOS_G + 2):
        acc += _LANCZOS_COEF[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return 0.5 * math.log(2 * math.pi) + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def _log_sin(w):
    """``log sin(w)`` without overflow for large ``|Im w|`` (branch not normalised)."""
    if w.imag < 0:
        return _log_sin(w.conjugate()).conjugate()
    # sin w = -exp(-i w) (1 - exp(2 i w)) / (2 i)
    return -1j * w + cmath.log(1 - cmath.exp(2j * w)) + cmath.log(0.5j)


def log_abs_gamma(z):
    """``log|Gamma(z)|`` for complex ``z``."""
    return complex_loggamma(z).real


# --- weights and norms --------------------------------------------------------

def _require_support(family, x):
    lo, hi = support(family)
    if not lo <= x <= hi:
        raise DomainError(f"x={x} outside the support [{lo}, {hi}] of {family}")


def log_weight(family, x):
    """Natural logarithm of the orthogonality weight at ``x`` (``-inf`` where it vanishes)."""
    x = float(x)
    _require_support(family, x)
    if isinstance(family, Laguerre):
        if x == 0:
            return 0.0 if family.nu == 0 else (-math.inf if family.nu > 0 else math.inf)
        return family.nu * math.log(x) - x
    if isinstance(family, Jacobi):
        total = 0.0
        for base, power in ((1 - x, family.mu), (1 + x, family.nu)):
            if base == 0:
                if power > 0:
                    return -math.inf
                if power < 0:
                    return math.inf
            else:
                total += power * math.log(base)
        return total
    if isinstance(family, Pollaczek):
        if abs(x) == 1:
            return -math.inf
        theta = math.acos(x)
        omega = _pollaczek_omega(family, x)
        return ((2 * family.nu - 1) * math.log(math.sin(theta))
                + (2 * theta - math.pi) * omega
                + 2 * log_abs_gamma(complex(family.nu, omega)))
    a, b, c = family.a, family.b, family.c
    if x == 0:
        return -math.inf
    num = sum(log_abs_gamma(complex(p, x)) for p in (a, b, c))
    den = gammaln(a + b) + gammaln(a + c) + log_abs_gamma(complex(0, 2 * x))
    return 2 * (num - den) - math.log(2 * math.pi)


def weight(family, x):
    """Orthogonality weight of ``family`` at ``x`` (``x`` itself, not ``x**2``)."""
    return math.exp(log_weight(family, x))


def norm(family, n):
    """Squared norm ``h_n`` of ``P_n`` under :func:`weight` (absolutely continuous part)."""
    n = _check_index(n)
    if isinstance(family, Laguerre):
        return math.exp(gammaln(n + family.nu + 1) - gammaln(n + 1))
    if isinstance(family, Jacobi):
        mu, nu = family.mu, family.nu
        if n == 0:
            # Beta-function form; the general one is 0/0-prone when mu+nu < -1
            return math.exp((mu + nu + 1) * math.log(2) + gammaln(mu + 1)
                            + gammaln(nu + 1) - gammaln(mu + nu + 2))
        return math.exp((mu + nu + 1) * math.log(2) - math.log(2 * n + mu + nu + 1)
                        + gammaln(n + mu + 1) + gammaln(n + nu + 1)
                        - gammaln(n + 1) - gammaln(n + mu + nu + 1))
    if isinstance(family, Pollaczek):
        nu, a = family.nu, family.a
        return math.exp(math.log(2 * math.pi) + gammaln(n + 2 * nu) - gammaln(n + 1)
                        - 2 * nu * math.log(2) - math.log(n + nu + a - 1))
    a, b, c = family.a, family.b, family.c
    return math.exp(gammaln(n + 1) + gammaln(n + b + c)
                    - gammaln(n + a + b) - gammaln(n + a + c))


def _orthogonality_integrand(family, n, m):
    """Integrand in a variable that removes endpoint rounding, plus its range."""
    if isinstance(family, Laguerre):
        nu = family.nu

        # x = t**2 keeps x**nu dx = 2 t**(2nu+1) dt free of cancellation
        def f(t):
            x = t * t
            p = eval_all(family, max(n, m), x)
            with np.errstate(divide="ignore", under="ignore"):
                w = 2.0 * np.exp((2 * nu + 1) * np.log(t) - x)
            return w * p[n] * p[m]

        return f, 0.0, math.inf, 3.0
    if isinstance(family, Jacobi):
        mu, nu = family.mu, family.nu

        # x = -cos(theta): 1+x = 2 sin^2(theta/2), 1-x = 2 cos^2(theta/2);
        # a further power map theta = pi u**q (or pi - pi (1-u)**q) absorbs
        # an integrable endpoint singularity when an exponent is below -1/2
        q0 = 1.0 / (nu + 1) if nu < -0.5 else 1.0
        q1 = 1.0 / (mu + 1) if mu < -0.5 else 1.0

        def f(u):
            left = u < 0.5
            # distance of theta from the nearer endpoint, kept for accuracy
            d = np.where(left, math.pi * (2 * u) ** q0 / 2,
                         math.pi * (2 * (1 - u)) ** q1 / 2)
            with np.errstate(divide="ignore", invalid="ignore"):
                jac = np.where(left, math.pi * q0 * (2 * u) ** (q0 - 1),
                               math.pi * q1 * (2 * (1 - u)) ** (q1 - 1))
                near, far = np.sin(d / 2), np.cos(d / 2)
                s = np.where(left, near, far)
                c = np.where(left, far, near)
                x = np.where(left, -1 + 2 * near ** 2, 1 - 2 * near ** 2)
                p = eval_all(family, max(n, m), x)
                logw = ((mu + nu + 1) * math.log(2) + (2 * nu + 1) * np.log(s)
                        + (2 * mu + 1) * np.log(c))
                out = np.exp(logw) * jac * p[n] * p[m]
            return np.where(np.isfinite(out), out, 0.0)

        return f, 0.0, 1.0, 1.0
    if isinstance(family, Pollaczek):

        def f(theta):
            x = np.cos(theta)
            p = eval_all(family, max(n, m), x)
            w = np.array([
                math.exp(log_weight(family, xi)) * math.sin(th) if 0 < th < math.pi else 0.0
                for xi, th in zip(x, theta)])
            return w * p[n] * p[m]

        return f, 0.0, math.pi, 1.0

    def f(x):
        p = eval_all(family, max(n, m), x * x)
        w = np.array([math.exp(log_weight(family, xi)) if xi > 0 else 0.0 for xi in x])
        return w * p[n] * p[m]

    return f, 0.0, math.inf, 2.0


def has_discrete_part(family):
    """True when the orthogonality measure carries point masses besides the weight.

    Pollaczek needs ``a - 1 >= |b|`` and continuous dual Hahn needs
    nonnegative ``a, b, c`` for the measure to be absolutely continuous.
    """
    if isinstance(family, Pollaczek):
        return family.a - 1 < abs(family.b)
    if isinstance(family, ContinuousDualHahn):
        return min(family.a, family.b, family.c) < 0
    return False


def orthogonality_check(family, n, m, epsabs=None, epsrel=1e-11):
    """Numerical ``integral of w P_n P_m`` over the support.

    ``epsabs`` defaults to ``1e-11 * sqrt(h_n h_m)``.  Raises
    :class:`AccuracyError` (carrying the achieved estimate) when the adaptive
    quadrature does not converge.
    """
    n, m = _check_index(n), _check_index(m)
    if has_discrete_part(family):
        raise DomainError(
            f"{family} has point masses; the weight alone is not its measure")
    if epsabs is None:
        epsabs = 1e-11 * math.sqrt(norm(family, n) * norm(family, m))
    f, lo, hi, scale = _orthogonality_integrand(family, n, m)
    value, _ = integrate(f, lo, hi, epsabs=epsabs, epsrel=epsrel, scale=scale)
    return value
