"""Square-integrable bases ``phi_n(r) = A_n w(x) P_n(x)`` on mapped coordinates.

Two templates are supported.  The Laguerre type lives on ``x in (0, inf)``
with ``w = x**alpha exp(-beta x)`` and ``P_n = L_n^nu``; the Jacobi type lives
on ``x in (-1, 1)`` with ``w = (1+x)**alpha (1-x)**beta`` and
``P_n = P_n^(mu, nu)``.  The coordinate ``x`` is one of six maps of the
physical coordinate ``r``.

Values and derivatives are assembled in log space for the envelope so that
``x**alpha`` against ``exp(-beta x)`` never overflows.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.special import gammaln

from . import orthopoly
from .errors import DomainError, ParameterDomainError


# --- coordinate maps -----------------------------------------------------------

class CoordinateMap:
    """Base class: ``x(r)`` with its first two derivatives and inverse."""

    lam: float
    full_line = False
    target = "laguerre"  # which polynomial template the map serves

    def _check(self):
        if not self.lam > 0:
            raise ParameterDomainError(f"lambda must be positive, got {self.lam}")

    @property
    def r_domain(self):
        return (-math.inf, math.inf) if self.full_line else (0.0, math.inf)

    def _check_r(self, r):
        r = np.asarray(r, dtype=float)
        if not self.full_line and np.any(r < 0):
            raise DomainError(f"{type(self).__name__} map needs r >= 0")
        return r

    def __call__(self, r):
        return map_coordinate(self, r)

    # subclasses implement x, dx, d2x (arrays in, arrays out) and inverse
    def log_x(self, r):
        with np.errstate(divide="ignore"):
            return np.log(self.x(r))


@dataclass(frozen=True)
class Linear(CoordinateMap):
    """``x = lam r``."""

    lam: float

    def __post_init__(self):
        self._check()

    def x(self, r):
        return self.lam * r

    def dx(self, r):
        return np.full_like(r, self.lam)

    def d2x(self, r):
        return np.zeros_like(r)

    def inverse(self, x):
        return np.asarray(x, dtype=float) / self.lam

    norm_factor = property(lambda self: self.lam)


@dataclass(frozen=True)
class Quadratic(CoordinateMap):
    """``x = (lam r)**2``."""

    lam: float

    def __post_init__(self):
        self._check()

    def x(self, r):
        return (self.lam * r) ** 2

    def dx(self, r):
        return 2 * self.lam ** 2 * r

    def d2x(self, r):
        return np.full_like(r, 2 * self.lam ** 2)

    def inverse(self, x):
        return np.sqrt(np.asarray(x, dtype=float)) / self.lam

    norm_factor = property(lambda self: 2 * self.lam)


@dataclass(frozen=True)
class Power(CoordinateMap):
    """``x = (lam r)**mu`` with ``mu`` not in {0, 1, 2}; ``mu < 0`` swaps the ends."""

    lam: float
    mu: float

    def __post_init__(self):
        self._check()
        if self.mu in (0, 1, 2):
            raise ParameterDomainError(
                f"power map excludes mu in {{0, 1, 2}} (Morse, Coulomb, oscillator), got {self.mu}")

    def x(self, r):
        with np.errstate(divide="ignore"):
            return (self.lam * r) ** self.mu

    def log_x(self, r):
        with np.errstate(divide="ignore"):
            return self.mu * np.log(self.lam * r)

    def dx(self, r):
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.mu * self.lam * (self.lam * r) ** (self.mu - 1)

    def d2x(self, r):
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.mu * (self.mu - 1) * self.lam ** 2 * (self.lam * r) ** (self.mu - 2)

    def inverse(self, x):
        return np.asarray(x, dtype=float) ** (1.0 / self.mu) / self.lam

    norm_factor = property(lambda self: abs(self.mu) * self.lam)


@dataclass(frozen=True)
class ExpDecay(CoordinateMap):
    """``x = mu_hat exp(-lam r)`` on the whole real line."""

    lam: float
    mu_hat: float = 1.0
    full_line = True

    def __post_init__(self):
        self._check()
        if not self.mu_hat > 0:
            raise ParameterDomainError(f"mu_hat must be positive, got {self.mu_hat}")

    def x(self, r):
        return self.mu_hat * np.exp(-self.lam * r)

    def log_x(self, r):
        return math.log(self.mu_hat) - self.lam * r

    def dx(self, r):
        return -self.lam * self.x(r)

    def d2x(self, r):
        return self.lam ** 2 * self.x(r)

    def inverse(self, x):
        return -np.log(np.asarray(x, dtype=float) / self.mu_hat) / self.lam

    norm_factor = property(lambda self: self.lam)


@dataclass(frozen=True)
class Logistic(CoordinateMap):
    """``x = 1 - 2 exp(-lam r)``, mapping ``[0, inf)`` onto ``[-1, 1)``."""

    lam: float
    target = "jacobi"

    def __post_init__(self):
        self._check()

    def x(self, r):
        return 1 - 2 * np.exp(-self.lam * r)

    def one_plus(self, r):
        return -2 * np.expm1(-self.lam * r)

    def one_minus(self, r):
        return 2 * np.exp(-self.lam * r)

    def dx(self, r):
        return self.lam * self.one_minus(r)

    def d2x(self, r):
        return -self.lam ** 2 * self.one_minus(r)

    def inverse(self, x):
        return -np.log((1 - np.asarray(x, dtype=float)) / 2) / self.lam

    norm_factor = property(lambda self: self.lam)


@dataclass(frozen=True)
class Tanh(CoordinateMap):
    """``z = tanh(lam r)`` on the whole real line."""

    lam: float
    target = "jacobi"
    full_line = True

    def __post_init__(self):
        self._check()

    def x(self, r):
        return np.tanh(self.lam * r)

    def one_plus(self, r):
        return 2 / (1 + np.exp(-2 * self.lam * r))

    def one_minus(self, r):
        return 2 / (1 + np.exp(2 * self.lam * r))

    def dx(self, r):
        return self.lam * self.one_plus(r) * self.one_minus(r)

    def d2x(self, r):
        return -2 * self.lam * self.x(r) * self.dx(r)

    def inverse(self, x):
        return np.arctanh(np.asarray(x, dtype=float)) / self.lam

    norm_factor = property(lambda self: self.lam)


def map_coordinate(cmap, r):
    """Map the physical coordinate ``r`` to ``x`` (``z`` for :class:`Tanh`)."""
    r = cmap._check_r(r)
    out = cmap.x(r)
    return float(out) if out.ndim == 0 else out


# --- basis specifications ----------------------------------------------------

@dataclass(frozen=True)
class LaguerreType:
    """Envelope ``x**alpha exp(-beta x)`` times ``L_n^nu(x)``."""

    alpha: float
    beta: float
    nu: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ParameterDomainError(
                f"basis needs alpha > 0 and beta > 0, got ({self.alpha}, {self.beta})")
        if not self.nu > -1:
            raise ParameterDomainError(f"basis needs nu > -1, got {self.nu}")

    @property
    def family(self):
        return orthopoly.Laguerre(self.nu)


@dataclass(frozen=True)
class JacobiType:
    """Envelope ``(1+x)**alpha (1-x)**beta`` times ``P_n^(mu, nu)(x)``."""

    alpha: float
    beta: float
    mu: float
    nu: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ParameterDomainError(
                f"basis needs alpha > 0 and beta > 0, got ({self.alpha}, {self.beta})")
        if not (self.mu > -1 and self.nu > -1):
            raise ParameterDomainError(
                f"basis needs mu > -1 and nu > -1, got ({self.mu}, {self.nu})")

    @property
    def family(self):
        return orthopoly.Jacobi(self.mu, self.nu)


@dataclass(frozen=True)
class BasisSpec:
    """A coordinate map, an envelope/polynomial template and the angular momentum.

    ``ell`` is ``None`` for one-dimensional problems on the real line.
    """

    map: CoordinateMap
    kind: LaguerreType | JacobiType
    ell: int | None = 0

    def __post_init__(self):
        wants = "jacobi" if isinstance(self.kind, JacobiType) else "laguerre"
        if self.map.target != wants:
            raise ParameterDomainError(
                f"{type(self.map).__name__} map does not carry a {wants}-type basis")
        if self.ell is not None and (int(self.ell) != self.ell or self.ell < 0):
            raise ParameterDomainError(f"ell must be a nonnegative integer, got {self.ell}")

    @property
    def lam(self):
        return self.map.lam


def log_normalization(spec, n):
    """``log A_n``."""
    if int(n) != n or n < 0:
        raise DomainError(f"basis index must be a nonnegative integer, got {n}")
    kind = spec.kind
    if isinstance(kind, LaguerreType):
        return 0.5 * (math.log(spec.map.norm_factor) + gammaln(n + 1)
                      - gammaln(n + kind.nu + 1))
    return 0.5 * (math.log(spec.map.lam) - math.log(orthopoly.norm(kind.family, int(n))))


def normalization(spec, n):
    """Normalization constant ``A_n > 0`` for the basis ``spec``.

    Examples
    --------
    >>> normalization(BasisSpec(Linear(1.0), LaguerreType(1.0, 0.5, 0.0)), 0)
    1.0
    """
    return math.exp(log_normalization(spec, n))


def _envelope_parts(spec, r):
    """Return ``x``, ``x'``, ``x''``, ``log w``, ``s'``, ``s''`` with ``w = exp(s(x))``."""
    cmap, kind = spec.map, spec.kind
    a, b = kind.alpha, kind.beta
    with np.errstate(all="ignore"):
        x = cmap.x(r)
        dx = cmap.dx(r)
        d2x = cmap.d2x(r)
        if isinstance(kind, LaguerreType):
            logx = cmap.log_x(r)
            logw = a * logx - b * x
            ds = a / x - b
            d2s = -a / x ** 2
        else:
            op, om = cmap.one_plus(r), cmap.one_minus(r)
            logw = a * np.log(op) + b * np.log(om)
            ds = a / op - b / om
            d2s = -a / op ** 2 - b / om ** 2
    return x, dx, d2x, logw, ds, d2s


def _poly_parts(spec, n_max, x):
    """Polynomials ``P_0..P_{n_max}`` and their first two x-derivatives."""
    kind = spec.kind
    shape = (n_max + 1,) + np.shape(x)
    with np.errstate(all="ignore"):
        return _poly_parts_raw(kind, n_max, x, shape)


def _poly_parts_raw(kind, n_max, x, shape):
    p = orthopoly.eval_all(kind.family, n_max, x)
    dp = np.zeros(shape)
    d2p = np.zeros(shape)
    if isinstance(kind, LaguerreType):
        if n_max >= 1:
            dp[1:] = -orthopoly.eval_all(orthopoly.Laguerre(kind.nu + 1), n_max - 1, x)
        if n_max >= 2:
            d2p[2:] = orthopoly.eval_all(orthopoly.Laguerre(kind.nu + 2), n_max - 2, x)
    else:
        mu, nu = kind.mu, kind.nu
        k = np.arange(n_max + 1, dtype=float).reshape((-1,) + (1,) * np.ndim(x))
        if n_max >= 1:
            q1 = orthopoly.eval_all(orthopoly.Jacobi(mu + 1, nu + 1), n_max - 1, x)
            dp[1:] = 0.5 * (k[1:] + mu + nu + 1) * q1
        if n_max >= 2:
            q2 = orthopoly.eval_all(orthopoly.Jacobi(mu + 2, nu + 2), n_max - 2, x)
            dp2 = 0.25 * (k[2:] + mu + nu + 1) * (k[2:] + mu + nu + 2)
            d2p[2:] = dp2 * q2
    return p, dp, d2p


def basis_derivatives(spec, n_max, r):
    """``phi_n``, ``d phi_n/dr`` and ``d2 phi_n/dr2`` for ``n = 0..n_max``.

    Parameters
    ----------
    spec : BasisSpec
    n_max : int
    r : array_like
        One-dimensional array of abscissae inside the domain.

    Returns
    -------
    phi, dphi, d2phi : ndarray, each of shape ``(n_max + 1, len(r))``
    """
    r = spec.map._check_r(np.atleast_1d(np.asarray(r, dtype=float)))
    x, dx, d2x, logw, ds, d2s = _envelope_parts(spec, r)
    p, dp, d2p = _poly_parts(spec, n_max, x)
    log_a = np.array([log_normalization(spec, n) for n in range(n_max + 1)])
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        env = np.exp(log_a[:, None] + logw[None, :])
        first = ds * p + dp
        second = d2x * first + dx ** 2 * ((ds ** 2 + d2s) * p + 2 * ds * dp + d2p)
        phi = env * p
        dphi = env * dx * first
        d2phi = env * second
    # where the envelope has underflowed the products are exactly zero
    dead = env == 0
    for arr in (phi, dphi, d2phi):
        arr[dead | ~np.isfinite(arr)] = 0.0
    return phi, dphi, d2phi


def basis_eval(spec, n, r):
    """Basis function ``phi_n(r)``, computed as ``sign * exp(log|phi_n|)``."""
    if int(n) != n or n < 0:
        raise DomainError(f"basis index must be a nonnegative integer, got {n}")
    n = int(n)
    scalar = np.ndim(r) == 0
    r = spec.map._check_r(np.atleast_1d(np.asarray(r, dtype=float)))
    x, _, _, logw, _, _ = _envelope_parts(spec, r)
    with np.errstate(all="ignore"):
        p = orthopoly.eval_all(spec.kind.family, n, x)[n]
        logphi = log_normalization(spec, n) + logw + np.log(np.abs(p))
        out = np.sign(p) * np.exp(logphi)
    out[~np.isfinite(out)] = 0.0
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class BoundaryReport:
    """Outcome of :func:`boundary_check`."""

    n: int
    max_magnitude: float
    left: np.ndarray
    right: np.ndarray
    passed: bool


def boundary_check(spec, n, tol=1e-10):
    """Evaluate ``phi_n`` on geometric sequences approaching both ends of the domain.

    The report passes when the magnitudes at the outermost points are below
    ``tol`` and the sequences shrink toward each boundary.  A :class:`Power`
    map with ``mu < 0`` is handled automatically since only ``r`` is sampled.
    """
    lam = spec.lam
    steps = np.geomspace(1.0, 1e-12, 13)
    # far enough for the algebraic tail of a power map with mu < 0
    far = np.geomspace(1.0, 1e12, 13)
    if spec.map.full_line:
        left_r = -far / lam
    else:
        left_r = steps / lam
    right_r = far / lam
    left = np.abs(basis_eval(spec, n, left_r))
    right = np.abs(basis_eval(spec, n, right_r))
    ends = max(left[-1], right[-1])
    shrinking = left[-1] <= left[:4].max() + tol and right[-1] <= right[:4].max() + tol
    return BoundaryReport(int(n), float(ends), left, right, bool(ends < tol and shrinking))
