"""Density (weight) functions of the deformed Jacobi polynomials.

The recursion coefficients of a polynomial family define a symmetric
tridiagonal (Jacobi) matrix.  Its eigenvalues and squared first eigenvector
components are the nodes and weights of the Gauss rule for the orthogonality
measure; a Gaussian kernel estimate turns that discrete measure into a curve.
"""

from dataclasses import dataclass, field
import csv
import io
import math
import os
import tempfile

import numpy as np

from .coeffs import DeformedJacobi
from .eigen import tridiagonal_ql
from .errors import DomainError, ParameterDomainError
from .tridiag import TridiagonalRep

FORMS = {"hulthen2": "weighted", "hulthen1": "shifted"}
_CUT = math.exp(-4.5)
MAX_POINTS = 2_000_000


@dataclass(frozen=True)
class DensityEstimate:
    """Gauss rule plus smoothed density curve.

    Attributes
    ----------
    nodes : ndarray
        Eigenvalues of the truncated Jacobi matrix, increasing.
    weights : ndarray
        Squared first eigenvector components, summing to one.
    y, rho : ndarray
        Smoothed curve on a uniform grid; ``trapezoid(rho, y) == 1``.
    meta : dict
        ``mu``, ``nu``, ``gamma``, ``N``, ``bandwidth``, ``form``, ``mass``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    y: np.ndarray
    rho: np.ndarray
    meta: dict = field(default_factory=dict)


def jacobi_matrix(form, mu, nu, gamma, N):
    """Symmetric Jacobi matrix of a deformed Jacobi recursion.

    Parameters
    ----------
    form : {"hulthen2", "hulthen1"}
        ``"hulthen2"``: factors ``(2n+mu+nu+2)**2/4 + gamma`` on the Jacobi
        coefficients; ``"hulthen1"``: ``gamma (2n+mu+nu+1)**2/4`` added to the
        diagonal.  ``gamma = 0`` in the second form is the Jacobi recursion in
        ``(1+x)/2``.
    mu, nu : float
        Greater than -1.
    gamma : float
    N : int
        Matrix size, at least 1.

    Returns
    -------
    TridiagonalRep
        ``diag`` holds ``A_n`` and ``offdiag`` holds ``sqrt(c_{n+1} d_n)``.
    """
    if form not in FORMS:
        raise ParameterDomainError(f"unknown recursion form {form!r}; use one of {sorted(FORMS)}")
    if not (mu > -1 and nu > -1):
        raise ParameterDomainError(f"need mu, nu > -1, got ({mu}, {nu})")
    if int(N) != N or N < 1:
        raise DomainError(f"matrix size must be a positive integer, got {N}")
    N = int(N)
    fam = DeformedJacobi(mu, nu, gamma, FORMS[form])
    A, c, d = fam.coefficients(N + 1)
    prod = c[1:N] * d[:N - 1]
    if np.any(~(prod > 0)):
        bad = int(np.argmin(prod > 0))
        raise DomainError(f"c_(n+1) d_n must be positive for symmetrisation; fails at n={bad}")
    return TridiagonalRep(_ro(A[:N]), _ro(np.sqrt(prod)), 0.0, 1.0, None, None, 0.0, None,
                          {"form": form, "mu": mu, "nu": nu, "gamma": gamma})


def _ro(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _twisted_weights(diag, off, nodes):
    # First eigenvector components from twisted factorizations of T - y_k:
    # forward pivots D+ and backward pivots D-, twist where |gamma_k| is smallest,
    # then ratios outward from the twist.  Each component keeps relative
    # accuracy, so weights far below machine epsilon survive.  Logs avoid underflow.
    N = len(diag)
    K = len(nodes)
    if N == 1:
        return np.ones(K)
    tiny = np.finfo(float).tiny * 1e10
    shift = diag[None, :] - nodes[:, None]
    dp = np.empty((K, N))
    dm = np.empty((K, N))
    dp[:, 0] = shift[:, 0]
    for n in range(1, N):
        prev = np.where(dp[:, n - 1] == 0, tiny, dp[:, n - 1])
        dp[:, n] = shift[:, n] - off[n - 1] ** 2 / prev
    dm[:, N - 1] = shift[:, N - 1]
    for n in range(N - 2, -1, -1):
        nxt = np.where(dm[:, n + 1] == 0, tiny, dm[:, n + 1])
        dm[:, n] = shift[:, n] - off[n] ** 2 / nxt
    gam = dp + dm - shift
    twist = np.argmin(np.abs(gam), axis=1)
    dp = np.where(dp == 0, tiny, dp)
    dm = np.where(dm == 0, tiny, dm)
    logv = np.zeros((K, N))
    for n in range(N - 2, -1, -1):
        # below the twist: v_n = -b_n v_{n+1} / D+_n
        step = np.log(np.abs(off[n])) - np.log(np.abs(dp[:, n]))
        logv[:, n] = np.where(n < twist, logv[:, n + 1] + step, 0.0)
    for n in range(1, N):
        # above the twist: v_n = -b_{n-1} v_{n-1} / D-_n
        step = np.log(np.abs(off[n - 1])) - np.log(np.abs(dm[:, n]))
        logv[:, n] = np.where(n > twist, logv[:, n - 1] + step, logv[:, n])
    top = logv.max(axis=1)
    log_norm = top + 0.5 * np.log(np.sum(np.exp(2 * (logv - top[:, None])), axis=1))
    return np.exp(2 * (logv[:, 0] - log_norm))


def quadrature_from_matrix(J):
    """Gauss nodes and weights of a Jacobi matrix (Golub-Welsch).

    Weights are the squared first components of the normalised eigenvectors.
    They come from a twisted factorization of ``J - y_k`` per node, which
    keeps tiny components to full relative accuracy even when the matrix is
    strongly diagonally dominant; the weights are rescaled to sum to one.

    Raises
    ------
    DomainError
        When an off-diagonal entry is not positive.
    """
    diag = np.asarray(J.diag, dtype=float)
    off = np.asarray(J.offdiag, dtype=float)
    if getattr(J, "y", 0.0) != 0.0:
        diag = diag - J.y
    if off.size and not np.all(off > 0):
        raise DomainError("Jacobi matrix needs strictly positive off-diagonal entries")
    nodes = tridiagonal_ql(diag, off)
    if np.any(np.diff(nodes) <= 0):
        raise DomainError("Jacobi matrix eigenvalues are not simple")
    w = _twisted_weights(diag, off, nodes)
    return nodes, w / w.sum()


def eigenvector_weights(J):
    """Squared first eigenvector components straight from QL (cross-check path)."""
    nodes, vecs = tridiagonal_ql(np.asarray(J.diag) - J.y, J.offdiag, vectors=True)
    w = vecs[0] ** 2
    return nodes, w / w.sum()


def matrix_moments(J, k_max, scale=None):
    """``e_0^T (J/scale)^k e_0`` for ``k = 0..k_max``.

    ``scale`` defaults to the largest absolute eigenvalue bound
    ``max_n |a_n| + |b_{n-1}| + |b_n|`` so that high powers stay finite.
    """
    diag = np.asarray(J.diag, dtype=float) - J.y
    off = np.asarray(J.offdiag, dtype=float)
    if scale is None:
        scale = matrix_scale(J)
    d, o = diag / scale, off / scale
    v = np.zeros(len(d))
    v[0] = 1.0
    out = np.empty(k_max + 1)
    for k in range(k_max + 1):
        out[k] = v[0]
        nv = d * v
        nv[:-1] += o * v[1:]
        nv[1:] += o * v[:-1]
        v = nv
    return out


def matrix_scale(J):
    diag = np.abs(np.asarray(J.diag, dtype=float) - J.y)
    off = np.abs(np.asarray(J.offdiag, dtype=float))
    pad = np.zeros(len(diag))
    row = diag.copy()
    if off.size:
        pad[:-1] += off
        pad[1:] += off
    return float(np.max(row + pad)) or 1.0


def quadrature_moments(nodes, weights, k_max, scale=1.0):
    """``sum_k w_k (y_k/scale)**j`` for ``j = 0..k_max``, with the companion ``sum w |y|**j``."""
    t = np.asarray(nodes) / scale
    powers = t[None, :] ** np.arange(k_max + 1)[:, None]
    return powers @ weights, np.abs(powers) @ weights


def silverman_bandwidth(nodes, weights):
    """Silverman rule ``0.9 min(sigma, IQR/1.34) n**(-1/5)`` with weighted spread, ``n`` nodes."""
    nodes = np.asarray(nodes, dtype=float)
    w = np.asarray(weights, dtype=float)
    w = w / w.sum()
    mean = w @ nodes
    sigma = math.sqrt(max(w @ (nodes - mean) ** 2, 0.0))
    cdf = np.cumsum(w)
    q1 = nodes[min(np.searchsorted(cdf, 0.25), len(nodes) - 1)]
    q3 = nodes[min(np.searchsorted(cdf, 0.75), len(nodes) - 1)]
    spread = min(sigma, (q3 - q1) / 1.34) if q3 > q1 else sigma
    h = 0.9 * spread * len(nodes) ** (-0.2)
    if not h > 0:
        h = 1.0 if sigma == 0 else sigma
    return float(h)


def smooth_density(nodes, weights, bandwidth=None, points=2001):
    """Gaussian kernel estimate of the measure ``sum w_k delta(y - y_k)``.

    The kernel is a Gaussian lowered by its value at three bandwidths and cut
    there, so it is continuous, symmetric about its node and contained in the
    grid (the node range padded by three bandwidths).  The first moment of the
    curve therefore matches ``sum w_k y_k``.  The curve is rescaled to unit
    trapezoidal integral; the grid has at least ``points`` samples and at most
    :data:`MAX_POINTS`.

    Returns
    -------
    y, rho : ndarray
    bandwidth : float
    """
    nodes = np.asarray(nodes, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if bandwidth is None:
        bandwidth = silverman_bandwidth(nodes, weights)
    if not bandwidth > 0:
        raise DomainError(f"bandwidth must be positive, got {bandwidth}")
    lo, hi = nodes.min() - 3 * bandwidth, nodes.max() + 3 * bandwidth
    # twenty grid steps per bandwidth so the trapezoid rule resolves each kernel
    points = min(max(int(points), int(math.ceil(20 * (hi - lo) / bandwidth)) + 1), MAX_POINTS)
    y = np.linspace(lo, hi, points)
    rho = np.zeros(points)
    for start in range(0, points, 4096):
        z = (y[start:start + 4096, None] - nodes[None, :]) / bandwidth
        rho[start:start + 4096] = np.where(np.abs(z) <= 3, np.exp(-0.5 * z * z) - _CUT, 0.0) @ weights
    rho = rho / np.trapezoid(rho, y)
    return y, rho, float(bandwidth)


def estimate_density(mu, nu, gamma, N, form="hulthen2", bandwidth=None, points=2001):
    """Full pipeline: Jacobi matrix, Gauss rule, smoothed curve."""
    J = jacobi_matrix(form, mu, nu, gamma, N)
    nodes, weights = quadrature_from_matrix(J)
    y, rho, h = smooth_density(nodes, weights, bandwidth, points)
    meta = {"mu": mu, "nu": nu, "gamma": gamma, "N": int(N), "bandwidth": h, "form": form,
            "mass": "unit"}
    return DensityEstimate(nodes, weights, y, rho, meta)


def density_csv(est):
    """CSV text with ``#`` header lines recording the parameters, then ``y,rho`` rows."""
    buf = io.StringIO()
    m = est.meta
    for key in ("form", "mu", "nu", "gamma", "N", "bandwidth", "mass"):
        value = m[key]
        buf.write(f"# {key}={_fmt(value) if isinstance(value, float) else value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["y", "rho"])
    for a, b in zip(est.y, est.rho):
        writer.writerow([_fmt(a), _fmt(b)])
    return buf.getvalue()


def _fmt(v):
    return format(float(v), ".17g")


def write_atomic(path, text):
    """Write ``text`` to ``path`` through a temporary file and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_density_csv(est, path):
    write_atomic(path, density_csv(est))
