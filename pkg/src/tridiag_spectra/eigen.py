"""Implicit-shift QL iteration for symmetric tridiagonal matrices.

Used for Gauss rules from Jacobi matrices and for the reduced generalized
eigenproblem; LAPACK is only used as an independent cross-check in tests.
"""

import math

import numpy as np

from .errors import AccuracyError


def tridiagonal_ql(diag, off, vectors=False, max_sweeps=60):
    """Eigenvalues (ascending) and optionally eigenvectors of a symmetric tridiagonal matrix.

    Parameters
    ----------
    diag : array_like, shape (N,)
    off : array_like, shape (N-1,)
    vectors : bool
        Also return the orthonormal eigenvectors as columns.
    max_sweeps : int
        Iteration cap per eigenvalue.

    Returns
    -------
    w : ndarray
    z : ndarray, only when ``vectors`` is true
    """
    d = np.array(diag, dtype=float)
    N = d.size
    e = np.zeros(N)
    e[:N - 1] = np.asarray(off, dtype=float)
    z = np.eye(N) if vectors else None
    for l in range(N):
        it = 0
        while True:
            m = l
            while m < N - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= np.finfo(float).eps * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_sweeps:
                raise AccuracyError(f"QL iteration did not converge for eigenvalue {l}")
            # Wilkinson-style shift from the leading 2x2 block
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if z is not None:
                    zi, zi1 = z[:, i].copy(), z[:, i + 1].copy()
                    z[:, i + 1] = s * zi + c * zi1
                    z[:, i] = c * zi - s * zi1
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    order = np.argsort(d)
    if vectors:
        return d[order], z[:, order]
    return d[order]
