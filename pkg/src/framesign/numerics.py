"""Dense symmetric eigenproblems, PSD square roots and a tridiagonal QL solver."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSize, NoConvergence, NotPSD, NotSymmetric

MAX_DIM = 5000
SYMMETRY_TOL = 1e-12
PSD_CLAMP = 1e-10


@dataclass(frozen=True)
class EigenPair:
    values: np.ndarray  # ascending
    vectors: np.ndarray  # columns orthonormal


def check_symmetric(M):
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise InvalidSize(f"expected a nonempty square matrix, got shape {M.shape}")
    if M.shape[0] > MAX_DIM:
        raise InvalidSize(f"dimension {M.shape[0]} exceeds {MAX_DIM}")
    scale = np.abs(M).max()
    if np.abs(M - M.T).max() > SYMMETRY_TOL * scale:
        raise NotSymmetric("matrix is not symmetric to 1e-12 relative")
    return M


def symmetric_eigen(M):
    """Full spectral decomposition of a real symmetric matrix.

    Backed by LAPACK (``numpy.linalg.eigh``); only the lower triangle is read.
    """
    M = check_symmetric(M)
    try:
        values, vectors = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return EigenPair(values, vectors)


def symmetric_eigvals(M):
    M = check_symmetric(M)
    try:
        return np.linalg.eigvalsh(M)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc


def psd_sqrt(M):
    """Symmetric square root of a numerically positive semidefinite matrix.

    Eigenvalues in ``[-1e-10, 0)`` are clamped to zero; anything more negative
    raises :class:`NotPSD`.
    """
    eig = symmetric_eigen(M)
    if eig.values[0] < -PSD_CLAMP:
        raise NotPSD(f"min eigenvalue {eig.values[0]:.3e} < -{PSD_CLAMP}")
    root = np.sqrt(np.clip(eig.values, 0.0, None))
    R = (eig.vectors * root) @ eig.vectors.T
    return (R + R.T) / 2


def tridiagonal_ql(diag, off, max_sweeps=60):
    """Eigenvalues and first eigenvector components of a symmetric tridiagonal matrix.

    Implicit QL with Wilkinson shifts, rotating only the first row of the
    eigenvector matrix (the Golub-Welsch setup). ``off[i]`` couples ``i`` and
    ``i + 1``. Tiny first components keep their relative accuracy far better
    than when extracted from a full dense eigensolve, which is what Gauss
    weights need.

    Returns ``(values, first)`` with ``values`` ascending.
    """
    d = np.array(diag, dtype=np.float64)
    n = len(d)
    if n == 0:
        raise InvalidSize("empty matrix")
    if len(off) != n - 1:
        raise InvalidSize(f"need {n - 1} off-diagonal entries, got {len(off)}")
    e = np.zeros(n)
    e[: n - 1] = off
    z = np.zeros(n)
    z[0] = 1.0
    eps = np.finfo(np.float64).eps
    d = d.tolist()
    e = e.tolist()
    z = z.tolist()

    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1 and abs(e[m]) > eps * (abs(d[m]) + abs(d[m + 1])):
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise NoConvergence(f"QL did not converge for eigenvalue {l}")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            deflated = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                bb = c * e[i]
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
                r = (d[i] - g) * s + 2.0 * c * bb
                p = s * r
                d[i + 1] = g + p
                g = c * r - bb
                f = z[i + 1]
                z[i + 1] = s * z[i] + c * f
                z[i] = c * z[i] - s * f
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    d = np.array(d)
    z = np.array(z)
    order = np.argsort(d, kind="stable")
    return d[order], z[order]
