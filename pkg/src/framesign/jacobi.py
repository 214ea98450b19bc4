"""Jacobi matrices, orthonormal polynomials and Mate-Nevai pointwise bounds.

Orthonormal polynomials satisfy the three-term recurrence

    x p_n(x) = a_{n+1} p_{n+1}(x) + b_n p_n(x) + a_n p_{n-1}(x),
    p_0 = 1, p_{-1} = 0,

so ``p_0 = 1`` normalizes the orthogonality measure to total mass one.

With ``a_n = sqrt(b_n b_{n-1}) / (2B)`` and ``0 < B < 1`` (the Szwarc choice)
the rescaled values ``A_n = p_n(x) sqrt(b_n - x)`` satisfy

    0 = Lam_{n+1} A_{n+1} + B A_n + Lam_n A_{n-1},
    Lam_n = B a_n / sqrt((b_n - x)(b_{n-1} - x)),

and ``Delta_n = A_n^2 - A_{n-1} A_{n+1}`` converges to a positive limit. That
bounds ``b_n p_n(x)^2`` uniformly in ``n``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadParameter,
    InsufficientQuadrature,
    InvalidSize,
    OverflowDetected,
    RangeTooShort,
    ValidationError,
)
from .numerics import tridiagonal_ql

OVERFLOW_LIMIT = 1e300
WINDOW_FRACTION = 0.1
CONVERGENCE_TOL = 1e-4
MIN_TRACE = 100
BURN_IN = 10


@dataclass(frozen=True, eq=False)
class RecurrenceCoefficients:
    """Diagonal ``b[0..L-1]`` and off-diagonal ``a[1..L-1]`` of a Jacobi matrix.

    ``a[0]`` is an unused placeholder (stored as 0) so that ``a[n]`` matches
    the usual 1-based indexing.
    """

    b: np.ndarray
    a: np.ndarray
    B_param: float | None = None
    warnings: tuple = field(default=())

    def __post_init__(self):
        b = np.asarray(self.b, dtype=np.float64)
        a = np.asarray(self.a, dtype=np.float64)
        if b.ndim != 1 or a.shape != b.shape or len(b) < 1:
            raise InvalidSize("a and b must be 1-D of equal positive length")
        if np.any(a[1:] <= 0):
            raise ValidationError("off-diagonal coefficients must be positive")
        a = a.copy()
        a[0] = 0.0
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a", a)

    @property
    def length(self):
        return len(self.b)

    def truncated_matrix(self, N):
        """Dense ``N x N`` truncation of the Jacobi matrix."""
        J = np.diag(self.b[:N])
        off = self.a[1:N]
        return J + np.diag(off, 1) + np.diag(off, -1)


def szwarc_coefficients(b, B_param):
    """Off-diagonals ``a_n = sqrt(b_n b_{n-1}) / (2B)`` for a monotone positive ``b``."""
    b = np.asarray(b, dtype=np.float64)
    if not 0 < B_param < 1:
        raise BadParameter(f"B must lie in (0, 1), got {B_param}")
    if b.ndim != 1 or len(b) < 2:
        raise InvalidSize("need at least two diagonal entries")
    if np.any(b <= 0):
        raise BadParameter("diagonal must be strictly positive")
    if np.any(np.diff(b) < 0):
        raise BadParameter("diagonal must be monotone nondecreasing")
    a = np.zeros_like(b)
    a[1:] = np.sqrt(b[1:] * b[:-1]) / (2 * B_param)
    warnings = ()
    if b[-1] <= b[0]:
        warnings = ("diagonal does not grow; b_n -> infinity is not satisfied",)
    return RecurrenceCoefficients(b, a, float(B_param), warnings)


def diagonal_sequence(kind, length):
    """Named diagonals: ``linear`` (n+1), ``nlog`` ((n+2) log(n+2)), ``power:g`` ((n+1)^g)."""
    n = np.arange(length, dtype=np.float64)
    if kind == "linear":
        return n + 1
    if kind == "nlog":
        return (n + 2) * np.log(n + 2)
    if kind.startswith("power:"):
        g = float(kind.split(":", 1)[1])
        if not 0 < g <= 1:
            raise BadParameter("power exponent must lie in (0, 1] so that sum 1/b_n diverges")
        return (n + 1) ** g
    raise BadParameter(f"unknown diagonal kind {kind!r}")


def eval_polys(rc, x, n_max):
    """Values ``p_0(x) .. p_{n_max}(x)`` by forward recurrence.

    ``x`` may be a scalar (result shape ``(n_max + 1,)``) or an array (result
    shape ``(n_max + 1, len(x))``). Raises :class:`OverflowDetected` once any
    value exceeds 1e300, which happens far outside the spectrum.
    """
    if not 0 <= n_max < rc.length:
        raise InvalidSize(f"need 0 <= n_max < {rc.length}, got {n_max}")
    x = np.asarray(x, dtype=np.float64)
    p = np.zeros((n_max + 1,) + x.shape)
    p[0] = 1.0
    b, a = rc.b, rc.a
    with np.errstate(over="ignore", invalid="ignore"):
        if n_max >= 1:
            p[1] = (x - b[0]) / a[1]
        for n in range(1, n_max):
            p[n + 1] = ((x - b[n]) * p[n] - a[n] * p[n - 1]) / a[n + 1]
    bad = ~np.isfinite(p) | (np.abs(p) > OVERFLOW_LIMIT)
    if bad.any():
        n_bad = int(np.argmax(bad.reshape(n_max + 1, -1).any(axis=1)))
        raise OverflowDetected(f"|p_n| exceeded {OVERFLOW_LIMIT:g} at n = {n_bad}")
    return p


def three_term_residual(rc, x, n_max):
    """Largest scaled residual of the recurrence over ``n < n_max``."""
    p = eval_polys(rc, x, n_max)
    b, a = rc.b, rc.a
    worst = 0.0
    for n in range(n_max):
        lhs = x * p[n]
        t1 = a[n + 1] * p[n + 1]
        t2 = b[n] * p[n]
        t3 = a[n] * p[n - 1] if n >= 1 else 0.0
        scale = max(abs(t1), abs(t2), abs(t3), 1.0)
        worst = max(worst, abs(lhs - t1 - t2 - t3) / scale)
    return worst


@dataclass(frozen=True)
class RegularityReport:
    length: int
    carleman_sum: float
    variation: dict
    last_b_ratio: float
    last_a2_over_bb: float
    target_a2_over_bb: float | None
    warnings: tuple


def regularity_report(rc):
    """Finite-range diagnostics for essential self-adjointness and regularity.

    * ``carleman_sum``: partial sum of ``1 / a_n`` up to the stored length,
    * ``variation``: total variation of ``a_n^2/(b_n b_{n-1})``,
      ``(b_n + b_{n-1})/a_n^2`` and ``1/a_n^2``,
    * last observed ``b_n / b_{n-1}`` and ``a_n^2 / (b_n b_{n-1})`` next to
      the target ``1 / (4 B^2)``.
    """
    if rc.length < 10:
        raise InvalidSize("need at least 10 coefficients")
    b, a = rc.b, rc.a
    a1 = a[1:]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = a1**2 / (b[1:] * b[:-1])
        sums = (b[1:] + b[:-1]) / a1**2
    inv = 1 / a1**2

    def tv(s):
        return float(np.abs(np.diff(s)).sum())

    return RegularityReport(
        length=rc.length,
        carleman_sum=float(np.sum(1 / a1)),
        variation={
            "a2_over_bb": tv(ratio),
            "bsum_over_a2": tv(sums),
            "inv_a2": tv(inv),
        },
        last_b_ratio=float(b[-1] / b[-2]),
        last_a2_over_bb=float(ratio[-1]),
        target_a2_over_bb=None if rc.B_param is None else 1 / (4 * rc.B_param**2),
        warnings=rc.warnings,
    )


def start_index(rc, x):
    """Smallest ``N >= 1`` with ``b_n - x >= max(1, 0.01 b_n)`` for all ``n >= N``."""
    ok = (rc.b - x) >= np.maximum(1.0, 0.01 * rc.b)
    ok[0] = False
    bad = np.flatnonzero(~ok)
    N = int(bad[-1]) + 1
    return N


@dataclass(frozen=True, eq=False)
class MateNevaiTrace:
    """Rescaled polynomial values at a fixed ``x``.

    ``A_seq[i]`` is ``A_{N+i}`` for ``N <= n <= n_max``; ``lambda_seq[i]`` is
    ``Lam_{N+1+i}`` (up to ``Lam_{n_max}``); ``delta_seq[i]`` is
    ``Delta_{N+1+i}`` (up to ``Delta_{n_max-1}``).
    """

    x: float
    start_index: int
    n_max: int
    B_param: float
    lambda_seq: np.ndarray
    A_seq: np.ndarray
    delta_seq: np.ndarray
    f_estimate: float
    converged: bool
    window_deviation: float
    window_fraction: float = WINDOW_FRACTION
    tolerance: float = CONVERGENCE_TOL

    def n_of_A(self):
        return np.arange(self.start_index, self.n_max + 1)

    def rows(self):
        """Rows ``(n, Lam_n, A_n, Delta_n)``; NaN where a quantity is undefined."""
        N = self.start_index
        for i, A in enumerate(self.A_seq):
            n = N + i
            lam = self.lambda_seq[n - N - 1] if n > N else math.nan
            delta = self.delta_seq[n - N - 1] if N < n < self.n_max else math.nan
            yield n, lam, A, delta


def mate_nevai(rc, x, n_max):
    """Trace ``Lam_n``, ``A_n`` and ``Delta_n`` at ``x`` and certify convergence.

    ``converged`` holds when the last 10% of ``Delta_n`` stays within 1e-4
    (relative) of its mean and the mean is positive.
    """
    if rc.B_param is None:
        raise BadParameter("Mate-Nevai rescaling needs the parameter B")
    if not 0 <= n_max < rc.length:
        raise InvalidSize(f"need n_max < {rc.length}")
    x = float(x)
    N = start_index(rc, x)
    if n_max - N + 1 < MIN_TRACE:
        raise RangeTooShort(f"only {max(n_max - N + 1, 0)} indices with b_n well above x = {x}")
    p = eval_polys(rc, x, n_max)
    n = np.arange(N, n_max + 1)
    s = np.sqrt(rc.b[n] - x)
    A = p[N:] * s
    n_lam = np.arange(N + 1, n_max + 1)
    lam = rc.B_param * rc.a[n_lam] / np.sqrt((rc.b[n_lam] - x) * (rc.b[n_lam - 1] - x))
    with np.errstate(over="ignore", invalid="ignore"):
        delta = A[1:-1] ** 2 - A[:-2] * A[2:]
    if not np.all(np.isfinite(delta)):
        raise OverflowDetected(f"Delta_n overflowed; x = {x} is likely outside the spectrum")
    w = max(1, int(math.ceil(WINDOW_FRACTION * len(delta))))
    window = delta[-w:]
    f = float(window.mean())
    dev = float(np.abs(window - f).max())
    converged = bool(f > 0 and dev <= CONVERGENCE_TOL * abs(f))
    return MateNevaiTrace(
        x=x,
        start_index=N,
        n_max=n_max,
        B_param=rc.B_param,
        lambda_seq=lam,
        A_seq=A,
        delta_seq=delta,
        f_estimate=f,
        converged=converged,
        window_deviation=dev / abs(f) if f != 0 else math.inf,
    )


def _aligned(trace):
    """Arrays indexed by ``n = N+1 .. n_max-1``: A_{n-1}, A_n, A_{n+1}, Lam_n, Lam_{n+1}, Delta_n."""
    A = trace.A_seq
    lam = trace.lambda_seq
    return A[:-2], A[1:-1], A[2:], lam[:-1], lam[1:], trace.delta_seq


@dataclass(frozen=True)
class IdentityReport:
    """Maximal relative residuals of the algebraic identities along a trace."""

    recurrence: float  # Lam_{n+1} A_{n+1} + B A_n + Lam_n A_{n-1} = 0
    lambda_algebra: float  # B^2 / Lam_n^2 expanded in b, a, x
    square_form_1: float  # Delta_n = (A_n + B/(2Lam_n) A_{n+1})^2 + (...) A_{n+1}^2
    square_form_2: float  # Delta_n = Lam_{n+1}/Lam_n (A_{n+1} + ...)^2 + (...) A_n^2
    increment: float  # Delta_{n+1} - Delta_n expanded
    bound_next: float  # max A_{n+1}^2 / Delta_n beyond burn-in
    bound_same: float  # max A_n^2 / Delta_n beyond burn-in


def identity_report(trace, rc):
    B = trace.B_param
    x = trace.x
    Am, A0, Ap, L0, Lp, D = _aligned(trace)

    rec = np.abs(Lp * Ap + B * A0 + L0 * Am) / np.maximum.reduce([np.abs(Am), np.abs(A0), np.abs(Ap)])

    n = np.arange(trace.start_index + 1, trace.n_max + 1)
    bn, bm, an = rc.b[n], rc.b[n - 1], rc.a[n]
    lhs = B**2 / trace.lambda_seq**2
    rhs = bn * bm / an**2 - (bn + bm) * x / an**2 + x**2 / an**2
    lam_alg = np.abs(lhs - rhs) / np.abs(lhs)

    # The coefficient of A_{n+1}^2 carries Lam_n (same index as the square);
    # with Lam_{n-1} there the identity only holds in the limit.
    f1 = (A0 + B / (2 * L0) * Ap) ** 2 + (Lp / L0 - B**2 / (4 * L0**2)) * Ap**2
    f2 = Lp / L0 * (Ap + B / (2 * Lp) * A0) ** 2 + (1 - B**2 / (4 * L0 * Lp)) * A0**2
    sq1 = np.abs(f1 - D) / np.abs(D)
    sq2 = np.abs(f2 - D) / np.abs(D)

    # Delta_{n+1} - Delta_n, needs Lam_{n+2}: n = N+1 .. n_max-2
    lam = trace.lambda_seq
    L0i, L1i, L2i = lam[:-2], lam[1:-1], lam[2:]
    A0i, A1i = A0[:-1], Ap[:-1]
    inc = (1 - L1i / L0i) * A1i**2 + B * (1 / L2i - 1 / L0i) * A0i * A1i + (L1i / L2i - 1) * A0i**2
    dd = D[1:] - D[:-1]
    incr = np.abs(inc - dd) / np.abs(D[:-1])

    burn = slice(BURN_IN, None)
    return IdentityReport(
        recurrence=float(rec.max()),
        lambda_algebra=float(lam_alg.max()),
        square_form_1=float(sq1.max()),
        square_form_2=float(sq2.max()),
        increment=float(incr.max()),
        bound_next=float((Ap[burn] ** 2 / D[burn]).max()),
        bound_same=float((A0[burn] ** 2 / D[burn]).max()),
    )


@dataclass(frozen=True)
class DeltaRecursionReport:
    max_residual: float
    c_emp: float
    eps_sum: float
    all_positive: bool
    min_delta: float


def delta_recursion_check(trace, rc):
    """Check ``|Delta_{n+1} - Delta_n| <= C eps_n Delta_n`` along a trace.

    ``eps_n = |Lam_{n+1} - Lam_n| + |Lam_{n+1} - Lam_{n+2}|``. The constant
    ``C`` is estimated as the largest observed ratio over indices with
    ``eps_n > 1e-14``; ``max_residual`` is the largest excess of
    ``|Delta_{n+1} - Delta_n|`` over ``C eps_n Delta_n`` (nonzero only where
    ``eps_n`` vanishes but ``Delta`` still moves). Also reports whether
    ``Delta_n > 0`` for all ``n >= N + 10``.
    """
    lam = trace.lambda_seq
    D = trace.delta_seq
    eps = np.abs(lam[1:-1] - lam[:-2]) + np.abs(lam[1:-1] - lam[2:])
    dd = np.abs(D[1:] - D[:-1])
    Dn = D[:-1]
    active = eps > 1e-14
    c_emp = float((dd[active] / (eps[active] * Dn[active])).max()) if active.any() else 0.0
    resid = np.clip(dd - c_emp * eps * Dn, 0.0, None)
    tail = D[max(0, BURN_IN - 1) :]
    return DeltaRecursionReport(
        max_residual=float(resid.max()),
        c_emp=c_emp,
        eps_sum=float(eps.sum()),
        all_positive=bool(np.all(tail > 0)),
        min_delta=float(tail.min()),
    )


@dataclass(frozen=True)
class Envelope:
    xs: np.ndarray
    c_hat: np.ndarray
    tail_max: np.ndarray
    n_min: int
    n_max: int


def bound_envelope(rc, xs, n_max, n_min=None):
    """Envelope ``C_hat(x) = max_{n_min <= n <= n_max} b_n p_n(x)^2``.

    ``n_min`` defaults to the Mate-Nevai start index at each ``x``.
    ``tail_max`` is the same maximum over the last half of the index range,
    for checking that the envelope has stabilized.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    p = eval_polys(rc, xs, n_max)
    e = rc.b[: n_max + 1, None] * p**2
    c_hat = np.empty(len(xs))
    tail = np.empty(len(xs))
    for i, x in enumerate(xs):
        lo = start_index(rc, x) if n_min is None else n_min
        if lo > n_max:
            raise InvalidSize(f"empty index range at x = {x}")
        c_hat[i] = e[lo:, i].max()
        tail[i] = e[(lo + n_max + 1) // 2 :, i].max()
    return Envelope(xs, c_hat, tail, -1 if n_min is None else n_min, n_max)


@dataclass(frozen=True)
class SpectralQuadrature:
    nodes: np.ndarray
    weights: np.ndarray
    truncation: int


def spectral_quadrature(rc, N):
    """Gauss rule of the truncated Jacobi matrix (Golub-Welsch).

    Nodes are the eigenvalues of the ``N x N`` truncation, weights the squared
    first eigenvector components. Weights far out in the tail may underflow
    to zero.
    """
    if not 1 <= N <= rc.length:
        raise InvalidSize(f"need 1 <= N <= {rc.length}")
    nodes, first = tridiagonal_ql(rc.b[:N], rc.a[1:N])
    return SpectralQuadrature(nodes, first**2, N)


def orthonormality_defect(rc, quad, n_max):
    """``max_{i,j <= n_max} |sum_s w_s p_i(t_s) p_j(t_s) - delta_ij|``."""
    if not 2 * n_max + 1 < quad.truncation:
        raise InsufficientQuadrature(
            f"need 2*n_max + 1 < N for exact integration, got n_max={n_max}, N={quad.truncation}"
        )
    keep = quad.weights > 0
    p = eval_polys(rc, quad.nodes[keep], n_max)
    G = (p * quad.weights[keep]) @ p.T
    return float(np.abs(G - np.eye(n_max + 1)).max())


def discrete_stieltjes(nodes, weights, n):
    """Recurrence coefficients of the discrete measure ``sum_s weights_s delta_{nodes_s}``.

    Returns ``(rc, mass)``; the orthonormal polynomials of the discrete
    measure are ``eval_polys(rc, x, k) / sqrt(mass)``. Each step is
    reorthogonalized against all previous vectors.
    """
    nodes = np.asarray(nodes, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    if n > len(nodes):
        raise InvalidSize(f"a discrete measure on {len(nodes)} points supports at most {len(nodes)} polynomials")
    mass = float(w.sum())
    Q = np.zeros((n, len(nodes)))
    b = np.zeros(n)
    a = np.zeros(n)
    q = np.full(len(nodes), 1 / math.sqrt(mass))
    prev = np.zeros(len(nodes))
    for k in range(n):
        Q[k] = q
        b[k] = np.dot(w * nodes * q, q)
        if k == n - 1:
            break
        r = (nodes - b[k]) * q - (a[k] * prev if k else 0.0)
        r -= Q[: k + 1].T @ (Q[: k + 1] @ (w * r))
        a[k + 1] = math.sqrt(np.dot(w * r, r))
        prev, q = q, r / a[k + 1]
    return RecurrenceCoefficients(b, a), mass


def laguerre_coefficients(length):
    """Orthonormal Laguerre polynomials for ``e^{-x} dx``: ``b_k = 2k+1``, ``a_k = k``.

    With positive ``a_k`` the recurrence yields ``(-1)^k L_k``.
    """
    k = np.arange(length, dtype=np.float64)
    return RecurrenceCoefficients(2 * k + 1, k.copy())


def hermite_coefficients(length):
    """Orthonormal Hermite polynomials for ``e^{-x^2} dx / sqrt(pi)``."""
    k = np.arange(length, dtype=np.float64)
    return RecurrenceCoefficients(np.zeros(length), np.sqrt(k / 2))


def legendre_coefficients(length):
    """Orthonormal Legendre polynomials for ``dx / 2`` on ``(-1, 1)``."""
    k = np.arange(length, dtype=np.float64)
    with np.errstate(invalid="ignore", divide="ignore"):
        a = k / np.sqrt(4 * k * k - 1)
    a[0] = 0.0
    return RecurrenceCoefficients(np.zeros(length), a)


def free_coefficients(length, off=0.5):
    """Constant coefficients ``b = 0``, ``a = off``; Chebyshev of the 2nd kind for 1/2."""
    return RecurrenceCoefficients(np.zeros(length), np.full(length, off))
