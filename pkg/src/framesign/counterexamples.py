"""Constructions with lopsided sign behavior.

* dyadic indicators: a positive complete Bessel system whose pointwise sum of
  squares diverges,
* the dyadic testing (Carleson) constant behind its Bessel bound,
* an isometric dilation turning a contractive positive system into half of an
  orthonormal basis on a doubled interval,
* a reordering of that basis with the negative mass negligible against the
  positive mass on the first half,
* a positive minimal system built from cosines.
"""

import math
from dataclasses import dataclass

import numpy as np

from .bases import haar_system
from .errors import Exhausted, GridCollision, GridMismatch, InvalidSize, NotContraction, ValidationError
from .frames import FunctionSystem, gram_matrix
from .numerics import psd_sqrt, symmetric_eigvals

MAX_BESSEL_DEPTH = 10
MAX_CARLESON_DEPTH = 24
COMPLETION_THRESHOLD = 1e-10
DEFAULT_SCALE_HEADROOM = 0.6


@dataclass(frozen=True, order=True)
class DyadicInterval:
    level: int
    index: int

    def __post_init__(self):
        if self.level < 0 or not 0 <= self.index < 2**self.level:
            raise ValidationError(f"no dyadic interval ({self.level}, {self.index})")

    @property
    def left(self):
        return self.index / 2**self.level

    @property
    def right(self):
        return (self.index + 1) / 2**self.level

    @property
    def length(self):
        return 2.0**-self.level

    def contains(self, other):
        return other.level >= self.level and other.index >> (other.level - self.level) == self.index


def dyadic_intervals(depth):
    """All dyadic subintervals of (0, 1) up to ``depth``, level-major."""
    return [DyadicInterval(n, j) for n in range(depth + 1) for j in range(2**n)]


def _unit_interval(grid):
    if (grid.a, grid.b) != (0.0, 1.0):
        raise GridMismatch(f"need a grid on (0, 1), got ({grid.a}, {grid.b})")


def dyadic_system(depth, grid):
    """Indicators of all dyadic intervals of level ``<= depth``, level-major, left to right."""
    _unit_interval(grid)
    x = grid.points
    s = x * 2.0**depth
    if np.any(s == np.floor(s)):
        raise GridCollision(f"a grid point sits on a dyadic endpoint of level <= {depth}")
    rows = []
    labels = []
    for n in range(depth + 1):
        cell = np.floor(x * 2.0**n)
        for j in range(2**n):
            rows.append((cell == j).astype(np.float64))
            labels.append(f"I({n},{j})")
    return FunctionSystem(grid, np.array(rows), labels)


@dataclass(frozen=True)
class CarlesonReport:
    constant: float
    maximizer: DyadicInterval
    depth: int
    per_level_trace: tuple

    def to_dict(self):
        return {
            "constant": self.constant,
            "maximizer": {"level": self.maximizer.level, "index": self.maximizer.index},
            "depth": self.depth,
            "trace": list(self.per_level_trace),
        }


def power_weight(alpha):
    """``w_I = |I|^alpha``."""
    return lambda I: I.length**alpha


def carleson_constant(weight_of, depth):
    """Dyadic testing constant ``max_J (1/|J|) sum_{I subset J} w_I`` up to ``depth``.

    Subtree sums are aggregated bottom-up, so each interval is visited once.
    ``weight_of`` is a callable on :class:`DyadicInterval` or a mapping.
    """
    if depth < 0:
        raise ValidationError("depth must be nonnegative")
    if depth > MAX_CARLESON_DEPTH:
        raise InvalidSize(f"depth {depth} exceeds {MAX_CARLESON_DEPTH} ({2 ** (depth + 1) - 1} intervals)")
    get = weight_of.__getitem__ if hasattr(weight_of, "__getitem__") else weight_of
    sums = None
    ratios = []
    for n in range(depth, -1, -1):
        w = np.array([float(get(DyadicInterval(n, j))) for j in range(2**n)])
        if np.any(w < 0):
            raise ValidationError("weights must be nonnegative")
        if sums is not None:
            w = w + sums[0::2] + sums[1::2]
        sums = w
        ratios.append(w * 2.0**n)
    ratios = ratios[::-1]
    per_level = tuple(float(r.max()) for r in ratios)
    best = max(per_level)
    level = per_level.index(best)
    index = int(np.argmax(ratios[level]))
    return CarlesonReport(best, DyadicInterval(level, index), depth, per_level)


def dyadic_bessel_trace(max_depth, grid=None):
    """Largest Gram eigenvalue of the dyadic system at depths ``0..max_depth``."""
    if max_depth > MAX_BESSEL_DEPTH:
        raise InvalidSize(f"depth {max_depth} exceeds {MAX_BESSEL_DEPTH} (Gram size {2 ** (max_depth + 1) - 1})")
    if grid is None:
        from .grid import make_grid

        grid = make_grid(0.0, 1.0, 2 ** (max_depth + 1))
    out = []
    for L in range(max_depth + 1):
        lam = symmetric_eigvals(gram_matrix(dyadic_system(L, grid)))
        out.append((L, float(lam[-1])))
    return out


@dataclass(frozen=True, eq=False)
class DilationBasis:
    """Orthonormal system ``u_2, u_4, .., u_{2K}, u_1, u_3, ..`` on the doubled interval.

    ``system`` holds the ``K`` even members first, then the completion.
    """

    system: FunctionSystem
    n_even: int
    scale: float
    defect: np.ndarray  # D = (I - T*T)^{1/2}
    E: np.ndarray  # mask of the first half
    isometry_defect: float
    gram_defect: float

    @property
    def even(self):
        return np.arange(self.n_even)

    @property
    def odd(self):
        return np.arange(self.n_even, len(self.system))


def _half_matches(v_grid, grid2, E):
    if grid2.a != 0.0 or grid2.b != 2.0:
        raise GridMismatch(f"need a grid on (0, 2), got ({grid2.a}, {grid2.b})")
    if E.sum() != v_grid.m:
        raise GridMismatch("the first half of the doubled grid must carry the input grid's points")
    if not (
        np.allclose(grid2.points[E], v_grid.points, rtol=0, atol=1e-14)
        and np.allclose(grid2.weights[E], v_grid.weights, rtol=1e-14, atol=0)
    ):
        raise GridMismatch("the first half of the doubled grid differs from the input grid")


def _orthonormal_completion(Y, dictionary, target):
    """Extend orthonormal rows ``Y`` (Euclidean) with Gram-Schmidt residuals of ``dictionary``.

    Each candidate is orthogonalized twice; residuals below the threshold
    (relative to the candidate's norm) are dropped.
    """
    basis = np.empty((target, Y.shape[1]))
    basis[: len(Y)] = Y
    k = len(Y)
    added = []
    for d in dictionary:
        if k == target:
            break
        r = d.copy()
        for _ in range(2):
            r -= basis[:k].T @ (basis[:k] @ r)
        nr = np.linalg.norm(r)
        if nr > COMPLETION_THRESHOLD * np.linalg.norm(d):
            basis[k] = r / nr
            added.append(k)
            k += 1
    return basis[len(Y) : k]


def dilation_basis(v, grid2, scale=None, n_random=100, seed=0):
    """Isometric dilation of a Bessel system into an orthonormal basis.

    With ``T delta_n = scale * v_n``, ``D = (I - T*T)^{1/2}`` and ``V`` mapping
    ``delta_n`` to the ``n``-th Haar function on (1, 2), the even members are
    ``u_{2n} = T delta_n (+) V D delta_n``. The odd members complete them to an
    orthonormal basis of the grid space on (0, 2), by Gram-Schmidt over a
    level-major Haar dictionary on (0, 2), each oriented to have nonnegative
    integral over E = (0, 1).

    ``scale`` defaults to ``0.6 / sqrt(lambda_max(Gram(v)))``.
    """
    E = grid2.mask(0.0, 1.0)
    _half_matches(v.grid, grid2, E)
    K = len(v)
    second = grid2.mask(1.0, 2.0)
    if second.sum() < K:
        raise InvalidSize(f"(1, 2) carries {second.sum()} points, fewer than {K} members")

    G0 = gram_matrix(v)
    top0 = symmetric_eigvals(G0)[-1]
    if scale is None:
        scale = DEFAULT_SCALE_HEADROOM / math.sqrt(top0)
    G = scale**2 * G0
    if scale**2 * top0 >= 1:
        raise NotContraction(f"scaled system has Bessel bound {scale ** 2 * top0:.6g} >= 1")
    D = psd_sqrt(np.eye(K) - G)

    H = haar_system(grid2, K, 1.0, 2.0).values
    even = np.zeros((K, grid2.m))
    even[:, E] = scale * v.values
    even += D @ H  # D symmetric: row n is sum_j D[j, n] h_j

    w = np.sqrt(grid2.weights)
    Y = even * w
    full = grid2.m
    dictionary = haar_system(grid2, full).values * w
    odd = _orthonormal_completion(Y, dictionary, full) / w
    # completion vectors have a free sign; orient them to have nonnegative mean on E
    flip = (odd[:, E] @ grid2.weights[E]) < 0
    odd[flip] *= -1

    labels = [f"u{2 * n}" for n in range(1, K + 1)] + [f"u{2 * n - 1}" for n in range(1, len(odd) + 1)]
    system = FunctionSystem(grid2, np.vstack([even, odd]), labels)

    rng = np.random.default_rng(seed)
    worst = 0.0
    tests = [np.eye(K)[i] for i in range(K)] + [rng.standard_normal(K) for _ in range(n_random)]
    for x in tests:
        Ux = x @ even
        worst = max(worst, abs(np.dot(Ux * Ux, grid2.weights) - x @ x) / (x @ x))
    gram_defect = float(np.abs(gram_matrix(system) - np.eye(len(system))).max())
    return DilationBasis(system, K, float(scale), D, E, float(worst), gram_defect)


@dataclass(frozen=True, eq=False)
class Reordering:
    system: FunctionSystem
    order: np.ndarray  # positions into the dilation system
    block_ends: tuple  # N_j: even members used when block j closed
    block_positions: tuple  # reordered length at each block end (before the odd insert)
    ratios: tuple  # realized max minus/plus on E at each block end
    targets: tuple


def reorder_nonequidistributed(basis, targets, E=None):
    """Interleave long runs of even members with single odd members.

    Block ``j`` keeps taking even members until the largest ratio of quadratic
    minus mass to plus mass on ``E`` is at most ``targets[j]``; then the next
    odd member is inserted. Remaining members are appended (evens, then odds)
    so the result is a permutation of the input.
    """
    targets = tuple(float(t) for t in targets)
    if any(t <= 0 for t in targets) or any(b >= a for a, b in zip(targets, targets[1:])):
        raise ValidationError("targets must be positive and strictly decreasing")
    E = basis.E if E is None else np.asarray(E, dtype=bool)
    vals = basis.system.values[:, E]
    evens = list(basis.even)
    odds = list(basis.odd)
    plus = np.zeros(vals.shape[1])
    minus = np.zeros(vals.shape[1])
    order = []
    ends, positions, ratios = [], [], []
    ie = io = 0

    def take(k):
        nonlocal plus, minus
        order.append(k)
        plus = plus + np.maximum(vals[k], 0.0) ** 2
        minus = minus + np.maximum(-vals[k], 0.0) ** 2

    def worst_ratio():
        if np.any((plus == 0) & (minus > 0)):
            return math.inf
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(plus > 0, minus / plus, 0.0)
        return float(r.max())

    for target in targets:
        while True:
            if ie == len(evens):
                partial = dict(order=list(order), block_ends=tuple(ends), ratios=tuple(ratios))
                raise Exhausted(
                    f"even members ran out before reaching target {target} (ratio {worst_ratio():.4g})",
                    partial,
                )
            take(evens[ie])
            ie += 1
            r = worst_ratio()
            if r <= target:
                break
        ends.append(ie)
        positions.append(len(order))
        ratios.append(r)
        if io < len(odds):
            take(odds[io])
            io += 1

    order.extend(evens[ie:])
    order.extend(odds[io:])
    order = np.array(order)
    return Reordering(basis.system.take(order), order, tuple(ends), tuple(positions), tuple(ratios), targets)


NOMINAL_PRIMAL_SCALE = 1 / (1 + math.sqrt(2))
NOMINAL_DUAL_SCALE = 2 + math.sqrt(2)


@dataclass(frozen=True)
class CosineReport:
    raw_norms: np.ndarray  # ||1 + cos(pi k x)||
    primal_scales: np.ndarray  # c_k with ||c_k (1 + cos)|| = 1
    dual_scales: np.ndarray  # d_k with (u_k, u'_k) = 1
    biorthogonality: np.ndarray  # (u_k, u'_j) for the returned systems
    biorthogonality_defect: float
    min_primal: float
    nominal_norms: np.ndarray  # norms with the nominal primal scale 1/(1+sqrt2)
    nominal_pairing: np.ndarray  # (u_k, u'_k) with both nominal scales
    nominal_consistent: bool
    note: str

    def to_dict(self):
        return {
            "raw_norms": self.raw_norms.tolist(),
            "primal_scales": self.primal_scales.tolist(),
            "dual_scales": self.dual_scales.tolist(),
            "biorthogonality_defect": self.biorthogonality_defect,
            "min_primal": self.min_primal,
            "nominal_primal_scale": NOMINAL_PRIMAL_SCALE,
            "nominal_dual_scale": NOMINAL_DUAL_SCALE,
            "nominal_norms": self.nominal_norms.tolist(),
            "nominal_pairing": self.nominal_pairing.tolist(),
            "nominal_consistent": self.nominal_consistent,
            "note": self.note,
        }


def cosine_system(K, grid):
    """Positive system ``c_k (1 + cos(pi k x))`` with biorthogonal ``d_k cos(pi k x)``, ``k = 1..K``.

    The scales are computed so that the primal members have unit norm and
    ``(u_k, u'_j) = delta_kj`` in the discretized inner product. The report
    also evaluates the nominal pair ``1/(1+sqrt2)``, ``2+sqrt2``, which gives
    norms ``sqrt(3/2)/(1+sqrt2)`` and pairing ``sqrt2/2`` rather than 1.
    """
    _unit_interval(grid)
    if K < 1:
        raise InvalidSize("K must be >= 1")
    k = np.arange(1, K + 1)
    C = np.cos(math.pi * np.outer(k, grid.points))
    P = 1.0 + C
    w = grid.weights
    raw_norms = np.sqrt((P * P) @ w)
    c = 1 / raw_norms
    pair = (P * C) @ w  # (1 + cos_k, cos_k)
    d = 1 / (c * pair)
    primal = FunctionSystem(grid, c[:, None] * P, [f"u{i}" for i in k])
    dual = FunctionSystem(grid, d[:, None] * C, [f"u'{i}" for i in k])
    bio = (primal.values * w) @ dual.values.T
    nominal_norms = NOMINAL_PRIMAL_SCALE * raw_norms
    nominal_pair = NOMINAL_PRIMAL_SCALE * NOMINAL_DUAL_SCALE * pair
    consistent = bool(np.allclose(nominal_norms, 1, atol=1e-6) and np.allclose(nominal_pair, 1, atol=1e-6))
    report = CosineReport(
        raw_norms=raw_norms,
        primal_scales=c,
        dual_scales=d,
        biorthogonality=bio,
        biorthogonality_defect=float(np.abs(bio - np.eye(K)).max()),
        min_primal=float(primal.values.min()),
        nominal_norms=nominal_norms,
        nominal_pairing=nominal_pair,
        nominal_consistent=consistent,
        note="the system is positive and uniformly minimal; it is not a basis, "
        "which no finite computation can decide",
    )
    return primal, dual, report
