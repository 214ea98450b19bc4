"""Reference orthonormal systems: Haar, trigonometric, Legendre, Hermite, Laguerre."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadParameter, DomainMismatch, GridCollision, InvalidSize
from .frames import FunctionSystem
from .grid import make_grid
from .jacobi import discrete_stieltjes, eval_polys, laguerre_coefficients

KINDS = ("haar", "trig", "legendre", "hermite", "laguerre")

LAGUERRE_WINDOW = 40.0
HERMITE_WINDOW = 8.0


@dataclass(frozen=True)
class BasisKind:
    kind: str
    size_param: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadParameter(f"unknown basis kind {self.kind!r}; choose from {KINDS}")
        if self.size_param < 1:
            raise InvalidSize("size_param must be >= 1")


def default_grid(kind, m, rule="midpoint"):
    """The grid each kind lives on; weighted kinds fold their density into the weights."""
    if kind in ("haar", "trig"):
        return make_grid(0.0, 1.0, m, rule)
    if kind == "legendre":
        return make_grid(-1.0, 1.0, m, rule)
    if kind == "laguerre":
        return make_grid(0.0, LAGUERRE_WINDOW, m, rule, "laguerre")
    if kind == "hermite":
        return make_grid(-HERMITE_WINDOW, HERMITE_WINDOW, m, rule, "hermite")
    raise BadParameter(f"unknown basis kind {kind!r}")


def haar_values(level, index, t):
    """Normalized Haar wavelet on the dyadic interval ``(index/2^level, (index+1)/2^level)``
    of the unit interval, evaluated at ``t``: positive on the left half."""
    s = t * 2.0 ** (level + 1)
    cell = np.floor(s)
    inside = (cell >= 2 * index) & (cell < 2 * index + 2)
    sign = np.where(cell == 2 * index, 1.0, -1.0)
    return np.where(inside, sign * 2.0 ** (level / 2), 0.0)


def haar_labels(count):
    labels = ["h0"]
    level = 0
    while len(labels) < count:
        for j in range(2**level):
            labels.append(f"h({level},{j})")
            if len(labels) == count:
                break
        level += 1
    return labels


def haar_system(grid, count, lo=None, hi=None, prefix=""):
    """The first ``count`` Haar functions (constant first, then level-major) on ``(lo, hi)``.

    Values vanish outside ``(lo, hi)``; the system is orthonormal for the
    Lebesgue measure on that subinterval.
    """
    lo = grid.a if lo is None else lo
    hi = grid.b if hi is None else hi
    t = (grid.points - lo) / (hi - lo)
    inside = (t > 0) & (t < 1)
    labels = haar_labels(count)
    top = max(0, math.ceil(math.log2(count)) - 1) if count > 1 else -1
    if top >= 0:
        s = t[inside] * 2.0 ** (top + 1)
        if np.any(s == np.floor(s)):
            raise GridCollision(f"grid point on a dyadic endpoint of level <= {top}")
    norm = 1 / math.sqrt(hi - lo)
    V = np.zeros((count, grid.m))
    V[0] = np.where(inside, norm, 0.0)
    k = 1
    level = 0
    while k < count:
        for j in range(2**level):
            V[k] = np.where(inside, norm * haar_values(level, j, t), 0.0)
            k += 1
            if k == count:
                break
        level += 1
    return FunctionSystem(grid, V, [prefix + s for s in labels])


def haar_levels(grid, levels):
    """Constant plus all Haar levels ``0..levels`` (``2^{levels+1}`` members)."""
    return haar_system(grid, 2 ** (levels + 1))


def trig_system(grid, count):
    """``1, sqrt2 cos 2pi x, sqrt2 sin 2pi x, sqrt2 cos 4pi x, ...`` on (0, 1)."""
    t = grid.points
    V = np.empty((count, grid.m))
    labels = []
    V[0] = 1.0
    labels.append("1")
    for k in range(1, count):
        freq = (k + 1) // 2
        if k % 2:
            V[k] = math.sqrt(2) * np.cos(2 * math.pi * freq * t)
            labels.append(f"cos{freq}")
        else:
            V[k] = math.sqrt(2) * np.sin(2 * math.pi * freq * t)
            labels.append(f"sin{freq}")
    return FunctionSystem(grid, V, labels)


def _check_domain(kind, grid):
    expected = default_grid(kind, grid.m, grid.rule)
    if (grid.a, grid.b, grid.density) != (expected.a, expected.b, expected.density):
        # Laguerre/Hermite windows may differ from the defaults.
        if kind == "laguerre" and grid.a == 0.0 and grid.density == "laguerre":
            return
        if kind == "hermite" and grid.a == -grid.b and grid.density == "hermite":
            return
        raise DomainMismatch(
            f"{kind} needs a grid on ({expected.a}, {expected.b}) with "
            f"density {expected.density!r}, got ({grid.a}, {grid.b}) {grid.density!r}"
        )


def polynomial_system(kind, size, grid):
    """Orthonormal polynomials of the grid's discrete measure.

    Recurrence coefficients come from the discrete Stieltjes procedure on the
    grid itself, so the members are orthonormal in the discretized inner
    product to roundoff. As the grid is refined the coefficients approach the
    classical ones.
    """
    rc, mass = discrete_stieltjes(grid.points, grid.weights, size)
    P = eval_polys(rc, grid.points, size - 1) / math.sqrt(mass)
    return FunctionSystem(grid, P, [f"{kind}{k}" for k in range(size)]), rc


def classical_system(kind, grid):
    """First ``kind.size_param`` members of a classical orthonormal basis on ``grid``."""
    if isinstance(kind, str):
        raise BadParameter("pass a BasisKind(kind, size_param)")
    _check_domain(kind.kind, grid)
    if kind.kind == "haar":
        return haar_system(grid, kind.size_param)
    if kind.kind == "trig":
        return trig_system(grid, kind.size_param)
    return polynomial_system(kind.kind, kind.size_param, grid)[0]


def laguerre_values(x, k_max):
    """Classical ``L_0(x) .. L_{k_max}(x)`` (``L_k(0) = 1``) via the Jacobi recurrence."""
    rc = laguerre_coefficients(k_max + 2)
    p = eval_polys(rc, x, k_max)
    sign = (-1.0) ** np.arange(k_max + 1)
    return p * sign if np.ndim(x) == 0 else p * sign[:, None]


def laguerre_main_term(k, x):
    k = np.asarray(k, dtype=np.float64)
    return x ** (-0.25) * math.exp(x / 2) / (math.sqrt(math.pi) * k**0.25) * np.cos(2 * np.sqrt(k * x) - math.pi / 4)


def laguerre_asymptotic_gap(k, x):
    """``(exact, asymptotic, |exact - asymptotic|)`` for ``L_k(x)``, ``k >= 1``, ``x > 0``."""
    if k < 1:
        raise BadParameter("the oscillatory main term is undefined for k = 0")
    if not x > 0:
        raise BadParameter("need x > 0")
    exact = float(laguerre_values(float(x), int(k))[-1])
    asym = float(laguerre_main_term(k, x))
    return exact, asym, abs(exact - asym)


def loglog_slope(ks, gaps):
    """Least-squares slope of ``log gap`` against ``log k``."""
    return float(np.polyfit(np.log(ks), np.log(gaps), 1)[0])


def laguerre_power_sums(x, k_max, q):
    """Partial sums ``sum_{k<=n} |L_k(x)|^q`` for ``n = 0..k_max``."""
    return np.cumsum(np.abs(laguerre_values(float(x), k_max)) ** q)
