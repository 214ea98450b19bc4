"""Discretized measure spaces: a finite interval with quadrature weights.

A :class:`Grid` stands in for a measure space; functions are sampled at its
points and integrated with its weights. Weighted measures (``e^{-x} dx`` on
the half line, ``e^{-x^2} dx`` on the line) are modelled by folding the
density into the weights of a truncated window.
"""

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatch, InvalidRange, InvalidSize, ValidationError

RULES = ("midpoint", "trapezoid")

DENSITIES = {
    "uniform": lambda x: np.ones_like(x),
    "laguerre": lambda x: np.exp(-x),
    "hermite": lambda x: np.exp(-x * x),
}


def _frozen(arr):
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Grid:
    a: float
    b: float
    rule: str
    points: np.ndarray
    weights: np.ndarray
    density: str = "uniform"

    @property
    def m(self):
        return len(self.points)

    @property
    def measure(self):
        return float(self.weights.sum())

    def key(self):
        return (self.a, self.b, self.rule, self.density, self.m)

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        if self is other:
            return True
        return (
            self.key() == other.key()
            and np.array_equal(self.points, other.points)
            and np.array_equal(self.weights, other.weights)
        )

    def __hash__(self):
        return hash(self.key())

    def mask(self, lo, hi):
        """Boolean mask of the points lying in the open interval ``(lo, hi)``."""
        return (self.points > lo) & (self.points < hi)

    def mask_measure(self, mask):
        return float(self.weights[np.asarray(mask, dtype=bool)].sum())

    def sample(self, func):
        """Sample a vectorized callable on the grid."""
        return SampledFunction(self, np.broadcast_to(func(self.points), (self.m,)).astype(np.float64))

    def to_dict(self):
        d = {"a": self.a, "b": self.b, "rule": self.rule, "m": self.m}
        if self.density != "uniform":
            d["density"] = self.density
        return d

    @classmethod
    def from_dict(cls, d):
        return make_grid(d["a"], d["b"], d["m"], d.get("rule", "midpoint"), d.get("density", "uniform"))


def make_grid(a, b, m, rule="midpoint", density="uniform"):
    """Build a quadrature grid on ``(a, b)`` with ``m`` points.

    Midpoint weights all equal ``(b - a) / m``; the trapezoid rule includes the
    endpoints. A non-uniform ``density`` multiplies the weights pointwise.
    """
    a = float(a)
    b = float(b)
    if not (np.isfinite(a) and np.isfinite(b)) or a >= b:
        raise InvalidRange(f"need a < b, got a={a}, b={b}")
    if int(m) != m or m < 2:
        raise InvalidSize(f"need m >= 2, got {m}")
    m = int(m)
    if rule not in RULES:
        raise ValidationError(f"unknown quadrature rule {rule!r}")
    if density not in DENSITIES:
        raise ValidationError(f"unknown density {density!r}")
    if rule == "midpoint":
        h = (b - a) / m
        points = a + h * (np.arange(m) + 0.5)
        weights = np.full(m, h)
    else:
        h = (b - a) / (m - 1)
        points = a + h * np.arange(m)
        points[-1] = b
        weights = np.full(m, h)
        weights[[0, -1]] = h / 2
    weights = weights * DENSITIES[density](points)
    if np.any(weights <= 0):
        raise InvalidRange("density underflows to zero on the grid; shrink the window")
    return Grid(a, b, rule, _frozen(points), _frozen(weights), density)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (self.grid.m,):
            raise InvalidSize(f"expected {self.grid.m} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValidationError("sampled values must be finite")
        object.__setattr__(self, "values", values)

    def __neg__(self):
        return SampledFunction(self.grid, -self.values)

    def norm(self):
        return float(np.sqrt(inner_product(self, self)))


def check_same_grid(g1, g2):
    if g1 != g2:
        raise GridMismatch(f"functions live on different grids: {g1.key()} vs {g2.key()}")


def inner_product(f, g):
    """Quadrature approximation of the L^2 pairing: sum of f*g*weights."""
    check_same_grid(f.grid, g.grid)
    return float(np.dot(f.values * g.values, f.grid.weights))
