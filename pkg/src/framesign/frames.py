"""Finite function systems on a grid: Gram matrices, frame bounds, analysis and synthesis."""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSystem, GridMismatch, InvalidSize, LengthMismatch, ValidationError
from .grid import Grid, SampledFunction, check_same_grid
from .numerics import symmetric_eigvals

RANK_CUTOFF = 1e-10


@dataclass(frozen=True, eq=False)
class FunctionSystem:
    """An ordered family of K grid-sampled functions, stored as a ``(K, m)`` array."""

    grid: Grid
    values: np.ndarray
    labels: tuple

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] < 1:
            raise InvalidSize(f"need a (K, m) array with K >= 1, got shape {values.shape}")
        if values.shape[1] != self.grid.m:
            raise GridMismatch(f"members have {values.shape[1]} samples, grid has {self.grid.m}")
        labels = tuple(str(s) for s in self.labels)
        if len(labels) != values.shape[0]:
            raise LengthMismatch(f"{len(labels)} labels for {values.shape[0]} members")
        if len(set(labels)) != len(labels):
            raise ValidationError("labels must be unique")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return self.values.shape[0]

    def member(self, k):
        return SampledFunction(self.grid, self.values[k])

    def members(self):
        return [self.member(k) for k in range(len(self))]

    def take(self, order, labels=None):
        """Subsystem (or permutation) picking rows in ``order``."""
        order = np.asarray(order, dtype=int)
        labels = labels if labels is not None else [self.labels[k] for k in order]
        return FunctionSystem(self.grid, self.values[order], labels)

    def scaled(self, c):
        return FunctionSystem(self.grid, c * self.values, self.labels)

    def duplicated(self):
        """Every member twice; the copies get a ``'`` appended to their label."""
        return FunctionSystem(
            self.grid,
            np.vstack([self.values, self.values]),
            list(self.labels) + [s + "'" for s in self.labels],
        )

    def to_dict(self):
        return {
            "grid": self.grid.to_dict(),
            "labels": list(self.labels),
            "values": self.values.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(Grid.from_dict(d["grid"]), np.array(d["values"], dtype=np.float64), d["labels"])


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float
    subspace_dim: int


def gram_matrix(sys):
    """Matrix of pairwise inner products of the members."""
    V = sys.values
    G = (V * sys.grid.weights) @ V.T
    return (G + G.T) / 2


def frame_bounds(sys):
    """Optimal frame bounds of ``sys`` on its own span.

    The nonzero spectrum of the frame operator restricted to the span equals
    the nonzero spectrum of the Gram matrix, so the bounds are its extreme
    eigenvalues above the rank cutoff ``1e-10 * lambda_max``.
    """
    lam = symmetric_eigvals(gram_matrix(sys))
    top = lam[-1]
    if top <= 0:
        raise DegenerateSystem("all members vanish on the grid")
    kept = lam[lam > RANK_CUTOFF * top]
    return FrameBounds(float(kept[0]), float(top), int(len(kept)))


def analyze(f, sys):
    """Coefficients ``(f, u_k)`` for every member."""
    check_same_grid(f.grid, sys.grid)
    return sys.values @ (f.values * sys.grid.weights)


def synthesize(c, sys):
    c = np.asarray(c, dtype=np.float64)
    if c.shape != (len(sys),):
        raise LengthMismatch(f"need {len(sys)} coefficients, got shape {c.shape}")
    return SampledFunction(sys.grid, c @ sys.values)


def bessel_tail(sys, E, N):
    """Tail size ``(sum_{k >= N} ||u_k restricted to E||^2)^{1/2}``, 0-based ``N``.

    ``E`` is a boolean mask over grid points. Nonincreasing in ``N``; zero at
    ``N = K``.
    """
    K = len(sys)
    if not 0 <= N <= K:
        raise ValidationError(f"need 0 <= N <= {K}, got {N}")
    E = np.asarray(E, dtype=bool)
    if E.shape != (sys.grid.m,):
        raise GridMismatch("mask does not match the grid")
    sq = (sys.values[:, E] ** 2) @ sys.grid.weights[E]
    # reverse cumulative sum keeps the result monotone in N
    tails = np.concatenate([np.cumsum(sq[::-1])[::-1], [0.0]])
    return float(np.sqrt(tails[N]))


def bessel_tails(sys, E):
    """All tail sizes, index ``N = 0..K``."""
    E = np.asarray(E, dtype=bool)
    sq = (sys.values[:, E] ** 2) @ sys.grid.weights[E]
    return np.sqrt(np.concatenate([np.cumsum(sq[::-1])[::-1], [0.0]]))


def projection_residuals(sys, tests):
    """Relative residual ``||f - P f|| / ||f||`` of each test function after
    orthogonal projection onto the span of ``sys``."""
    w = np.sqrt(sys.grid.weights)
    A = (sys.values * w).T
    out = []
    for f in tests:
        check_same_grid(f.grid, sys.grid)
        y = f.values * w
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        r = y - A @ coef
        out.append(float(np.linalg.norm(r) / np.linalg.norm(y)))
    return np.array(out)


def completeness_defect(sys, tests):
    """Worst relative residual over a test dictionary.

    A finite computation cannot certify completeness; a small defect only says
    the test functions are well approximated by the span.
    """
    return float(projection_residuals(sys, tests).max())
