"""Positive/negative parts of a function system and their partial l^q masses.

For a system ``(u_k)`` and a point ``x`` the plus and minus masses at
checkpoint ``n`` are ``sum_{k<=n} max(0, +-u_k(x))^q``. At ``q = 2`` their sum
is the partial sum of squares ``sum_{k<=n} u_k(x)^2``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadCheckpoints, ValidationError
from .grid import Grid, SampledFunction

NO_INDEX = -1
DEFAULT_THRESHOLD = 10.0

_CHUNK = 256


@dataclass(frozen=True, eq=False)
class SignMassProfile:
    grid: Grid
    checkpoints: np.ndarray  # member counts n, strictly increasing
    plus_mass: np.ndarray  # (T, m)
    minus_mass: np.ndarray  # (T, m)
    exponent: float

    def total(self):
        return self.plus_mass + self.minus_mass


def sign_split(f):
    """``(f+, f-)`` with ``f = f+ - f-`` and ``f+ * f- = 0``."""
    return (
        SampledFunction(f.grid, np.maximum(f.values, 0.0)),
        SampledFunction(f.grid, np.maximum(-f.values, 0.0)),
    )


def _power(v, q):
    return v * v if q == 2 else np.power(v, q)


def partial_mass(sys, q=2.0, checkpoints=None):
    """Sign-mass profile of ``sys`` at the given member counts.

    ``checkpoints`` defaults to ``[K]``. Members are streamed in chunks so a
    single pass over ``k`` suffices; masses are monotone along checkpoints
    because only nonnegative terms are ever added.
    """
    K = len(sys)
    if not q > 0:
        raise ValidationError(f"exponent must be positive, got {q}")
    cps = np.array([K] if checkpoints is None else checkpoints, dtype=np.int64)
    if cps.ndim != 1 or len(cps) == 0:
        raise BadCheckpoints("need a nonempty 1-D sequence of checkpoints")
    if cps[0] < 0 or cps[-1] > K or np.any(np.diff(cps) <= 0):
        raise BadCheckpoints(f"checkpoints must increase strictly within [0, {K}]")

    m = sys.grid.m
    plus = np.zeros((len(cps), m))
    minus = np.zeros((len(cps), m))
    run_p = np.zeros(m)
    run_m = np.zeros(m)
    t = 0
    while t < len(cps) and cps[t] == 0:
        t += 1
    for start in range(0, cps[-1], _CHUNK):
        stop = min(start + _CHUNK, int(cps[-1]))
        block = sys.values[start:stop]
        cp = np.cumsum(_power(np.maximum(block, 0.0), q), axis=0) + run_p
        cm = np.cumsum(_power(np.maximum(-block, 0.0), q), axis=0) + run_m
        while t < len(cps) and cps[t] <= stop:
            plus[t] = cp[cps[t] - start - 1]
            minus[t] = cm[cps[t] - start - 1]
            t += 1
        run_p = cp[-1]
        run_m = cm[-1]
    return SignMassProfile(sys.grid, cps, plus, minus, float(q))


def first_divergence_index(profile, threshold=DEFAULT_THRESHOLD):
    """Per grid point, the first checkpoint where both masses reach ``threshold``.

    Points where this never happens get :data:`NO_INDEX`.
    """
    both = np.minimum(profile.plus_mass, profile.minus_mass) >= threshold
    hit = both.any(axis=0)
    first = np.argmax(both, axis=0)
    return np.where(hit, profile.checkpoints[first], NO_INDEX)


def equidistribution_ratio(profile):
    """Ratio minus/plus of the quadratic masses; NaN where the plus mass is zero."""
    if profile.exponent != 2:
        raise ValidationError("the equidistribution ratio is defined for q = 2")
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(profile.plus_mass > 0, profile.minus_mass / profile.plus_mass, np.nan)


def profile_rows(profile):
    """Rows ``(x, n, plus, minus, ratio)`` in checkpoint-major order."""
    ratio = (
        equidistribution_ratio(profile)
        if profile.exponent == 2
        else np.full(profile.plus_mass.shape, np.nan)
    )
    x = profile.grid.points
    for t, n in enumerate(profile.checkpoints):
        for i in range(len(x)):
            yield (x[i], int(n), profile.plus_mass[t, i], profile.minus_mass[t, i], ratio[t, i])


def divergence_scan(sys, threshold=DEFAULT_THRESHOLD, q=2.0):
    """Exact :func:`first_divergence_index` over every member count ``1..K``.

    Streams the members instead of materializing a profile with ``K``
    checkpoints; the result equals ``first_divergence_index(partial_mass(sys,
    q, range(1, K + 1)), threshold)``.
    """
    if not q > 0:
        raise ValidationError(f"exponent must be positive, got {q}")
    m = sys.grid.m
    first = np.full(m, NO_INDEX, dtype=np.int64)
    run_p = np.zeros(m)
    run_m = np.zeros(m)
    for start in range(0, len(sys), _CHUNK):
        block = sys.values[start : start + _CHUNK]
        cp = np.cumsum(_power(np.maximum(block, 0.0), q), axis=0) + run_p
        cm = np.cumsum(_power(np.maximum(-block, 0.0), q), axis=0) + run_m
        both = np.minimum(cp, cm) >= threshold
        new = both.any(axis=0) & (first == NO_INDEX)
        first[new] = start + 1 + np.argmax(both[:, new], axis=0)
        run_p = cp[-1]
        run_m = cm[-1]
    return first
