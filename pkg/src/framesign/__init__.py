"""Numerical lab for sign behavior of frames, orthonormal bases and Jacobi-matrix polynomials."""

from .bases import BasisKind, classical_system, default_grid, haar_system, trig_system
from .counterexamples import (
    carleson_constant,
    cosine_system,
    dilation_basis,
    dyadic_bessel_trace,
    dyadic_system,
    power_weight,
    reorder_nonequidistributed,
)
from .errors import NumericalError, ValidationError
from .frames import FunctionSystem, bessel_tail, frame_bounds, gram_matrix
from .grid import Grid, SampledFunction, inner_product, make_grid
from .jacobi import (
    bound_envelope,
    eval_polys,
    mate_nevai,
    spectral_quadrature,
    szwarc_coefficients,
)
from .signmass import equidistribution_ratio, first_divergence_index, partial_mass

__version__ = "0.1.0"

__all__ = [
    "BasisKind",
    "FunctionSystem",
    "Grid",
    "NumericalError",
    "SampledFunction",
    "ValidationError",
    "bessel_tail",
    "bound_envelope",
    "carleson_constant",
    "classical_system",
    "cosine_system",
    "default_grid",
    "dilation_basis",
    "dyadic_bessel_trace",
    "dyadic_system",
    "equidistribution_ratio",
    "eval_polys",
    "first_divergence_index",
    "frame_bounds",
    "gram_matrix",
    "haar_system",
    "inner_product",
    "make_grid",
    "mate_nevai",
    "partial_mass",
    "power_weight",
    "reorder_nonequidistributed",
    "spectral_quadrature",
    "szwarc_coefficients",
    "trig_system",
]
