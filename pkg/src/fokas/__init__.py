"""Unified-transform pairs for three linear initial boundary value problems.

The library provides bespoke spectral transform pairs (forward transform on
a union of complex contours, inverse by weighted contour integral) for

* the half-line third-order (Stokes) problem with a Neumann or Dirichlet
  condition,
* the finite-interval heat equation with a nonlocal measurement condition,
* the half-line linearized BBM equation with a Dirichlet condition,

together with a solver q(x, t) = F^{-1}[exp(-omega t) F[Q]](x) built on the
pairs, and numerical certificates of the two properties the method rests
on: invertibility of the pair and weak (remainder) diagonalization of the
spatial operator.
"""

from .contours import (
    BOUNDARY_D_PLUS,
    BOUNDARY_D_RHO_MINUS,
    BOUNDARY_D_RHO_PLUS,
    CIRCLE_C,
    REAL_LINE,
    boundary_D_plus,
    boundary_D_rho,
    circle_C,
    real_line,
)
from .data import (
    Combination,
    Cosine,
    Poly,
    PolyExp,
    PolyGauss,
    SeparableSolution,
    make_datum,
)
from .quadrature import (
    QuadratureResult,
    QuadratureSettings,
    integrate_contour,
    integrate_real_halfline,
    integrate_segment,
)
from .transform import (
    SpectralCoefficient,
    VerificationReport,
    build_spectral_coefficient,
    forward,
    inverse,
    solve,
    solve_grid,
    verify_diagonalization,
    verify_inversion,
    verify_remainder_vanishing,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
