"""Special functions and quadrature engines."""

from .quadrature import (
    QuadSpec,
    QuadratureError,
    integrate_1d,
    integrate_2d_polar,
    integrate_semi_infinite,
)
from .special import (
    bessel_i0,
    bessel_i0e,
    bessel_i1,
    bessel_i1_over_x_e,
    bessel_i1e,
    elliptic_e,
    elliptic_k,
    elliptic_ke_complementary,
)
