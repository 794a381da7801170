"""Fields and 'forces' acting on an electron.

Every field here is radial and is returned as its signed radial component.
A field is the corresponding force density divided by rho.  Beyond the
radius where rho underflows (``RHO_FLOOR``) the ratio fields are reported as
NaN, meaning unavailable.
"""

from dataclasses import dataclass
import math

import numpy as np

from .closedform import radial_forms
from .numerics import (
    QuadSpec,
    bessel_i0e,
    bessel_i1e,
    elliptic_ke_complementary,
    integrate_1d,
    integrate_2d_polar,
    integrate_semi_infinite,
)
from .sources import current_components, density
from .wavefunction import g0_coefficients, g0_squared_coefficients, psi_xy

__all__ = [
    "FieldBundle",
    "KineticTensorValue",
    "RHO_FLOOR",
    "electron_interaction_force",
    "field_ee",
    "field_ee_oracle",
    "field_hartree",
    "field_hartree_oracle",
    "field_xc",
    "ring_field",
    "ring_potential",
    "kinetic_tensor",
    "kinetic_tensor_oracle",
    "auxiliary_functions",
    "auxiliary_oracle",
    "kinetic_force",
    "kinetic_force_oracle",
    "kinetic_field",
    "differential_density_force",
    "differential_density_field",
    "lorentz_field",
    "internal_magnetic_field",
    "m_field",
    "field_bundle",
]

RHO_FLOOR = 1e-280


@dataclass
class FieldBundle:
    """All per-electron fields at one radius (signed radial components)."""

    r: float
    e_ee: float
    e_H: float
    e_xc: float
    Z: float
    D: float
    L: float
    I_m: float
    M: float
    omega_L: float


@dataclass
class KineticTensorValue:
    """t_ab = (r_a r_b / r^2) f + delta_ab k at radius r."""

    r: float
    f: float
    k: float

    @property
    def trace(self):
        return self.f + 2.0 * self.k

    def matrix(self, theta=0.0):
        c, s = math.cos(theta), math.sin(theta)
        return np.array([[c * c * self.f + self.k, c * s * self.f],
                         [c * s * self.f, s * s * self.f + self.k]])


def _ratio(num, rho, r):
    """num / rho with the r = 0 limit 0 (odd over even) and NaN below RHO_FLOOR."""
    num = np.asarray(num, dtype=float)
    rho = np.asarray(rho, dtype=float)
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(rho > RHO_FLOOR, num / np.where(rho > 0, rho, 1.0), np.nan)
    out = np.where(r == 0, 0.0, out)
    return float(out) if out.ndim == 0 else out


def electron_interaction_force(r, params):
    """e_ee(r) = rho(r) * E_ee(r), from the closed form."""
    return radial_forms(params)["e_ee"](r)


def field_ee(r, params):
    """Electron-interaction field E_ee(r): Coulomb field of the pair-correlation density."""
    forms = radial_forms(params)
    return _ratio(forms["e_ee"](r), forms["rho"](r), r)


def _coulomb_x(source, r, spec):
    """x-component of int source(p) (r - p)/|r - p|^3 d^2p at (r, 0).

    Polar coordinates about (r, 0): (r - p) = -s e_phi, so the integrand is
    -cos(phi) source / s^2 (the Jacobian s is applied by the integrator).
    The angular integral is done first so the 1/s behaviour cancels.
    """
    def integrand(s, phi):
        return -np.cos(phi) * source(r + s * np.cos(phi), s * np.sin(phi)) / (s * s)

    return integrate_2d_polar(integrand, r, spec)


def field_ee_oracle(r, params, spec=QuadSpec()):
    """E_ee(r) by Coulomb's law over the pair-correlation density, 2-D quadrature."""
    r = float(r)
    if r == 0:
        return 0.0
    rho_r = float(density(r, params))

    def pair(x, y):
        return 2.0 * np.abs(psi_xy(r, 0.0, x, y, params)) ** 2 / rho_r

    return _coulomb_x(pair, r, spec)


def ring_potential(r, a):
    """Potential at radius r in the plane of a ring of radius a, unit line charge.

    Phi = 4 a K(k) / (r + a), k^2 = 4 a r / (r + a)^2.
    """
    r = np.asarray(r, dtype=float)
    a = np.asarray(a, dtype=float)
    kp = np.abs(r - a) / (r + a)
    K, _, _ = elliptic_ke_complementary(kp)
    return 4.0 * a * K / (r + a)


def ring_field(r, a, gap=None):
    """In-plane radial field at radius r of a ring of radius a with unit line charge.

    E = (2a / r) [K / (r + a) + E / (r - a)], from -dPhi/dr; it has a
    principal-value pole at a = r.  The complementary modulus
    |r - a| / (r + a) is formed directly to keep K accurate near the pole.
    Near the pole pass ``gap = a - r`` exactly, since r - a recomputed from a
    rounded ``a`` carries an absolute error of order eps * r.
    """
    r = np.asarray(r, dtype=float)
    a = np.asarray(a, dtype=float)
    diff = r - a if gap is None else -np.asarray(gap, dtype=float)
    kp = np.abs(diff) / (r + a)
    K, E, _ = elliptic_ke_complementary(kp)
    return (2.0 * a / r) * (K / (r + a) + E / diff)


def _hartree_reach(params, spec):
    return max(spec.truncation_radius,
               math.sqrt((math.log(1.0 / spec.abs_tol) + 30.0) / params.omega))


def field_hartree(r, params, spec=QuadSpec()):
    """Hartree field E_H(r) by superposing ring sources.

    E_H(r) = PV int_0^inf rho(a) E_ring(r, a) da.  The pole at a = r is
    removed by pairing a = r - t with a = r + t for t in (0, r); what is left
    is the integrable log singularity of K, resolved by adaptive subdivision.
    """
    r = float(r)
    if r == 0:
        return 0.0
    rho = radial_forms(params)["rho"]
    reach = _hartree_reach(params, spec)

    def F(a):
        return rho(a) * ring_field(r, a)

    if r > reach + 1.0:
        # no density near the pole; plain integral over the occupied region
        return integrate_1d(F, 0.0, reach, spec)

    def paired(t):
        lo = r - t
        hi = r + t
        return rho(lo) * ring_field(r, lo, -t) + rho(hi) * ring_field(r, hi, t)

    # the log singularity sits at t = 0; a mid-point break helps the bisection
    inner = integrate_1d(paired, 0.0, r, spec, points=(0.5 * r,))
    tail = integrate_1d(F, 2.0 * r, max(2.0 * r, r + reach), spec)
    return inner + tail


def field_hartree_oracle(r, params, spec=QuadSpec()):
    """E_H(r) by Coulomb's law over rho, 2-D polar quadrature about the field point."""
    r = float(r)
    if r == 0:
        return 0.0
    rho = radial_forms(params)["rho"]
    return _coulomb_x(lambda x, y: rho(np.hypot(x, y)), r, spec)


def field_xc(r, params, spec=QuadSpec()):
    """Pauli-Coulomb field E_xc = E_ee - E_H."""
    return field_ee(r, params) - field_hartree(r, params, spec)


def kinetic_tensor(r, params):
    """Kinetic energy tensor functions f(r), k(r) from the closed forms."""
    forms = radial_forms(params)
    return KineticTensorValue(float(r), float(forms["f"](r)), float(forms["k"](r)))


def _gradient_psi1(x, y, X, Y, params):
    """Gradient of Psi with respect to electron 1 at (x, y), electron 2 at (X, Y)."""
    om = params.omega
    ux = X - x
    uy = Y - y
    s = np.hypot(ux, uy)
    poly = 1.0 + s * (params.c2 + s * (params.c3 + s * params.c4))
    # P'(s)/s, singular as 1/s but always multiplied by u_x or u_y
    dps = params.c2 / s + 2.0 * params.c3 + 3.0 * params.c4 * s
    w = ux + 1j * uy
    gauss = params.norm * np.exp(-0.5 * om * (x * x + y * y + X * X + Y * Y))
    # d/dx1 = -d/du_x on the polynomial part
    dgx = -(poly + w * dps * ux)
    dgy = -(1j * poly + w * dps * uy)
    amp = w * poly
    return gauss * (dgx - om * x * amp), gauss * (dgy - om * y * amp)


def kinetic_tensor_oracle(x, y, params, spec=QuadSpec()):
    """t_ab at the point (x, y) by 2-D quadrature of analytic gradients.

    t_ab = Re int d_a Psi*(r, y') d_b Psi(r, y') d^2y'.  Returns (t_xx, t_yy, t_xy).
    """
    out = []
    for a, b in ((0, 0), (1, 1), (0, 1)):
        def integrand(s, phi, a=a, b=b):
            X = x + s * np.cos(phi)
            Y = y + s * np.sin(phi)
            g = _gradient_psi1(x, y, X, Y, params)
            return (np.conj(g[a]) * g[b]).real

        out.append(integrate_2d_polar(integrand, math.hypot(x, y), spec))
    return tuple(out)


def auxiliary_functions(r, params):
    """The auxiliary integrals (f1, f2, f3) of the kinetic tensor, from the closed forms.

    f1 = (1/r) int (g1^2 - g0^2/u^4) u^2 e^{-Omega u^2} I1(2 Omega r u) du
    f2 = int u g1 g0 e^{-Omega u^2} I0(2 Omega r u) du
    f3 = int (g0^2 / u) e^{-Omega u^2} I0(2 Omega r u) du
    with g1 = g0'/u.
    """
    forms = radial_forms(params)
    grow = np.exp(2.0 * params.omega * np.square(r))
    return tuple(grow * forms[key](r) for key in ("f1w", "f2w", "f3w"))


def auxiliary_oracle(r, params, spec=QuadSpec()):
    """(f1, f2, f3) by direct quadrature of their defining integrals.

    (g1^2 - g0^2/u^4) u^2 is formed as (g1 - g0/u^2)(g1 + g0/u^2) u^2 with
    g1 - g0/u^2 = c2 + 2 c3 u + 3 c4 u^2, so there is no cancellation at small u.
    """
    r = float(r)
    if not r > 0:
        raise ValueError("r must be positive")
    om = params.omega
    P = np.polynomial.polynomial
    g = g0_coefficients(params)
    dg = P.polyder(g)
    diff = np.array([params.c2, 2.0 * params.c3, 3.0 * params.c4])
    s2 = g0_squared_coefficients(params)

    def weight(u):
        # e^{-Omega u^2} e^{2 Omega r u} = e^{-Omega (u - r)^2 + Omega r^2}
        return np.exp(-om * (u - r) ** 2 + om * r * r)

    def f1(u):
        summ = 2.0 + u * (3.0 * params.c2 + u * (4.0 * params.c3 + u * 5.0 * params.c4))
        return P.polyval(u, diff) * summ * u * weight(u) * bessel_i1e(2 * om * r * u) / r

    def f2(u):
        return P.polyval(u, dg) * P.polyval(u, g) * weight(u) * bessel_i0e(2 * om * r * u)

    def f3(u):
        return P.polyval(u, s2[1:]) * weight(u) * bessel_i0e(2 * om * r * u)

    scale = 1.0 / math.sqrt(om)
    return tuple(integrate_semi_infinite(h, scale, spec, center=r) for h in (f1, f2, f3))


def kinetic_force(r, params):
    """Kinetic 'force' z(r) = 2 [d(f + k)/dr + f / r]."""
    forms = radial_forms(params)
    r_arr = np.asarray(r, dtype=float)
    out = np.where(r_arr == 0, 0.0, forms["z"](r_arr))
    return float(out) if out.ndim == 0 else out


def kinetic_force_oracle(r, params, spec=QuadSpec(), h=0.02):
    """z(r) from a finite-difference divergence of the quadrature tensor.

    z = 2 (d_x t_xx + d_y t_xy) at (r, 0), each derivative by the fourth-order
    central stencil with step h.
    """
    r = float(r)

    def t(x, y):
        return kinetic_tensor_oracle(x, y, params, spec)

    def d4(fm2, fm1, fp1, fp2):
        return (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h)

    txx = [t(r + k * h, 0.0)[0] for k in (-2, -1, 1, 2)]
    txy = [t(r, k * h)[2] for k in (-2, -1, 1, 2)]
    return 2.0 * (d4(*txx) + d4(*txy))


def kinetic_field(r, params):
    """Kinetic field Z = z / rho, 0 at the origin."""
    forms = radial_forms(params)
    return _ratio(kinetic_force(r, params), forms["rho"](r), r)


def differential_density_force(r, params):
    """d(r) = -(1/4) d/dr (rho'' + rho'/r), 0 at the origin."""
    forms = radial_forms(params)
    r_arr = np.asarray(r, dtype=float)
    out = np.where(r_arr == 0, 0.0, forms["d"](r_arr))
    return float(out) if out.ndim == 0 else out


def differential_density_field(r, params):
    """Differential density field D = d / rho."""
    forms = radial_forms(params)
    return _ratio(differential_density_force(r, params), forms["rho"](r), r)


def lorentz_field(r, params):
    """L = 2 omega_L j / rho, with j the total azimuthal current."""
    j = current_components(r, params).j_total
    return _ratio(2.0 * params.omega_L * j, density(r, params), r)


def internal_magnetic_field(r, params):
    """I_m = -2 omega_L j / rho + omega_L^2 r."""
    r_arr = np.asarray(r, dtype=float)
    out = -np.asarray(lorentz_field(r_arr, params)) + params.omega_L**2 * r_arr
    return float(out) if out.ndim == 0 else out


def m_field(r, params):
    """M = -(L + I_m), which collapses to -omega_L^2 r."""
    r_arr = np.asarray(r, dtype=float)
    out = -(np.asarray(lorentz_field(r_arr, params)) + internal_magnetic_field(r_arr, params))
    return float(out) if out.ndim == 0 else out


def field_bundle(r, params, spec=QuadSpec()):
    """All fields at one radius."""
    r = float(r)
    e_ee = field_ee(r, params)
    e_h = field_hartree(r, params, spec)
    return FieldBundle(
        r=r,
        e_ee=e_ee,
        e_H=e_h,
        e_xc=e_ee - e_h,
        Z=kinetic_field(r, params),
        D=differential_density_field(r, params),
        L=lorentz_field(r, params),
        I_m=internal_magnetic_field(r, params),
        M=m_field(r, params),
        omega_L=params.omega_L,
    )
