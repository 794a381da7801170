"""Energy components and expectation values, each by two independent routes.

The "closed" route uses Gaussian moments of the factorised wave function,
the exact Fourier transform of rho, or elliptic-integral expressions.  The
"quadrature" route integrates the local sources and fields numerically, in
the virial form int rho r.F d^2r where it applies.
"""

from dataclasses import asdict, dataclass, fields as dc_fields
import math

import numpy as np

from .closedform import radial_forms
from .fields import field_hartree, ring_potential
from .numerics import QuadSpec, elliptic_e, elliptic_k, integrate_1d, integrate_semi_infinite
from .sources import density_fourier
from .wavefunction import g0_coefficients, g0_squared_coefficients, gaussian_moment

__all__ = [
    "EnergyReport",
    "REFERENCE_VALUES",
    "energy_ee",
    "energy_ee_virial",
    "energy_ee_oracle",
    "energy_hartree",
    "energy_hartree_closed",
    "energy_hartree_oracle",
    "energy_xc",
    "energy_xc_closed",
    "kinetic_energy",
    "kinetic_energy_virial",
    "kinetic_energy_trace",
    "energy_es_mag",
    "energy_es_mag_quadrature",
    "energy_es",
    "energy_mag",
    "total_energy",
    "ionization_potential",
    "expectation_values",
    "expectation_values_quadrature",
    "closed_form_report",
    "quadrature_report",
]

# reference values every route is compared against
REFERENCE_VALUES = {
    "T": 0.615577,
    "E_H": 0.755497,
    "E_xc": -0.501339,
    "E_ee": 0.254158,
    "E_es_plus_mag": 0.742657,
    "E_total": 1.612391,
    "IP": -1.343659,
    "expect_r2": 20.567403,
    "expect_r": 5.823553,
    "expect_inv_r": 1.041717,
    "expect_delta": 0.0555377,
}


@dataclass
class EnergyReport:
    """Energy components and expectation values, in effective atomic units."""

    T: float
    E_H: float
    E_xc: float
    E_ee: float
    E_es_plus_mag: float
    E_total: float
    IP: float
    expect_r2: float
    expect_r: float
    expect_inv_r: float
    expect_delta: float

    def to_dict(self):
        return asdict(self)

    @classmethod
    def names(cls):
        return [f.name for f in dc_fields(cls)]


def _rel_moment_sum(coefs, power_shift, alpha):
    """sum_j coefs[j] int u^{j + shift} e^{-alpha u^2} du."""
    return sum(c * gaussian_moment(j + power_shift, alpha) for j, c in enumerate(coefs) if c != 0.0)


def _rel_norm_sq(params):
    """N_r^2, the relative factor carries N / N_R with N_R^2 = 2 Omega / pi."""
    return params.norm_rel**2


def energy_ee(params):
    """Electron-interaction energy <1/u> from Gaussian moments.

    <1/u> = N_r^2 * 2 pi int e^{-Omega u^2 / 2} g0(u)^2 du.
    """
    s = g0_squared_coefficients(params)
    return _rel_norm_sq(params) * 2.0 * math.pi * _rel_moment_sum(s, 0, 0.5 * params.omega)


def _radial_integral(f, params, spec):
    """int_0^inf f(r) 2 pi r dr for Gaussian-confined f."""
    return integrate_semi_infinite(lambda r: 2.0 * np.pi * r * f(r),
                                   1.0 / math.sqrt(params.omega), spec)


def energy_ee_virial(params, spec=QuadSpec()):
    """E_ee = int r e_ee(r) d^2r with e_ee = rho E_ee."""
    e = radial_forms(params)["e_ee"]
    return _radial_integral(lambda r: r * e(r), params, spec)


def energy_ee_oracle(params, spec=QuadSpec()):
    """<1/u> by factorised quadrature of |Psi|^2 / u over both electrons."""
    om = params.omega
    c = g0_coefficients(params)

    def com(x):
        return 2.0 * np.pi * x * np.exp(-2.0 * om * x * x)

    def rel(x):
        g = np.polynomial.polynomial.polyval(x, c)
        return 2.0 * np.pi * np.exp(-0.5 * om * x * x) * g * g

    a = integrate_semi_infinite(com, 1.0 / math.sqrt(2.0 * om), spec)
    b = integrate_semi_infinite(rel, math.sqrt(2.0 / om), spec)
    return params.norm**2 * a * b


def energy_hartree_closed(params, spec=QuadSpec()):
    """E_H = (1/2) int_0^inf |rho_hat(q)|^2 dq with the exact transform of rho."""
    scale = 2.0 * math.sqrt(params.omega)
    return 0.5 * integrate_semi_infinite(lambda q: density_fourier(q, params) ** 2, scale, spec)


def energy_hartree(params, spec=QuadSpec()):
    """E_H = int rho r E_H(r) d^2r with the ring-kernel Hartree field."""
    rho = radial_forms(params)["rho"]
    inner = QuadSpec(rel_tol=max(spec.rel_tol, 1e-9), abs_tol=spec.abs_tol,
                     max_subdivisions=spec.max_subdivisions,
                     truncation_radius=spec.truncation_radius)

    def f(r):
        eh = np.array([field_hartree(x, params, inner) for x in np.atleast_1d(r)])
        return rho(r) * r * eh

    return _radial_integral(f, params, spec)


def energy_hartree_oracle(params, spec=QuadSpec()):
    """E_H = (1/2) int int rho rho / |r - r'| as a double integral over ring potentials.

    E_H = (1/2) int 2 pi r rho(r) [int rho(a) Phi_ring(r, a) da] dr; the inner
    integral has a log singularity at a = r, used as a breakpoint.
    """
    rho = radial_forms(params)["rho"]
    reach = max(spec.truncation_radius,
                math.sqrt((math.log(1.0 / spec.abs_tol) + 30.0) / params.omega))
    inner_spec = QuadSpec(rel_tol=max(spec.rel_tol, 1e-9), abs_tol=spec.abs_tol,
                          max_subdivisions=spec.max_subdivisions,
                          truncation_radius=spec.truncation_radius)

    def potential(r):
        def g(a):
            return rho(a) * ring_potential(r, a)
        return integrate_1d(g, 0.0, max(reach, r + 1.0), inner_spec, points=(r,))

    def f(r):
        return rho(r) * np.array([potential(x) for x in np.atleast_1d(r)])

    return 0.5 * _radial_integral(f, params, spec)


def energy_xc(params, spec=QuadSpec()):
    """E_xc = int rho r E_xc d^2r = E_ee - E_H (virial routes)."""
    return energy_ee_virial(params, spec) - energy_hartree(params, spec)


def energy_xc_closed(params, spec=QuadSpec()):
    """E_xc = E_ee - E_H with the closed-form routes."""
    return energy_ee(params) - energy_hartree_closed(params, spec)


def kinetic_energy(params):
    """Kinetic energy from the centre-of-mass / relative split.

    T = Omega/2 + N_r^2 2 pi int [(h')^2 + h^2/u^2] u du, with
    h = e^{-Omega u^2/4} g0 and h' = e^{-Omega u^2/4}(g0' - Omega u g0 / 2).
    """
    P = np.polynomial.polynomial
    om = params.omega
    g = g0_coefficients(params)
    dh = P.polysub(P.polyder(g), P.polymul([0.0, 0.5 * om], g))
    # (h')^2 u + h^2 / u; g0^2 / u starts at u^1
    poly = P.polyadd(P.polymul(P.polymul(dh, dh), [0.0, 1.0]), g0_squared_coefficients(params)[1:])
    rel = _rel_norm_sq(params) * 2.0 * math.pi * _rel_moment_sum(poly, 0, 0.5 * om)
    return 0.5 * om + rel


def kinetic_energy_virial(params, spec=QuadSpec()):
    """T = -(1/2) int r z(r) d^2r."""
    z = radial_forms(params)["z"]
    return _radial_integral(lambda r: -0.5 * r * z(r), params, spec)


def kinetic_energy_trace(params, spec=QuadSpec()):
    """T = int (t_xx + t_yy) d^2r = int (f + 2k) d^2r."""
    forms = radial_forms(params)
    return _radial_integral(lambda r: forms["f"](r) + 2.0 * forms["k"](r), params, spec)


def _expect_r2_closed(params):
    """int rho r^2 d^2r = 2 (<R^2> + <u^2>/4), <R^2> = 1/(2 Omega)."""
    s = g0_squared_coefficients(params)
    u2 = _rel_norm_sq(params) * 2.0 * math.pi * _rel_moment_sum(s, 3, 0.5 * params.omega)
    return 2.0 * (0.5 / params.omega + 0.25 * u2)


def energy_es_mag(params):
    """External electrostatic plus magnetostatic energy (1/2) k_eff int rho r^2."""
    return 0.5 * params.k_eff * _expect_r2_closed(params)


def energy_es(params):
    """Electrostatic part (1/2) omega0^2 int rho r^2."""
    return 0.5 * params.omega0_sq * _expect_r2_closed(params)


def energy_mag(params):
    """Magnetostatic part (1/2) omega_L^2 int rho r^2."""
    return 0.5 * params.omega_L**2 * _expect_r2_closed(params)


def energy_es_mag_quadrature(params, spec=QuadSpec(), density_fn=None):
    """int rho (1/2) k_eff r^2 d^2r by quadrature; ``density_fn`` overrides rho."""
    rho = radial_forms(params)["rho"] if density_fn is None else density_fn
    return _radial_integral(lambda r: 0.5 * params.k_eff * r * r * rho(r), params, spec)


def total_energy(params, spec=QuadSpec()):
    """E = T + E_H + E_xc + E_es+mag with the closed-form routes."""
    e_h = energy_hartree_closed(params, spec)
    return kinetic_energy(params) + e_h + (energy_ee(params) - e_h) + energy_es_mag(params)


def ionization_potential(params, spec=QuadSpec()):
    """IP = E(one electron) - E(two electrons), with E(one electron) = Omega."""
    return params.omega - total_energy(params, spec)


def expectation_values(params):
    """(<r^2>, <r>, <1/r>, <delta(r)>) from closed forms.

    <r> and <1/r> use the complete elliptic integrals at modulus 1/sqrt(2);
    <r^2> and <delta> = rho(0) use Gaussian moments.
    """
    om = params.omega
    A, B, C, N = params.c2, params.c3, params.c4, params.norm
    p = 1.0 / math.sqrt(2.0)
    k, e = elliptic_k(p), elliptic_e(p)
    sq = math.sqrt
    pi = math.pi
    r1 = pi**2 * N**2 / (2 * om**6.5) * (
        47 / 2 * sq(pi) * om**2 * (A * A + 2 * B)
        + 639 / 4 * sq(pi) * om * (2 * A * C + B * B)
        + sq(2) * om**1.5 * (174 * e - 47 * k) * (A * B + C)
        + 2 * sq(2) * A * om**2.5 * (15 * e - 4 * k)
        + 5 * sq(2 * om) * B * C * (273 * e - 74 * k)
        + 11313 / 8 * sq(pi) * C * C
        + 5 * sq(pi) * om**3)
    rinv = pi**2 * N**2 / (8 * om**5.5) * (
        76 * sq(pi) * om**2 * (A * A + 2 * B)
        + 378 * sq(pi) * om * (2 * A * C + B * B)
        + 48 * sq(2) * om**1.5 * (9 * e - 2 * k) * (A * B + C)
        + 16 * sq(2) * A * om**2.5 * (6 * e - k)
        + 8 * sq(2 * om) * B * C * (336 * e - 83 * k)
        + 2601 * sq(pi) * C * C
        + 24 * sq(pi) * om**3)
    s = g0_squared_coefficients(params)
    delta = 4.0 * pi * N**2 * _rel_moment_sum(s, 1, om)
    return _expect_r2_closed(params), r1, rinv, delta


def expectation_values_quadrature(params, spec=QuadSpec()):
    """(<r^2>, <r>, <1/r>, <delta(r)>) as int rho w(r) d^2r; delta from rho(0)."""
    rho = radial_forms(params)["rho"]
    r2 = _radial_integral(lambda r: r * r * rho(r), params, spec)
    r1 = _radial_integral(lambda r: r * rho(r), params, spec)
    # rho / r * 2 pi r is finite at the origin
    rinv = integrate_semi_infinite(lambda r: 2.0 * np.pi * rho(r), 1.0 / math.sqrt(params.omega), spec)
    return r2, r1, rinv, float(rho(0.0))


def closed_form_report(params, spec=QuadSpec()):
    """EnergyReport from the closed-form routes."""
    t = kinetic_energy(params)
    e_ee = energy_ee(params)
    e_h = energy_hartree_closed(params, spec)
    es = energy_es_mag(params)
    e = t + e_h + (e_ee - e_h) + es
    r2, r1, rinv, delta = expectation_values(params)
    return EnergyReport(t, e_h, e_ee - e_h, e_ee, es, e, params.omega - e, r2, r1, rinv, delta)


def quadrature_report(params, spec=QuadSpec()):
    """EnergyReport from the independent quadrature routes."""
    t = kinetic_energy_virial(params, spec)
    e_ee = energy_ee_virial(params, spec)
    e_h = energy_hartree(params, spec)
    es = energy_es_mag_quadrature(params, spec)
    e = t + e_h + (e_ee - e_h) + es
    r2, r1, rinv, delta = expectation_values_quadrature(params, spec)
    return EnergyReport(t, e_h, e_ee - e_h, e_ee, es, e, params.omega - e, r2, r1, rinv, delta)
