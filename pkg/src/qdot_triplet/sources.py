"""Quantal sources: density, current density, pair density, hole, density matrix.

Local sources (rho and the currents) come from the generated closed forms;
each also has an independent quadrature route over the wave function.  The
nonlocal sources are evaluated directly from Psi.

All currents are azimuthal and counter-clockwise for m = +1.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .closedform import _kummer_half, radial_forms
from .numerics import (
    QuadSpec,
    bessel_i0e,
    bessel_i1e,
    integrate_2d_polar,
    integrate_semi_infinite,
)
from .wavefunction import PlanarPoint, g0_squared_coefficients, psi_xy

__all__ = [
    "RadialProfile",
    "CurrentDecomposition",
    "PairGrid",
    "DensityMatrixGrid",
    "density",
    "density_oracle",
    "density_derivatives",
    "current_components",
    "paramagnetic_current",
    "paramagnetic_oracle",
    "pair_density",
    "xc_hole",
    "pair_sum_rule",
    "pair_grid",
    "density_matrix",
    "density_matrix_grid",
    "density_fourier",
]


@dataclass
class RadialProfile:
    """A sampled radial function with its error estimate."""

    quantity: str
    omega_L: float
    r: np.ndarray
    value: np.ndarray
    est_error: np.ndarray = None

    def __post_init__(self):
        self.r = np.asarray(self.r, dtype=float)
        self.value = np.asarray(self.value, dtype=float)
        if self.est_error is None:
            self.est_error = np.zeros_like(self.value)
        self.est_error = np.asarray(self.est_error, dtype=float)
        if self.r.shape != self.value.shape or self.r.ndim != 1:
            raise ValueError("r and value must be 1-D arrays of equal length")
        if np.any(np.diff(self.r) <= 0):
            raise ValueError("r must be strictly increasing")

    def rows(self):
        return list(zip(self.r.tolist(), self.value.tolist(), self.est_error.tolist()))


@dataclass
class CurrentDecomposition:
    """Azimuthal current components at one or more radii."""

    r: np.ndarray
    j_p: np.ndarray
    j_d: np.ndarray
    j_m: np.ndarray
    j_total: np.ndarray = field(init=False)

    def __post_init__(self):
        self.j_total = self.j_p + self.j_d + self.j_m


@dataclass
class PairGrid:
    """Nonlocal source on a square grid around a reference electron.

    ``x`` runs along the reference direction and ``y`` perpendicular to it;
    ``values[i, j]`` belongs to (x[i], y[j]).
    """

    kind: str
    reference: PlanarPoint
    x: np.ndarray
    y: np.ndarray
    values: np.ndarray


@dataclass
class DensityMatrixGrid:
    """gamma(r theta, r' theta') on a grid of radii; ``values[i, j]`` is at (r[i], r_prime[j])."""

    theta: float
    theta_prime: float
    r: np.ndarray
    r_prime: np.ndarray
    values: np.ndarray

    def hermiticity_residual(self, params, spec=QuadSpec(), pairs=((0, 1),)):
        """max |gamma(a, b) - conj(gamma(b, a))| over sampled index pairs."""
        worst = 0.0
        for i, j in pairs:
            forward = self.values[i, j]
            back = density_matrix(self.theta_prime, self.theta, self.r_prime[j], self.r[i],
                                  params, spec)
            worst = max(worst, abs(forward - np.conj(back)))
        return worst


def density(r, params):
    """Electron density rho(r) from the closed form."""
    return radial_forms(params)["rho"](r)


def density_derivatives(r, params, order=3):
    """[rho, rho', rho'', rho'''] truncated to ``order`` (at most 3).

    Odd derivatives are returned as exact zeros at r = 0.
    """
    if not 0 <= order <= 3:
        raise ValueError("order must be 0, 1, 2 or 3")
    forms = radial_forms(params)
    r_arr = np.asarray(r, dtype=float)
    out = []
    for n, key in enumerate(("rho", "rho1", "rho2", "rho3")[: order + 1]):
        v = forms[key](r_arr)
        if n % 2:
            v = np.where(r_arr == 0, 0.0, v)
            v = float(v) if np.ndim(v) == 0 else v
        out.append(v)
    return out


def density_oracle(r, params, spec=QuadSpec()):
    """rho(r) = 4 pi N^2 e^{-2 Omega r^2} int e^{-Omega x^2} x g0(x)^2 I0(2 Omega r x) dx by quadrature."""
    om = params.omega
    s = g0_squared_coefficients(params)
    r = float(r)

    def integrand(x):
        poly = np.polynomial.polynomial.polyval(x, s)
        # e^{-2 Om r^2 - Om x^2} I0(2 Om r x) = e^{-Om (x - r)^2 - Om r^2} i0e(2 Om r x)
        return x * poly * np.exp(-om * (x - r) ** 2 - om * r * r) * bessel_i0e(2 * om * r * x)

    val = integrate_semi_infinite(integrand, 1.0 / math.sqrt(om), spec, center=r)
    return 4.0 * math.pi * params.norm**2 * val


def paramagnetic_current(r, params):
    """Paramagnetic current density j_p(r), azimuthal."""
    return radial_forms(params)["jp"](r)


def current_components(r, params):
    """Paramagnetic, diamagnetic and magnetisation currents at radius r.

    j_d = omega_L r rho and j_m = -(1/2) rho' (spin-aligned triplet).
    """
    forms = radial_forms(params)
    r = np.asarray(r, dtype=float)
    jp = forms["jp"](r)
    jd = params.omega_L * r * forms["rho"](r)
    jm = -0.5 * forms["rho1"](r)
    jm = np.where(r == 0, 0.0, jm)
    if r.ndim == 0:
        return CurrentDecomposition(r, float(jp), float(jd), float(jm))
    return CurrentDecomposition(r, jp, jd, jm)


def pair_density(reference, target, params):
    """Pair-correlation density g(r r') = 2 |Psi(r, r')|^2 / rho(r)."""
    x1, y1 = reference.xy
    x2, y2 = target.xy
    amp = psi_xy(x1, y1, x2, y2, params)
    return float(2.0 * np.abs(amp) ** 2 / density(reference.r, params))


def xc_hole(reference, target, params):
    """Fermi-Coulomb hole rho_xc(r r') = g(r r') - rho(r')."""
    return pair_density(reference, target, params) - float(density(target.r, params))


def _pair_values(ref_xy, tx, ty, params, rho_ref):
    amp = psi_xy(ref_xy[0], ref_xy[1], tx, ty, params)
    return 2.0 * np.abs(amp) ** 2 / rho_ref


def pair_sum_rule(reference, params, kind="g", spec=QuadSpec()):
    """Total charge of g (expect 1) or rho_xc (expect -1) about ``reference``.

    Polar quadrature centred on the reference electron, where |Psi|^2 is
    smooth in (s, phi).
    """
    if kind not in ("g", "xc"):
        raise ValueError("kind must be 'g' or 'xc'")
    rx, ry = reference.xy
    rho_ref = float(density(reference.r, params))
    forms = radial_forms(params)

    def integrand(s, phi):
        tx = rx + s * np.cos(phi)
        ty = ry + s * np.sin(phi)
        val = _pair_values((rx, ry), tx, ty, params, rho_ref)
        if kind == "xc":
            val = val - forms["rho"](np.hypot(tx, ty))
        return val

    return integrate_2d_polar(integrand, reference.r, spec)


def pair_grid(reference_r, params, kind="g", extent=8.0, n=121):
    """g or rho_xc on an n x n grid over [-extent, extent]^2 in the target.

    The reference electron sits on the x-axis at ``reference_r``.
    """
    if kind not in ("g", "xc"):
        raise ValueError("kind must be 'g' or 'xc'")
    if reference_r < 0:
        raise ValueError("reference_r must be non-negative")
    ref = PlanarPoint(reference_r, 0.0)
    x = np.linspace(-extent, extent, n)
    X, Y = np.meshgrid(x, x, indexing="ij")
    vals = _pair_values((reference_r, 0.0), X, Y, params, float(density(reference_r, params)))
    if kind == "xc":
        vals = vals - density(np.hypot(X, Y).ravel(), params).reshape(X.shape)
    return PairGrid(kind, ref, x, x.copy(), vals)


def density_matrix(theta, theta_prime, r, r_prime, params, spec=QuadSpec()):
    """Single-particle density matrix gamma(r theta, r' theta').

    gamma(a, b) = 2 int Psi*(a, y) Psi(b, y) d^2y, carrying the e^{i theta_u}
    phases, so gamma is complex and Hermitian.  The pair is first rotated so
    that its midpoint lies on the x-axis (gamma is invariant under a common
    rotation for this state); the y-integral is done in polar coordinates
    about the midpoint with a radial breakpoint where the circle passes
    through the two points.
    """
    ax, ay = r * math.cos(theta), r * math.sin(theta)
    bx, by = r_prime * math.cos(theta_prime), r_prime * math.sin(theta_prime)
    mx, my = 0.5 * (ax + bx), 0.5 * (ay + by)
    alpha = math.atan2(my, mx) if (mx or my) else 0.0
    ca, sa = math.cos(alpha), math.sin(alpha)
    ax, ay = ca * ax + sa * ay, -sa * ax + ca * ay
    bx, by = ca * bx + sa * by, -sa * bx + ca * by
    mx = 0.5 * (ax + bx)
    half = 0.5 * math.hypot(bx - ax, by - ay)

    def integrand(s, phi):
        yx = mx + s * np.cos(phi)
        yy = s * np.sin(phi)
        return np.conj(psi_xy(ax, ay, yx, yy, params)) * psi_xy(bx, by, yx, yy, params)

    points = (half,) if half > 0 else ()
    val = integrate_2d_polar(integrand, abs(mx), spec, radial_points=points)
    return 2.0 * complex(val)


def density_matrix_grid(theta, theta_prime, r_values, params, spec=QuadSpec(),
                        r_prime_values=None, executor=None):
    """gamma over a grid of (r, r') at fixed angles (radians)."""
    r_values = np.asarray(r_values, dtype=float)
    rp = r_values if r_prime_values is None else np.asarray(r_prime_values, dtype=float)
    jobs = [(a, b) for a in r_values for b in rp]

    def one(pair):
        return density_matrix(theta, theta_prime, pair[0], pair[1], params, spec)

    mapper = executor.map if executor is not None else map
    vals = np.array(list(mapper(one, jobs)), dtype=complex).reshape(r_values.size, rp.size)
    return DensityMatrixGrid(theta, theta_prime, r_values, rp, vals)


def paramagnetic_oracle(r, params, spec=QuadSpec(), base_angle=0.0, deltas=(0.04, 0.02, 0.01)):
    """j_p(r) from the phase of the density matrix.

    Im gamma(r e^{i(t - d)}, r e^{i(t + d)}) = 2 r sin(d) j_p + O(d^3); the
    ratio is Richardson-extrapolated in d^2 over ``deltas`` (each half the
    previous).
    """
    if not r > 0:
        raise ValueError("r must be positive")
    est = []
    for d in deltas:
        g = density_matrix(base_angle - d, base_angle + d, r, r, params, spec)
        est.append(g.imag / (2.0 * r * math.sin(d)))
    # Richardson table for an error series in d^2 with ratio 4 per halving
    table = list(est)
    factor = 4.0
    for _ in range(len(table) - 1):
        table = [(factor * table[i + 1] - table[i]) / (factor - 1.0) for i in range(len(table) - 1)]
        factor *= 4.0
    return table[0]


def density_fourier(q, params):
    """Fourier transform rho_hat(q) = int rho(r) e^{-i q.r} d^2r.

    In centre-of-mass and relative coordinates, with w = q^2 / (8 Omega),

        rho_hat = 2 N^2 (pi / (2 Omega)) e^{-w} 2 pi sum_j s_j int u^{j+1} e^{-Omega u^2 / 2} J0(q u / 2) du,

    and each Hankel moment is Gamma(n) / (2 alpha^n) M(n, 1, -w) with
    alpha = Omega / 2, n = j/2 + 1.  Integer n gives e^{-w} L_{n-1}(w);
    half-integer n gives P(-w) i0e(w/2) - Q(-w) i1e(w/2).
    """
    q = np.asarray(q, dtype=float)
    om = params.omega
    alpha = 0.5 * om
    w = q * q / (8.0 * om)
    s = g0_squared_coefficients(params)
    half = _kummer_half(1, 0.5 * (len(s) + 1))
    b0 = bessel_i0e(0.5 * w)
    b1 = bessel_i1e(0.5 * w)
    even = np.zeros_like(w)
    odd = np.zeros_like(w)
    P = np.polynomial.polynomial
    for j, c in enumerate(s):
        if c == 0.0:
            continue
        n = 0.5 * j + 1.0
        scale = c * math.gamma(n) / (2.0 * alpha**n)
        if j % 2 == 0:
            even = even + scale * _laguerre(int(n) - 1, w)
        else:
            pp, qq = half[n]
            odd = odd + scale * (P.polyval(-w, pp) * b0 - P.polyval(-w, qq) * b1)
    rel = np.exp(-w) * even + odd
    return 2.0 * params.norm**2 * (math.pi / (2.0 * om)) * np.exp(-w) * 2.0 * math.pi * rel


def _laguerre(n, w):
    """Laguerre polynomial L_n(w) by the three-term recurrence."""
    prev = np.ones_like(w)
    if n == 0:
        return prev
    cur = 1.0 - w
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - w) * cur - k * prev) / (k + 1)
    return cur
