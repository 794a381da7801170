"""The analytic triplet state of two electrons in a 2-D harmonic dot.

In centre-of-mass R = (r1 + r2)/2 and relative u = r2 - r1 coordinates the
state factorises,

    Psi = N exp(-Omega R^2) * exp(i theta_u) exp(-Omega u^2 / 4) g0(u),
    g0(u) = u + c2 u^2 + c3 u^3 + c4 u^4,

with theta_u = atan2(u_y, u_x).  The polynomial terminates only for special
frequencies; the one used here satisfies 135 Omega^2 - 40 Omega + 1 = 0, which
also fixes c3 = (1/3 - 3 Omega)/8 and c4 = (1 - 25 Omega)/360.
"""

from dataclasses import dataclass, field, replace
import math

import numpy as np

from .numerics import QuadSpec, integrate_1d, integrate_semi_infinite

__all__ = [
    "TripletParams",
    "PlanarPoint",
    "ComplexAmplitude",
    "NodeScan",
    "psi",
    "psi_xy",
    "antisymmetry_residual",
    "parity_residual",
    "norm_check",
    "norm_closed_form",
    "coalescence_profile",
    "node_scan",
    "excited_node_u",
    "g0_coefficients",
    "g0_squared_coefficients",
    "gaussian_moment",
    "terminating_omega",
]

_INVARIANT_TOL = 1e-9


def terminating_omega():
    """Larger root of 135 W^2 - 40 W + 1 = 0 (quartic g0 with c2 = 1/3)."""
    return (20.0 + math.sqrt(265.0)) / 135.0


def gaussian_moment(n, alpha):
    """Integral of u**n exp(-alpha u^2) over (0, inf), for n > -1."""
    return math.gamma(0.5 * (n + 1)) / (2.0 * alpha ** (0.5 * (n + 1)))


@dataclass(frozen=True)
class TripletParams:
    """Constant set of the analytic state.

    Attributes
    ----------
    norm : float
        Normalisation N of the two-electron wave function.
    m : int
        Relative angular momentum, fixed to +1.
    c2, c3, c4 : float
        Coefficients of g0(u) = u + c2 u^2 + c3 u^3 + c4 u^4.
    omega : float
        Oscillator frequency Omega of the Gaussian envelope.
    omega_L : float
        Larmor frequency.
    k_eff : float
        Effective force constant, Omega^2 = k_eff.
    omega0_sq : float
        Square of the confinement frequency, k_eff - omega_L^2.
    strict : bool
        When true the two frequency relations are enforced to 1e-9.  The
        constants rounded to six digits break them at the 1e-7 level, so
        ``TripletParams.rounded()`` turns the check off.
    """

    norm: float
    m: int
    c2: float
    c3: float
    c4: float
    omega: float
    omega_L: float
    k_eff: float
    omega0_sq: float
    strict: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.m != 1:
            raise ValueError("only the m = +1 state is implemented")
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if self.omega_L < 0:
            raise ValueError("omega_L must be non-negative")
        if self.strict:
            bad = self.invariant_violations()
            if bad:
                raise ValueError("; ".join(bad))

    def invariant_violations(self, tol=_INVARIANT_TOL):
        """Return a list of broken frequency relations (empty if none)."""
        out = []
        if abs(self.omega**2 - self.k_eff) > tol:
            out.append(f"Omega^2 - k_eff = {self.omega**2 - self.k_eff:.3e}")
        if abs(self.k_eff - self.omega_L**2 - self.omega0_sq) > tol:
            out.append(f"k_eff - omega_L^2 - omega0_sq = "
                       f"{self.k_eff - self.omega_L**2 - self.omega0_sq:.3e}")
        return out

    @classmethod
    def default(cls, omega_L=0.1):
        """Working constant set.

        Omega = 0.268732 as published; c3, c4 follow from the termination
        conditions, N is fixed by normalisation and k_eff = Omega^2.  These
        round to the published c3, c4, k_eff and N.
        """
        return cls.from_omega(0.268732, omega_L)

    @classmethod
    def exact(cls, omega_L=0.1):
        """Constant set at the exact terminating frequency."""
        return cls.from_omega(terminating_omega(), omega_L)

    @classmethod
    def from_omega(cls, omega, omega_L=0.1):
        c2 = 1.0 / 3.0
        c3 = (1.0 / 3.0 - 3.0 * omega) / 8.0
        c4 = (1.0 - 25.0 * omega) / 360.0
        unit = cls(1.0, 1, c2, c3, c4, omega, omega_L, omega**2,
                   omega**2 - omega_L**2)
        return replace(unit, norm=1.0 / math.sqrt(norm_closed_form(unit)))

    @classmethod
    def rounded(cls):
        """The constants as quoted to six or more digits (not mutually consistent)."""
        return cls(0.02246632108, 1, 1.0 / 3.0, -0.059108, -0.015884, 0.268732,
                   0.1, 0.072217, 0.062217, strict=False)

    def with_omega_L(self, omega_L):
        """Same state in a different field, keeping k_eff fixed."""
        return replace(self, omega_L=omega_L, omega0_sq=self.k_eff - omega_L**2)

    @property
    def norm_com(self):
        """Normalisation of the centre-of-mass Gaussian exp(-Omega R^2)."""
        return math.sqrt(2.0 * self.omega / math.pi)

    @property
    def norm_rel(self):
        """Normalisation of the relative factor, N / norm_com."""
        return self.norm / self.norm_com


@dataclass(frozen=True)
class PlanarPoint:
    """Point in the plane in polar form."""

    r: float
    theta: float = 0.0

    def __post_init__(self):
        if not self.r >= 0:
            raise ValueError("radius must be non-negative")

    @property
    def xy(self):
        return self.r * math.cos(self.theta), self.r * math.sin(self.theta)


@dataclass(frozen=True)
class ComplexAmplitude:
    re: float
    im: float

    def __complex__(self):
        return complex(self.re, self.im)

    def __abs__(self):
        return math.hypot(self.re, self.im)


def g0_coefficients(params):
    """Ascending coefficients of g0(u)."""
    return np.array([0.0, 1.0, params.c2, params.c3, params.c4])


def g0_squared_coefficients(params):
    """Ascending coefficients of g0(u)^2 (degree 8)."""
    c = g0_coefficients(params)
    return np.convolve(c, c)


def psi_xy(x1, y1, x2, y2, params):
    """Vectorised Psi on Cartesian coordinates; returns a complex array.

    Uses g0(u) e^{i theta_u} = (u_x + i u_y)(1 + c2 u + c3 u^2 + c4 u^3), which
    is exact, smooth through u = 0 and carries the phase without atan2.
    """
    ux = np.asarray(x2, dtype=float) - x1
    uy = np.asarray(y2, dtype=float) - y1
    u = np.hypot(ux, uy)
    poly = 1.0 + u * (params.c2 + u * (params.c3 + u * params.c4))
    gauss = np.exp(-0.5 * params.omega * (np.square(x1) + np.square(y1)
                                          + np.square(x2) + np.square(y2)))
    return params.norm * gauss * poly * (ux + 1j * uy)


def psi(p1, p2, params):
    """Wave function at two planar points.

    Returns
    -------
    ComplexAmplitude
    """
    x1, y1 = p1.xy
    x2, y2 = p2.xy
    val = complex(psi_xy(x1, y1, x2, y2, params))
    return ComplexAmplitude(val.real, val.imag)


def antisymmetry_residual(p1, p2, params):
    """|Psi(p1, p2) + Psi(p2, p1)|."""
    return abs(complex(psi(p1, p2, params)) + complex(psi(p2, p1, params)))


def parity_residual(center, direction, u, params):
    """Relative oddness defect of Psi about a coalescence point.

    The centre of mass is held at ``center`` (a PlanarPoint) and the
    electrons are placed at center -/+ (u/2) e(direction).  Exchanging them
    is the same as u -> -u, so the state is odd under it.
    """
    cx, cy = center.xy
    dx = 0.5 * u * math.cos(direction)
    dy = 0.5 * u * math.sin(direction)
    a = complex(psi_xy(cx - dx, cy - dy, cx + dx, cy + dy, params))
    b = complex(psi_xy(cx + dx, cy + dy, cx - dx, cy - dy, params))
    scale = abs(a)
    return abs(a + b) / scale if scale else 0.0


def norm_closed_form(params):
    """Norm from Gaussian moments of the factorised integrand."""
    s = g0_squared_coefficients(params)
    rel = sum(s[j] * gaussian_moment(j + 1, 0.5 * params.omega) for j in range(len(s)))
    return params.norm**2 * (math.pi / (2.0 * params.omega)) * 2.0 * math.pi * rel


def norm_check(params, spec=QuadSpec()):
    """Integral of |Psi|^2 over both electrons by factorised quadrature.

    |Psi|^2 = N^2 exp(-2 Omega R^2) exp(-Omega u^2 / 2) g0(u)^2, and the
    Jacobian of (r1, r2) -> (R, u) is one.
    """
    om = params.omega
    c = g0_coefficients(params)

    def com(x):
        return 2.0 * np.pi * x * np.exp(-2.0 * om * x * x)

    def rel(x):
        g = np.polynomial.polynomial.polyval(x, c)
        return 2.0 * np.pi * x * np.exp(-0.5 * om * x * x) * g * g

    a = integrate_semi_infinite(com, 1.0 / math.sqrt(2.0 * om), spec)
    b = integrate_semi_infinite(rel, math.sqrt(2.0 / om), spec)
    return params.norm**2 * a * b


def coalescence_profile(p2, direction, u_samples, params):
    """|Psi(p2 + u e, p2)| / u along a ray, and its u -> 0 limit.

    The limit is obtained by a quadratic least-squares fit in u evaluated at
    u = 0; it should equal N exp(-Omega r2^2).

    Returns
    -------
    profile : list of (u, |Psi|/u)
    limit : float
    """
    u = np.asarray(u_samples, dtype=float)
    if u.size == 0 or np.any(u <= 0):
        raise ValueError("u_samples must be positive")
    x2, y2 = p2.xy
    x1 = x2 + u * math.cos(direction)
    y1 = y2 + u * math.sin(direction)
    ratio = np.abs(psi_xy(x1, y1, x2, y2, params)) / u
    deg = min(2, u.size - 1)
    limit = float(np.polynomial.polynomial.polyfit(u, ratio, deg)[0])
    return list(zip(u.tolist(), ratio.tolist())), limit


def excited_node_u(params, tol=1e-13):
    """First positive root u* of g0(u)/u = 1 + c2 u + c3 u^2 + c4 u^3.

    Bracketed by a scan of (0, 20] and refined by bisection.
    """
    q = np.array([1.0, params.c2, params.c3, params.c4])
    grid = np.linspace(1e-6, 20.0, 4001)
    v = np.polynomial.polynomial.polyval(grid, q)
    idx = np.nonzero(np.sign(v[:-1]) != np.sign(v[1:]))[0]
    if idx.size == 0:
        raise ValueError("g0 has no positive root below u = 20")
    a, b = grid[idx[0]], grid[idx[0] + 1]
    fa = np.polynomial.polynomial.polyval(a, q)
    while b - a > tol:
        mid = 0.5 * (a + b)
        fm = np.polynomial.polynomial.polyval(mid, q)
        if np.sign(fm) == np.sign(fa):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


@dataclass
class NodeScan:
    """Sign-change loci of Re Psi and Im Psi on an (r1, r2) grid.

    ``re_points`` and ``im_points`` are (n, 2) arrays of (r1, r2).  A part
    that vanishes identically on the grid is flagged instead of scanned.
    ``labels_re`` / ``labels_im`` name each locus: 'origin', 'projection'
    (x1 = x2 for Re, y1 = y2 for Im) or 'excited' (u = u*).
    """

    theta1: float
    theta2: float
    re_points: np.ndarray
    im_points: np.ndarray
    re_identically_zero: bool
    im_identically_zero: bool
    labels_re: list
    labels_im: list
    origin_value: complex


def _edge_roots(fun, r_grid, other, axis_is_r1, tol):
    """Bisect sign changes of fun(r1, r2) along grid lines."""
    pts = []
    for fixed in other:
        if axis_is_r1:
            vals = fun(r_grid, np.full_like(r_grid, fixed))
        else:
            vals = fun(np.full_like(r_grid, fixed), r_grid)
        s = np.sign(vals)
        for i in np.nonzero(s[:-1] * s[1:] < 0)[0]:
            a, b = r_grid[i], r_grid[i + 1]
            sa = s[i]
            while b - a > tol:
                mid = 0.5 * (a + b)
                fm = fun(mid, fixed) if axis_is_r1 else fun(fixed, mid)
                if np.sign(fm) == sa:
                    a = mid
                else:
                    b = mid
            root = 0.5 * (a + b)
            pts.append((root, fixed) if axis_is_r1 else (fixed, root))
        for i in np.nonzero(s == 0)[0]:
            pts.append((r_grid[i], fixed) if axis_is_r1 else (fixed, r_grid[i]))
    return pts


def node_scan(theta1, theta2, r_max, grid_n, params, tol=1e-10):
    """Locate the nodal lines of Re Psi and Im Psi at fixed electron angles.

    Parameters
    ----------
    theta1, theta2 : float
        Angles of the two electrons (radians).
    r_max : float
        Grid extent in r1 and r2.
    grid_n : int
        Points per axis, at least 16.
    """
    if grid_n < 16:
        raise ValueError("grid_n must be at least 16")
    if not r_max > 0:
        raise ValueError("r_max must be positive")
    c1, s1 = math.cos(theta1), math.sin(theta1)
    c2, s2 = math.cos(theta2), math.sin(theta2)

    def amp(r1, r2):
        r1 = np.asarray(r1, dtype=float)
        r2 = np.asarray(r2, dtype=float)
        return psi_xy(r1 * c1, r1 * s1, r2 * c2, r2 * s2, params)

    r = np.linspace(0.0, r_max, grid_n)
    R1, R2 = np.meshgrid(r, r, indexing="ij")
    vals = amp(R1, R2)
    scale = np.max(np.abs(vals))
    # rounding noise on a part that is zero analytically
    noise = 1e-13 * scale
    re_zero = bool(np.all(np.abs(vals.real) <= noise))
    im_zero = bool(np.all(np.abs(vals.imag) <= noise))

    def clean(part):
        def fun(a, b):
            v = getattr(amp(a, b), part)
            return np.where(np.abs(v) <= noise, 0.0, v)
        return fun

    found = {}
    for part, zero in (("real", re_zero), ("imag", im_zero)):
        if zero:
            found[part] = np.zeros((0, 2))
            continue
        fun = clean(part)
        pts = _edge_roots(fun, r, r, True, tol) + _edge_roots(fun, r, r, False, tol)
        found[part] = np.unique(np.round(np.array(pts, dtype=float).reshape(-1, 2), 9), axis=0)

    u_star = excited_node_u(params)

    def label(points, proj):
        out = []
        for a, b in points:
            ux = b * c2 - a * c1
            uy = b * s2 - a * s1
            u = math.hypot(ux, uy)
            if a < 1e-9 and b < 1e-9:
                out.append("origin")
            elif abs(u - u_star) < 1e-6:
                out.append("excited")
            elif abs(proj(a, b)) < 1e-6 * max(1.0, a, b):
                out.append("projection")
            else:
                out.append("other")
        return out

    return NodeScan(
        theta1, theta2, found["real"], found["imag"], re_zero, im_zero,
        label(found["real"], lambda a, b: a * c1 - b * c2),
        label(found["imag"], lambda a, b: a * s1 - b * s2),
        complex(amp(0.0, 0.0)),
    )
