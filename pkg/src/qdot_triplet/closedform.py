"""Exact radial closed forms built from Gaussian-Bessel moments.

Every local quantity of the state (density, currents, kinetic tensor
functions, forces) is a finite sum of moments

    F_nu^q(r) = exp(-2 Omega r^2) * int_0^inf x^q exp(-Omega x^2) I_nu(2 Omega r x) dx,

with nu in {0, 1} and integer q >= 1.  Writing z = Omega r^2, each moment is

    Gamma(a) (Omega r)^nu / (2 Omega^a nu!) * M(a, nu + 1, z) * exp(-2 z),
    a = (q + 1 + nu) / 2,

and Kummer's M reduces to elementary functions: for integer a it is e^z
times a polynomial, for half-integer a it is e^{z/2} [P(z) I0(z/2) + Q(z) I1(z/2)].
So every quantity is a ``Form``

    exp(-Omega r^2) * [p_g(r) + p_0(r) e^{-x} I0(x) + p_1(r) e^{-x} I1(x)],  x = Omega r^2 / 2,

with Laurent polynomials p_g, p_0, p_1.  Forms are closed under addition,
multiplication by powers of r and differentiation, so derivatives are exact.
The coefficients are generated from (c2, c3, c4, Omega, N) at first use.
"""

from functools import lru_cache
import math

import numpy as np

from .numerics import bessel_i0e, bessel_i1e, bessel_i1_over_x_e
from .wavefunction import g0_coefficients, g0_squared_coefficients

__all__ = ["Form", "moment", "radial_forms", "SERIES_RADIUS"]

# below this radius forms are summed as a Taylor series in r, which removes
# the cancellation between the three families when negative powers appear
SERIES_RADIUS = 0.25
_SERIES_DEGREE = 24
_FAMILIES = ("g", "i0", "i1")


class Form:
    """Sum of c * r**p * family(r) terms for one frequency Omega.

    ``terms`` maps (family, power) to a float coefficient, with family one
    of 'g' (exp(-Omega r^2)), 'i0' (exp(-3 Omega r^2 / 2) I0(Omega r^2 / 2))
    and 'i1' (the same with I1).
    """

    def __init__(self, omega, terms=None):
        self.omega = float(omega)
        self.terms = {}
        for key, c in (terms or {}).items():
            if c != 0.0:
                self.terms[key] = self.terms.get(key, 0.0) + float(c)

    def _new(self, terms):
        return Form(self.omega, terms)

    def __add__(self, other):
        if isinstance(other, (int, float)) and other == 0:
            return self
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0.0) + c
        return self._new(out)

    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return self._new({k: c * scalar for k, c in self.terms.items()})

    __rmul__ = __mul__

    def rpow(self, k):
        """Multiply by r**k."""
        return self._new({(f, p + k): c for (f, p), c in self.terms.items()})

    def derivative(self):
        """Exact d/dr."""
        om = self.omega
        out = {}

        def put(key, c):
            out[key] = out.get(key, 0.0) + c

        for (fam, p), c in self.terms.items():
            if p != 0:
                put((fam, p - 1), p * c)
            if fam == "g":
                put(("g", p + 1), -2.0 * om * c)
            elif fam == "i0":
                put(("i0", p + 1), -3.0 * om * c)
                put(("i1", p + 1), om * c)
            else:
                put(("i1", p + 1), -3.0 * om * c)
                put(("i0", p + 1), om * c)
                put(("i1", p - 1), -2.0 * c)
        return self._new(out)

    def min_power(self):
        return min((p for _, p in self.terms), default=0)

    def taylor(self, degree=_SERIES_DEGREE):
        """Taylor coefficients in r as {power: coef}, powers up to ``degree``."""
        om = self.omega
        nt = degree // 2 + 2
        n = np.arange(nt)
        fact = np.array([math.factorial(k) for k in n], dtype=float)
        expo_g = (-om) ** n / fact
        expo_b = (-1.5 * om) ** n / fact
        i0 = np.zeros(nt)
        i1 = np.zeros(nt)
        # I0(x) = sum (x/2)^{2k} / k!^2, I1(x) = sum (x/2)^{2k+1} / (k! (k+1)!), x = om t / 2
        for k in range(nt):
            if 2 * k < nt:
                i0[2 * k] = (om / 4.0) ** (2 * k) / fact[k] ** 2
            if 2 * k + 1 < nt:
                i1[2 * k + 1] = (om / 4.0) ** (2 * k + 1) / (fact[k] * math.factorial(k + 1))
        series_t = {
            "g": expo_g,
            "i0": np.convolve(expo_b, i0)[:nt],
            "i1": np.convolve(expo_b, i1)[:nt],
        }
        out = {}
        for (fam, p), c in self.terms.items():
            for k, a in enumerate(series_t[fam]):
                power = p + 2 * k
                if power <= degree:
                    out[power] = out.get(power, 0.0) + c * a
        return out

    def _direct(self, r):
        om = self.omega
        x = 0.5 * om * r * r
        env = np.exp(-om * r * r)
        g = np.ones_like(r)
        b0 = bessel_i0e(x)
        b1 = bessel_i1e(x)
        b1x = None
        total = np.zeros_like(r)
        for (fam, p), c in self.terms.items():
            if fam == "g":
                total += c * r**p * g
            elif fam == "i0":
                total += c * r**p * b0
            elif p >= 0:
                total += c * r**p * b1
            else:
                # r^p I1(x) = (Omega/2) r^{p+2} I1(x)/x stays finite for p >= -2
                if b1x is None:
                    b1x = bessel_i1_over_x_e(x)
                total += c * 0.5 * om * r ** (p + 2) * b1x
        return total * env

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        if np.any(r < 0):
            raise ValueError("r must be non-negative")
        out = np.empty_like(r)
        small = r < SERIES_RADIUS
        if np.any(~small):
            out[~small] = self._direct(r[~small])
        if np.any(small):
            coef = self.taylor()
            rs = r[small]
            val = np.zeros_like(rs)
            for power, c in coef.items():
                if power >= 0:
                    val += c * rs**power
            out[small] = val
        return float(out[0]) if scalar else out

    def singular_part(self):
        """Largest |coefficient| of a negative power in the Taylor series.

        Zero up to rounding for any regular quantity.
        """
        return max((abs(c) for p, c in self.taylor().items() if p < 0), default=0.0)


def _kummer_half(b, a_max):
    """P, Q with M(a, b, z) = e^{z/2} [P(z) I0(z/2) + Q(z) I1(z/2)].

    Returns a dict a -> (P, Q) for a = 1/2, 3/2, ..., a_max, each P, Q an
    ascending coefficient array in z.  Seeds are the classical b = 1, 2
    expressions and higher a follow from
    a M(a+1) = (2a - b + z) M(a) + (b - a) M(a-1).
    """
    P = np.polynomial.polynomial
    if b == 1:
        seeds = {0.5: (np.array([1.0]), np.array([0.0])),
                 1.5: (np.array([1.0, 1.0]), np.array([0.0, 1.0]))}
    elif b == 2:
        seeds = {0.5: (np.array([1.0]), np.array([-1.0])),
                 1.5: (np.array([1.0]), np.array([1.0]))}
    else:
        raise ValueError("only b = 1, 2 are needed")
    out = dict(seeds)
    a = 1.5
    while a < a_max:
        pa, qa = out[a]
        pm, qm = out[a - 1]
        lin = np.array([2 * a - b, 1.0])
        pn = P.polyadd(P.polymul(lin, pa), (b - a) * pm) / a
        qn = P.polyadd(P.polymul(lin, qa), (b - a) * qm) / a
        out[a + 1] = (pn, qn)
        a += 1
    return out


def moment(nu, q, omega):
    """Form of F_nu^q(r) for nu in {0, 1} and integer q >= 1."""
    if nu not in (0, 1) or q < 1:
        raise ValueError("need nu in {0, 1} and q >= 1")
    b = nu + 1
    a2 = q + 1 + nu
    a = 0.5 * a2
    pref = math.gamma(a) * omega**nu / (2.0 * omega**a)
    terms = {}
    if a2 % 2 == 0:
        n = int(a) - b
        # M(a, b, z) = e^z sum_k (-n)_k / ((b)_k k!) (-z)^k
        coef = 1.0
        for k in range(n + 1):
            terms[("g", nu + 2 * k)] = pref * coef * omega**k
            coef *= (k - n) / ((b + k) * (k + 1)) * -1.0
    else:
        pq = _kummer_half(b, a)[a]
        for fam, poly in zip(("i0", "i1"), pq):
            for k, c in enumerate(poly):
                terms[(fam, nu + 2 * k)] = pref * c * omega**k
    return Form(omega, terms)


def _moment_sum(coefs, nu, shift, omega):
    """sum_j coefs[j] * F_nu^{j + shift}, skipping zero coefficients."""
    total = Form(omega)
    for j, c in enumerate(coefs):
        if c != 0.0:
            total = total + c * moment(nu, j + shift, omega)
    return total


def _weighted_derivative(form):
    """Form for exp(-2 Omega r^2) d/dr f, given form = exp(-2 Omega r^2) f."""
    return form.derivative() + (4.0 * form.omega) * form.rpow(1)


@lru_cache(maxsize=32)
def radial_forms(params):
    """All radial closed forms of the state, keyed by name.

    Keys
    ----
    rho, rho1, rho2, rho3 : density and its first three derivatives
    jp : paramagnetic current density (azimuthal)
    e_ee : electron-interaction force, rho times the field
    f1w, f2w, f3w : exp(-2 Omega r^2) times the auxiliary f1, f2, f3
    f, k : kinetic tensor functions, t = r_hat r_hat f + 1 k
    z : kinetic force 2 (d(f + k)/dr + f / r)
    d : differential density force -(1/4) d/dr (rho'' + rho'/r)
    """
    om = params.omega
    n2 = params.norm**2
    s = g0_squared_coefficients(params)
    g = g0_coefficients(params)
    P = np.polynomial.polynomial

    rho = 4.0 * math.pi * n2 * _moment_sum(s, 0, 1, om)
    jp = 4.0 * math.pi * n2 * _moment_sum(s, 1, 0, om)
    # g0^2 / s starts at s^1, so shift the index down by one
    e_ee = 4.0 * math.pi * n2 * _moment_sum(s[1:], 1, 0, om)

    c2, c3, c4 = params.c2, params.c3, params.c4
    # (g1^2 - g0^2/u^4) u^2 = (g1 - g0/u^2)(g1 + g0/u^2) u^2, with
    # g1 - g0/u^2 = c2 + 2 c3 u + 3 c4 u^2 and (g1 + g0/u^2) u^2 = 2u + 3 c2 u^2 + ...
    diff = np.array([c2, 2.0 * c3, 3.0 * c4])
    summ = np.array([0.0, 2.0, 3.0 * c2, 4.0 * c3, 5.0 * c4])
    h1 = P.polymul(diff, summ)
    f1w = _moment_sum(h1, 1, 0, om).rpow(-1)
    h2 = P.polymul(P.polyder(g), g)
    f2w = _moment_sum(h2, 0, 0, om)
    f3w = _moment_sum(s[1:], 0, 0, om)

    rho1 = rho.derivative()
    rho2 = rho1.derivative()
    rho3 = rho2.derivative()

    f = (math.pi * n2) * ((1.0 / om) * _weighted_derivative(f1w).rpow(1)
                          - 2.0 * _weighted_derivative(f2w).rpow(1)) \
        + (0.5 * om * om) * rho.rpow(2)
    k = (math.pi * n2) * ((1.0 / om) * f1w + 2.0 * f3w)
    z = 2.0 * ((f + k).derivative() + f.rpow(-1))
    d = -0.25 * (rho3 + rho2.rpow(-1) - rho1.rpow(-2))
    return {
        "rho": rho, "rho1": rho1, "rho2": rho2, "rho3": rho3,
        "jp": jp, "e_ee": e_ee,
        "f1w": f1w, "f2w": f2w, "f3w": f3w,
        "f": f, "k": k, "z": z, "d": d,
    }
