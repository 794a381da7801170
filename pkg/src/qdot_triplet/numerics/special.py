"""Modified Bessel functions I0, I1 and complete elliptic integrals K, E.

Everything here is vectorised over numpy arrays.  The Bessel functions come in
plain and exponentially scaled flavours; the scaled ones (``i0e``, ``i1e``)
are what the closed forms use, because the physical quantities always carry a
Gaussian that cancels the exponential growth of I_nu.

The elliptic integrals take the *modulus* p, i.e. the integrands contain
``p**2 * sin(theta)**2``.
"""

import numpy as np

__all__ = [
    "bessel_i0",
    "bessel_i1",
    "bessel_i0e",
    "bessel_i1e",
    "bessel_i1_over_x_e",
    "elliptic_k",
    "elliptic_e",
    "elliptic_ke_complementary",
    "SERIES_CROSSOVER",
]

SERIES_CROSSOVER = 15.0
_SERIES_TERMS = 60
_ASYMPTOTIC_TERMS = 30
# largest x with e**x finite in float64
_EXP_LIMIT = 709.78


def _series(x, nu):
    """Power series of I_nu(x) for integer nu in {0, 1}."""
    q = 0.25 * x * x
    term = np.ones_like(x) if nu == 0 else 0.5 * x
    total = term.copy()
    for n in range(_SERIES_TERMS):
        term = term * q / ((n + 1) * (n + 1 + nu))
        total = total + term
    return total


def _asymptotic_scaled(x, nu):
    """Large-x expansion of exp(-x) I_nu(x), truncated at the smallest term."""
    mu = 4.0 * nu * nu
    term = np.ones_like(x)
    total = np.ones_like(x)
    smallest = np.ones_like(x)
    done = np.zeros(x.shape, dtype=bool)
    for k in range(1, _ASYMPTOTIC_TERMS + 1):
        term = -term * (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        growing = np.abs(term) > smallest
        done |= growing
        total = np.where(done, total, total + term)
        smallest = np.where(done, smallest, np.abs(term))
    return total / np.sqrt(2.0 * np.pi * x)


def _check_domain(x):
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x < 0):
        raise ValueError("Bessel argument must be finite and non-negative")
    return x


def _scaled(x, nu):
    x = _check_domain(x)
    out = np.empty_like(x)
    small = x <= SERIES_CROSSOVER
    xs = x[small]
    out[small] = _series(xs, nu) * np.exp(-xs)
    out[~small] = _asymptotic_scaled(x[~small], nu)
    return out if out.ndim else float(out)


def bessel_i0e(x):
    """exp(-x) * I0(x) for x >= 0."""
    return _scaled(x, 0)


def bessel_i1e(x):
    """exp(-x) * I1(x) for x >= 0."""
    return _scaled(x, 1)


def _unscaled(x, nu):
    x = _check_domain(x)
    if np.any(x > _EXP_LIMIT):
        raise OverflowError(f"I{nu}(x) overflows float64 for x > {_EXP_LIMIT}")
    out = np.empty_like(x)
    small = x <= SERIES_CROSSOVER
    out[small] = _series(x[small], nu)
    big = x[~small]
    out[~small] = _asymptotic_scaled(big, nu) * np.exp(big)
    return out if out.ndim else float(out)


def bessel_i0(x):
    """Modified Bessel function of the first kind, order zero.

    Series below ``SERIES_CROSSOVER``, Hankel asymptotic expansion above it.

    Raises
    ------
    OverflowError
        If ``x`` is so large that I0(x) is not representable.
    """
    return _unscaled(x, 0)


def bessel_i1(x):
    """Modified Bessel function of the first kind, order one."""
    return _unscaled(x, 1)


def bessel_i1_over_x_e(x):
    """exp(-x) * I1(x) / x, finite at x = 0 where it equals 1/2."""
    x = _check_domain(x)
    out = np.empty_like(x)
    tiny = x < 1e-3
    xt = x[tiny]
    # I1(x)/x = 1/2 + x^2/16 + x^4/384 + ...
    out[tiny] = (0.5 + xt * xt / 16.0 + xt**4 / 384.0) * np.exp(-xt)
    xb = x[~tiny]
    out[~tiny] = _scaled(xb, 1) / xb
    return out if out.ndim else float(out)


def elliptic_ke_complementary(kp):
    """Return (K, E, K - E) as functions of the complementary modulus.

    Working from ``kp = sqrt(1 - p**2)`` keeps full relative accuracy for K
    near the logarithmic singularity at p -> 1, and the difference K - E is
    accumulated directly so that it does not suffer cancellation at p -> 0.
    """
    kp = np.asarray(kp, dtype=float)
    if np.any(kp <= 0) or np.any(kp > 1):
        raise ValueError("complementary modulus must lie in (0, 1]")
    a = np.ones_like(kp)
    b = kp.copy()
    # c_0^2 = p^2 = (1 - kp)(1 + kp)
    csq = (1.0 - kp) * (1.0 + kp)
    acc = 0.5 * csq
    power = 0.5
    for _ in range(40):
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        power *= 2.0
        step = power * c * c
        acc = acc + step
        if np.all(np.abs(c) <= 1e-17 * a):
            break
    k = np.pi / (2.0 * a)
    kme = k * acc
    e = k - kme
    if k.ndim == 0:
        return float(k), float(e), float(kme)
    return k, e, kme


def _modulus_to_complementary(p):
    p = np.asarray(p, dtype=float)
    if np.any(p < 0) or np.any(p >= 1):
        raise ValueError("elliptic modulus p must satisfy 0 <= p < 1 (K diverges at p = 1)")
    return np.sqrt((1.0 - p) * (1.0 + p))


def elliptic_k(p):
    """Complete elliptic integral of the first kind, K(p) with modulus p.

    K(p) = integral_0^{pi/2} dtheta / sqrt(1 - p^2 sin^2 theta), computed by
    the arithmetic-geometric mean.
    """
    return elliptic_ke_complementary(_modulus_to_complementary(p))[0]


def elliptic_e(p):
    """Complete elliptic integral of the second kind, E(p) with modulus p."""
    return elliptic_ke_complementary(_modulus_to_complementary(p))[1]

