import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate, special

from qdot_triplet.numerics import (
    QuadSpec,
    QuadratureError,
    bessel_i0,
    bessel_i0e,
    bessel_i1,
    bessel_i1e,
    elliptic_e,
    elliptic_k,
    integrate_1d,
    integrate_2d_polar,
    integrate_semi_infinite,
)
from qdot_triplet.numerics.special import SERIES_CROSSOVER, _asymptotic_scaled, _series

OMEGA = 0.268732


def series_i(nu, x, terms):
    mpmath.mp.dps = 50
    x = mpmath.mpf(x)
    return float(sum((x / 2) ** (2 * n + nu) / (mpmath.factorial(n) * mpmath.factorial(n + nu))
                     for n in range(terms)))


def test_i0_at_zero():
    assert bessel_i0(0.0) == 1.0
    assert bessel_i1(0.0) == 0.0


@pytest.mark.parametrize("x, terms", [(1.0, 40), (10.0, 60), (0.3, 40), (5.0, 60), (14.9, 80)])
def test_bessel_against_extended_series(x, terms):
    assert bessel_i0(x) == pytest.approx(series_i(0, x, terms), rel=1e-13)
    assert bessel_i1(x) == pytest.approx(series_i(1, x, terms), rel=1e-13)


@pytest.mark.parametrize("x", [15.5, 20.0, 40.0, 100.0, 500.0])
def test_bessel_asymptotic_branch(x):
    mpmath.mp.dps = 40
    assert bessel_i0(x) == pytest.approx(float(mpmath.besseli(0, x)), rel=1e-13)
    assert bessel_i1(x) == pytest.approx(float(mpmath.besseli(1, x)), rel=1e-13)


def test_crossover_overlap():
    x = np.linspace(SERIES_CROSSOVER - 1, SERIES_CROSSOVER + 1, 21)
    for nu in (0, 1):
        series = _series(x, nu) * np.exp(-x)
        asym = _asymptotic_scaled(x, nu)
        assert np.max(np.abs(series / asym - 1)) <= 1e-12


@given(st.floats(0.0, 700.0))
def test_scaled_bessel_matches_scipy(x):
    assert bessel_i0e(x) == pytest.approx(special.i0e(x), rel=1e-13)
    assert bessel_i1e(x) == pytest.approx(special.i1e(x), rel=1e-13, abs=1e-300)


def test_i1_over_x_limit():
    assert bessel_i1(1e-8) / 1e-8 == pytest.approx(0.5, rel=1e-12)


def test_derivative_identity():
    h = 1e-3
    fd = (bessel_i0(2 + h) - bessel_i0(2 - h)) / (2 * h)
    fd2 = (bessel_i0(2 + h / 2) - bessel_i0(2 - h / 2)) / h
    rich = (4 * fd2 - fd) / 3
    assert rich == pytest.approx(bessel_i1(2.0), rel=1e-10)


def test_recurrence_check():
    for x in np.logspace(-3, math.log10(30), 20):
        h = 1e-4 * max(x, 1e-2)
        d1 = (bessel_i1(x + h) - bessel_i1(x - h)) / (2 * h)
        d1b = (bessel_i1(x + h / 2) - bessel_i1(x - h / 2)) / h
        d1 = (4 * d1b - d1) / 3
        residual = bessel_i0(x) - d1 - bessel_i1(x) / x
        assert abs(residual) <= 1e-10 * max(1.0, bessel_i0(x))


@given(st.floats(1e-6, 700.0), st.floats(1e-6, 700.0))
def test_i0_monotone(a, b):
    lo, hi = sorted((a, b))
    assert bessel_i0(lo) <= bessel_i0(hi)


def test_bessel_errors():
    with pytest.raises(ValueError):
        bessel_i0(-1.0)
    with pytest.raises(OverflowError):
        bessel_i0(800.0)


def test_elliptic_at_zero():
    assert elliptic_k(0.0) == pytest.approx(math.pi / 2, rel=1e-15)
    assert elliptic_e(0.0) == pytest.approx(math.pi / 2, rel=1e-15)


@pytest.mark.parametrize("p", [0.1, 0.5, 1 / math.sqrt(2), 0.9, 0.999])
def test_elliptic_against_quadrature(p):
    k, _ = integrate.quad(lambda t: 1 / math.sqrt(1 - (p * math.sin(t)) ** 2), 0, math.pi / 2,
                          epsabs=0, epsrel=1e-13, limit=200)
    e, _ = integrate.quad(lambda t: math.sqrt(1 - (p * math.sin(t)) ** 2), 0, math.pi / 2,
                          epsabs=0, epsrel=1e-13, limit=200)
    assert elliptic_k(p) == pytest.approx(k, rel=1e-12)
    assert elliptic_e(p) == pytest.approx(e, rel=1e-12)


@given(st.floats(1e-6, 0.999999))
def test_e_below_k(p):
    assert elliptic_e(p) <= elliptic_k(p)


def test_elliptic_domain():
    with pytest.raises(ValueError):
        elliptic_k(1.0)
    with pytest.raises(ValueError):
        elliptic_e(1.5)


def test_quadspec_validation():
    with pytest.raises(ValueError):
        QuadSpec(rel_tol=0)
    with pytest.raises(ValueError):
        QuadSpec(max_subdivisions=0)
    with pytest.raises(ValueError):
        QuadSpec(truncation_radius=-1)


def test_integrate_trivial():
    assert integrate_1d(lambda x: np.ones_like(x), 0, 1) == pytest.approx(1.0, rel=1e-15)
    assert integrate_1d(lambda x: x, 2.0, 2.0) == 0.0


@given(st.lists(st.floats(-3, 3), min_size=13, max_size=13), st.floats(-2, 0), st.floats(0.1, 2))
def test_polynomials_exact(coefs, a, width):
    b = a + width
    got = integrate_1d(lambda x: np.polynomial.polynomial.polyval(x, coefs), a, b)
    anti = np.polynomial.polynomial.polyint(coefs)
    want = np.polynomial.polynomial.polyval(b, anti) - np.polynomial.polynomial.polyval(a, anti)
    scale = sum(abs(c) * max(abs(a), abs(b)) ** k for k, c in enumerate(coefs)) * width
    assert abs(got - want) <= 1e-12 * max(scale, 1e-300)


def test_integrate_endpoint_singularity():
    assert integrate_1d(lambda x: 1 / np.sqrt(x), 0, 1) == pytest.approx(2.0, rel=1e-9)


def test_integrate_elliptic_cross_module():
    got = integrate_1d(lambda t: 1 / np.sqrt(1 - 0.25 * np.sin(t) ** 2), 0, math.pi / 2)
    assert got == pytest.approx(elliptic_k(0.5), rel=1e-12)


def test_non_convergence_carries_estimate():
    spec = QuadSpec(max_subdivisions=2)
    with pytest.raises(QuadratureError) as info:
        integrate_1d(lambda x: np.sin(1 / x), 1e-4, 1, spec)
    assert math.isfinite(info.value.estimate)
    assert info.value.error > 0


def test_semi_infinite_gaussians():
    got = integrate_semi_infinite(lambda x: np.exp(-OMEGA * x * x) * x, 1 / math.sqrt(OMEGA))
    assert got == pytest.approx(1 / (2 * OMEGA), rel=1e-12)
    assert integrate_semi_infinite(lambda x: np.exp(-x * x), 1.0) == pytest.approx(
        math.sqrt(math.pi) / 2, rel=1e-12)
    assert integrate_semi_infinite(lambda x: np.zeros_like(x), 1.0) == 0.0


def test_semi_infinite_truncation_invariance():
    f = lambda x: np.exp(-OMEGA * x * x) * x ** 3
    a = integrate_semi_infinite(f, 1 / math.sqrt(OMEGA))
    b = integrate_semi_infinite(f, 1 / math.sqrt(OMEGA), QuadSpec(truncation_radius=24.4))
    assert abs(a - b) <= QuadSpec().abs_tol


def test_polar_disk_area():
    got = integrate_2d_polar(lambda s, phi: np.ones_like(s), 0.0, radial_max=1.0)
    assert got == pytest.approx(math.pi, rel=1e-12)


def test_polar_offset_gaussian():
    # Gaussian centred at the origin, polar system centred at (1.5, 0)
    f = lambda s, phi: np.exp(-((1.5 + s * np.cos(phi)) ** 2 + (s * np.sin(phi)) ** 2))
    assert integrate_2d_polar(f, 1.5) == pytest.approx(math.pi, rel=1e-9)


def test_deterministic():
    f = lambda x: np.exp(-x) * np.cos(3 * x)
    assert integrate_1d(f, 0, 7) == integrate_1d(f, 0, 7)
