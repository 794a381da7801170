"""Acceptance criteria, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import dataclasses
import math
import sys
import time

import numpy as np
import pytest

from qdot_triplet import PlanarPoint, TripletParams
from qdot_triplet.consistency import fit_harmonic, law_residual, self_consistency_check
from qdot_triplet.energies import REFERENCE_VALUES, EnergyReport, closed_form_report, quadrature_report
from qdot_triplet.fields import (
    auxiliary_functions,
    auxiliary_oracle,
    field_ee,
    field_hartree,
    field_hartree_oracle,
    field_xc,
    m_field,
)
from qdot_triplet.numerics import integrate_semi_infinite
from qdot_triplet.sources import (
    RadialProfile,
    current_components,
    density,
    density_matrix,
    density_oracle,
    pair_sum_rule,
    paramagnetic_current,
    paramagnetic_oracle,
)
from qdot_triplet.wavefunction import antisymmetry_residual, psi

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:
    ACCEPTANCE_LINES = []

PARAMS = TripletParams.default()


def record(label, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


_cache = {}


def table_routes():
    if "table" not in _cache:
        t0 = time.perf_counter()
        closed = closed_form_report(PARAMS)
        quad = quadrature_report(PARAMS)
        _cache["table"] = (closed, quad, time.perf_counter() - t0)
    return _cache["table"]


@pytest.mark.parametrize("name", EnergyReport.names())
def test_c1_table_row(name):
    closed, quad, _ = table_routes()
    ref = REFERENCE_VALUES[name]
    dc = getattr(closed, name) - ref
    dq = getattr(quad, name) - ref
    ok = abs(dc) <= 1e-6 and abs(dq) <= 1e-4
    assert record(f"1 energy table {name}", ok,
                  f"table {ref}, closed {getattr(closed, name):.9g} (delta {dc:+.2e}, tol 1e-6), "
                  f"quadrature {getattr(quad, name):.9g} (delta {dq:+.2e}, tol 1e-4)")


def test_c1_runtime():
    elapsed = table_routes()[2]
    assert record("1 energy table runtime", elapsed < 60, f"{elapsed:.1f} s for both routes (limit 60 s)")


def test_c2_first_law():
    t0 = time.perf_counter()
    r = np.linspace(0.1, 6, 60)
    worst = max(abs(p.residual) for p in law_residual(r, PARAMS))
    elapsed = time.perf_counter() - t0
    assert record("2 first law", worst <= 1e-4 and elapsed < 30,
                  f"max |(-E_ee + Z + D) + k_eff r| = {worst:.2e} over 60 points (tol 1e-4), {elapsed:.2f} s")


def test_c3_density_oracle():
    r = np.linspace(0.0, 9.5, 20)
    worst = max(abs(density(x, PARAMS) - density_oracle(x, PARAMS)) for x in r)
    assert record("3 density closed vs integral", worst <= 1e-8, f"max diff {worst:.2e} at 20 radii (tol 1e-8)")


def test_c3_paramagnetic_oracle():
    r = (0.1, 0.5, 1.0, 2.0, 4.0)
    worst = max(abs(paramagnetic_current(x, PARAMS) - paramagnetic_oracle(x, PARAMS)) for x in r)
    assert record("3 j_p closed vs density matrix", worst <= 1e-5, f"max diff {worst:.2e} at 5 radii (tol 1e-5)")


def test_c3_auxiliary_oracle():
    worst = 0.0
    for x in (0.3, 1.0, 2.5):
        worst = max(worst, max(abs(a - b) for a, b in zip(auxiliary_functions(x, PARAMS),
                                                          auxiliary_oracle(x, PARAMS))))
    assert record("3 f1/f2/f3 closed vs integrals", worst <= 1e-8, f"max diff {worst:.2e} at 3 radii (tol 1e-8)")


def test_c3_hartree_oracle():
    worst = max(abs(field_hartree(x, PARAMS) - field_hartree_oracle(x, PARAMS)) for x in (0.5, 1.0, 3.0))
    assert record("3 E_H ring kernel vs 2-D quadrature", worst <= 1e-5,
                  f"max diff {worst:.2e} at 3 radii (tol 1e-5)")


def test_c4_density_normalisation():
    total = integrate_semi_infinite(lambda x: 2 * math.pi * x * density(x, PARAMS), 1 / math.sqrt(PARAMS.omega))
    assert record("4 integral of rho", abs(total - 2) <= 1e-6, f"{total:.12f} (tol 1e-6)")


def test_c4_pair_sum_rules():
    refs = [PlanarPoint(r, 0.0) for r in (0.0, 0.5, 1.5)]
    g = max(abs(pair_sum_rule(p, PARAMS, "g") - 1) for p in refs)
    xc = max(abs(pair_sum_rule(p, PARAMS, "xc") + 1) for p in refs)
    assert record("4 pair sum rules", g <= 1e-5 and xc <= 1e-5,
                  f"max |int g - 1| = {g:.2e}, max |int rho_xc + 1| = {xc:.2e} at r = 0, 0.5, 1.5 (tol 1e-5)")


def test_c4_symmetry():
    rng = np.random.default_rng(11)
    anti = 0.0
    for _ in range(200):
        p1 = PlanarPoint(rng.uniform(0, 6), rng.uniform(-math.pi, math.pi))
        p2 = PlanarPoint(rng.uniform(0, 6), rng.uniform(-math.pi, math.pi))
        mag = abs(complex(psi(p1, p2, PARAMS)))
        anti = max(anti, antisymmetry_residual(p1, p2, PARAMS) / mag)
    herm = 0.0
    for (t, r), (tp, rp) in (((0.3, 1.0), (2.0, 2.5)), ((0.0, 0.5), (1.5, 0.0)), ((1.0, 3.0), (2.2, 1.0))):
        herm = max(herm, abs(density_matrix(t, tp, r, rp, PARAMS)
                             - density_matrix(tp, t, rp, r, PARAMS).conjugate()))
    assert record("4 antisymmetry and Hermiticity", anti <= 1e-9 and herm <= 1e-9,
                  f"antisymmetry {anti:.2e} (relative), Hermiticity {herm:.2e} (tol 1e-9)")


@pytest.mark.parametrize("label, fn, limit", [
    ("E_ee r^2 -> 1", field_ee, 1.0),
    ("E_H r^2 -> 2", field_hartree, 2.0),
    ("E_xc r^2 -> -1", field_xc, -1.0),
])
def test_c5_asymptotic_charge(label, fn, limit):
    r = 30.0
    val = fn(r, PARAMS) * r * r
    rel = abs(val / limit - 1)
    assert record(f"5 {label} at r = 30", rel <= 0.02, f"{val:.6f} ({rel:.2%} off, tol 2%)")


def test_c5_density_series():
    # leading term is the stated rho(0) = 0.0555377
    worst = max(abs(density(r, PARAMS) - (0.0555377 - 0.00625 * r**2 - 0.000230 * r**4)) for r in (0.1, 0.15, 0.2))
    assert record("5 small-r density series", worst <= 1e-5, f"max diff {worst:.2e} at r = 0.1-0.2 (tol 1e-5)")


def test_c5_current_series():
    c = current_components(0.1, PARAMS)
    checks = [
        (abs(c.j_total - 0.0267 * 0.1), 1e-4),
        (abs(c.j_p - (0.0149 * 0.1 - 0.00485 * 0.1**3)), 1e-5),
        (abs(c.j_d - 5.55e-3 * 0.1), 1e-5),
        (abs(c.j_m - 6.25e-3 * 0.1), 1e-5),
    ]
    ok = all(d <= tol for d, tol in checks)
    assert record("5 small-r current series", ok,
                  "diffs j, j_p, j_d, j_m at r = 0.1: " + ", ".join(f"{d:.1e}" for d, _ in checks)
                  + " (tol 1e-4, 1e-5, 1e-5, 1e-5)")


def test_c5_field_series():
    worst = max(abs(field_ee(r, PARAMS) - (0.137 * r - 0.0360 * r**3)) for r in (0.1, 0.15, 0.2))
    assert record("5 small-r E_ee series", worst <= 1e-4, f"max diff {worst:.2e} at r = 0.1-0.2 (tol 1e-4)")


def test_c6_recovered_confinement():
    rep = self_consistency_check(PARAMS)
    ok = rep.passed and abs(rep.omega0_sq_recovered - 0.062217) <= 1e-4
    assert record("6 recovered omega0^2", ok, f"{rep.omega0_sq_recovered:.7f} (target 0.062217 +- 1e-4)")


def test_c6_magnetic_slope():
    r = np.linspace(0.2, 5, 40)
    fit = fit_harmonic(RadialProfile("M", PARAMS.omega_L, r, m_field(r, PARAMS)))
    err = abs(fit.k_fit - PARAMS.omega_L**2)
    assert record("6 M fit slope = omega_L^2", err <= 1e-10, f"{fit.k_fit:.12f} (diff {err:.1e}, tol 1e-10)")


def test_c6_perturbed_fails():
    bad = dataclasses.replace(PARAMS, c3=1.1 * PARAMS.c3)
    rep = self_consistency_check(bad)
    assert record("6 perturbed c3 reports FAIL", not rep.passed,
                  f"check {'passed' if rep.passed else 'failed'}, max deviation {rep.max_abs_deviation:.2e}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
