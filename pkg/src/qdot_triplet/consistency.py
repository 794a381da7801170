"""Force balance and the self-consistency fixed point.

Per electron the internal fields balance the external ones,

    -omega0^2 r - (L + I_m) = -E_ee + Z + D,

and since L + I_m = omega_L^2 r the left side is -k_eff r.  Integrating the
internal fields along a radius then recovers a harmonic effective potential
(1/2) k_eff r^2, and removing the magnetic part (1/2) omega_L^2 r^2 recovers
the confinement omega0^2.
"""

from dataclasses import asdict, dataclass
import math

import numpy as np

from .fields import (
    differential_density_field,
    field_ee,
    internal_magnetic_field,
    kinetic_field,
    lorentz_field,
    m_field,
)
from .numerics import QuadSpec, integrate_1d
from .sources import RadialProfile

__all__ = [
    "LawResidual",
    "LawReport",
    "HarmonicFit",
    "SelfConsistencyReport",
    "law_residual",
    "law_report",
    "internal_field",
    "extract_veff",
    "extract_vm",
    "fit_harmonic",
    "self_consistency_check",
]

LAW_GRID_RANGE = (0.05, 8.0)


@dataclass
class LawResidual:
    """Both sides of the force balance at radius r.

    lhs = -omega0^2 r - (L + I_m), rhs = -E_ee + Z + D, residual = lhs - rhs.
    """

    r: float
    lhs: float
    rhs: float
    residual: float
    e_ee: float
    Z: float
    D: float
    L: float
    I_m: float


@dataclass
class HarmonicFit:
    """Least-squares harmonic fit of a field (-k r) or potential ((1/2) k r^2)."""

    k_fit: float
    max_abs_deviation: float
    fit_window: tuple


@dataclass
class LawReport:
    max_residual: float
    points: list
    d_plus_z: RadialProfile
    d_plus_z_fit: HarmonicFit


@dataclass
class SelfConsistencyReport:
    max_residual: float
    k_fit: float
    omega0_sq_recovered: float
    max_abs_deviation: float
    passed: bool

    def to_dict(self):
        out = asdict(self)
        out["pass"] = out.pop("passed")
        return out


def law_residual(r, params):
    """Force balance at one radius; vectorised over r."""
    r_arr = np.asarray(r, dtype=float)
    e = field_ee(r_arr, params)
    z = kinetic_field(r_arr, params)
    d = differential_density_field(r_arr, params)
    lor = lorentz_field(r_arr, params)
    im = internal_magnetic_field(r_arr, params)
    lhs = -params.omega0_sq * r_arr - (np.asarray(lor) + im)
    rhs = -np.asarray(e) + z + d
    if r_arr.ndim == 0:
        return LawResidual(float(r_arr), float(lhs), float(rhs), float(lhs - rhs),
                           float(e), float(z), float(d), float(lor), float(im))
    return [LawResidual(*vals) for vals in zip(r_arr.tolist(), lhs.tolist(), rhs.tolist(),
                                               (lhs - rhs).tolist(), np.asarray(e).tolist(),
                                               np.asarray(z).tolist(), np.asarray(d).tolist(),
                                               np.asarray(lor).tolist(), np.asarray(im).tolist())]


def fit_harmonic(profile, window=(0.2, 5.0), kind="field"):
    """Fit samples to -k r (kind='field') or (1/2) k r^2 (kind='potential').

    Parameters
    ----------
    profile : RadialProfile
    window : (float, float)
        Only samples with window[0] <= r <= window[1] are used; at least 8.
    """
    lo, hi = window
    if not hi > lo:
        raise ValueError("degenerate fit window")
    mask = (profile.r >= lo) & (profile.r <= hi)
    r = profile.r[mask]
    y = profile.value[mask]
    if r.size < 8:
        raise ValueError("need at least 8 samples in the fit window")
    if np.ptp(r) == 0:
        raise ValueError("degenerate fit window")
    if kind == "field":
        basis = -r
    elif kind == "potential":
        basis = 0.5 * r * r
    else:
        raise ValueError("kind must be 'field' or 'potential'")
    k = float(np.dot(basis, y) / np.dot(basis, basis))
    dev = float(np.max(np.abs(y - k * basis)))
    return HarmonicFit(k, dev, (float(lo), float(hi)))


def law_report(r_grid, params):
    """Residual table over a grid, plus the D + Z partial sum and its harmonic fit."""
    r = np.asarray(r_grid, dtype=float)
    if r.size == 0:
        raise ValueError("empty grid")
    if r.min() < LAW_GRID_RANGE[0] or r.max() > LAW_GRID_RANGE[1]:
        raise ValueError(f"grid must lie within {LAW_GRID_RANGE}")
    points = law_residual(r, params)
    points = points if isinstance(points, list) else [points]
    worst = max(abs(p.residual) for p in points)
    dz = RadialProfile("DplusZ", params.omega_L, r, np.array([p.D + p.Z for p in points]))
    inside = np.count_nonzero((r >= 0.2) & (r <= 5.0))
    fit = fit_harmonic(dz, (0.2, 5.0)) if inside >= 8 else None
    return LawReport(worst, points, dz, fit)


def internal_field(r, params):
    """E_ee - Z - D, the field whose line integral is v_eff."""
    r = np.asarray(r, dtype=float)
    out = np.asarray(field_ee(r, params)) - kinetic_field(r, params) \
        - differential_density_field(r, params)
    return float(out) if out.ndim == 0 else out


def extract_veff(r, params, r_ref=8.0, spec=QuadSpec()):
    """Effective potential from the line integral of the internal fields.

    v_eff(r) = int_{r_ref}^{r} (E_ee - D - Z) dr', shifted so that v_eff(0) = 0.
    Vectorised over r.
    """
    base = integrate_1d(lambda x: internal_field(x, params), r_ref, 0.0, spec)
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    out = np.array([integrate_1d(lambda x: internal_field(x, params), r_ref, x, spec) - base
                    for x in r_arr])
    return float(out[0]) if np.ndim(r) == 0 else out


def extract_vm(r, params, spec=QuadSpec()):
    """Magnetic potential v_m(r) = -int_0^r M dr'."""
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    out = np.array([-integrate_1d(lambda x: m_field(x, params), 0.0, x, spec) for x in r_arr])
    return float(out[0]) if np.ndim(r) == 0 else out


def self_consistency_check(params, spec=QuadSpec(), window=(0.2, 5.0), r_ref=8.0,
                           samples=40, tol=1e-4, law_range=(0.1, 6.0), law_samples=60):
    """One verification pass of the fixed point.

    Builds the fields from ``params``, checks the force balance, extracts
    v_eff, removes v_m, fits (1/2) omega0^2 r^2 and compares with
    ``params.omega0_sq``.  Passes when the law residual, the fit deviation
    and the omega0^2 mismatch are all within ``tol``.
    """
    law_r = np.linspace(law_range[0], law_range[1], law_samples)
    residual = max(abs(p.residual) for p in law_residual(law_r, params))
    r = np.linspace(window[0], window[1], samples)
    v = extract_veff(r, params, r_ref, spec) - extract_vm(r, params, spec)
    pot_fit = fit_harmonic(RadialProfile("v", params.omega_L, r, v), window, "potential")
    field_prof = RadialProfile("law_rhs", params.omega_L, law_r,
                               np.array([p.rhs for p in law_residual(law_r, params)]))
    k_fit = fit_harmonic(field_prof, window).k_fit
    ok = (residual <= tol and pot_fit.max_abs_deviation <= tol
          and abs(pot_fit.k_fit - params.omega0_sq) <= tol and math.isfinite(residual))
    return SelfConsistencyReport(residual, k_fit, pot_fit.k_fit, pot_fit.max_abs_deviation, bool(ok))
