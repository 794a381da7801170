"""Recover the confining potential from the internal fields."""

import dataclasses

from qdot_triplet import TripletParams
from qdot_triplet.consistency import self_consistency_check

params = TripletParams.default()
for label, p in [("default", params),
                 ("omega_L = 0.05", params.with_omega_L(0.05)),
                 ("c3 + 10%", dataclasses.replace(params, c3=1.1 * params.c3))]:
    rep = self_consistency_check(p)
    print(f"{label:15s} omega0^2 expected {p.omega0_sq:.6f} recovered {rep.omega0_sq_recovered:.6f} "
          f"deviation {rep.max_abs_deviation:.1e} -> {'PASS' if rep.passed else 'FAIL'}")
