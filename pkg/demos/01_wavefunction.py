"""The triplet state: constants, antisymmetry, coalescence and nodes."""

import math

from qdot_triplet import PlanarPoint, TripletParams
from qdot_triplet.wavefunction import (
    antisymmetry_residual,
    coalescence_profile,
    excited_node_u,
    node_scan,
    norm_check,
    psi,
)

params = TripletParams.default()
print("Omega =", params.omega, " c3 =", params.c3, " c4 =", params.c4, " N =", params.norm)
print("norm of |Psi|^2:", norm_check(params))

a, b = PlanarPoint(1.0, 0.3), PlanarPoint(2.0, 1.7)
print("Psi(a, b) =", complex(psi(a, b, params)))
print("antisymmetry residual:", antisymmetry_residual(a, b, params))

# Psi vanishes linearly when the electrons meet
profile, limit = coalescence_profile(PlanarPoint(1.0, 0.0), 0.0, [1e-2, 1e-3, 1e-4], params)
print("|Psi|/u -> ", limit, " vs N exp(-Omega) =", params.norm * math.exp(-params.omega))

# the radial node of the first excited relative motion
print("excited-state node at u* =", excited_node_u(params))
scan = node_scan(math.radians(45), math.radians(90), 8.0, 64, params)
print("Re Psi node kinds:", sorted(set(scan.labels_re)), " Im Psi node kinds:", sorted(set(scan.labels_im)))
