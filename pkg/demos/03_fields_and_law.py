"""Internal fields and the per-electron force balance."""

import numpy as np

from qdot_triplet import TripletParams
from qdot_triplet.consistency import law_report
from qdot_triplet.fields import field_bundle

params = TripletParams.default()

print("r     E_ee      E_H       E_xc      Z         D         L         I_m       M")
for r in (0.5, 1.0, 2.0, 4.0, 6.0):
    b = field_bundle(r, params)
    vals = (b.e_ee, b.e_H, b.e_xc, b.Z, b.D, b.L, b.I_m, b.M)
    print("%-5.1f " % r + " ".join("%+.2e" % v for v in vals))

rep = law_report(np.linspace(0.1, 6, 60), params)
print("max residual of -E_ee + Z + D = -k_eff r:", rep.max_residual)

# D + Z alone is E_ee - k_eff r, so it is not a straight line
print("straight-line fit of D + Z: k =", rep.d_plus_z_fit.k_fit,
      " max deviation =", rep.d_plus_z_fit.max_abs_deviation)
