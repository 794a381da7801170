"""Density, currents, pair correlation and the density matrix."""

import math

import numpy as np

from qdot_triplet import PlanarPoint, TripletParams
from qdot_triplet.sources import (
    current_components,
    density,
    density_matrix,
    pair_grid,
    pair_sum_rule,
    paramagnetic_oracle,
)

params = TripletParams.default()
r = np.linspace(0, 8, 9)
print("r      rho         j_p         j_d         j_m")
c = current_components(r, params)
for row in zip(r, density(r, params), c.j_p, c.j_d, c.j_m):
    print("%-6.1f " % row[0] + " ".join("%-11.4e" % v for v in row[1:]))

# j_p again, this time from the phase of the density matrix
print("j_p(1): closed", c.j_p[1], " from gamma", paramagnetic_oracle(1.0, params))

for ref in (0.0, 1.5):
    p = PlanarPoint(ref, 0.0)
    print(f"reference r = {ref}: int g = {pair_sum_rule(p, params, 'g'):.8f}, "
          f"int rho_xc = {pair_sum_rule(p, params, 'xc'):.8f}")

grid = pair_grid(1.0, params, "xc", extent=4.0, n=41)
print("deepest point of the hole:", grid.values.min())

g = density_matrix(0.0, math.pi / 2, 1.0, 1.5, params)
print("gamma(1 at 0 deg, 1.5 at 90 deg) =", g)
