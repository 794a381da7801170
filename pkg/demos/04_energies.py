"""Energy components and expectation values by two routes."""

from qdot_triplet import TripletParams
from qdot_triplet.energies import REFERENCE_VALUES, closed_form_report, quadrature_report

params = TripletParams.default()
closed = closed_form_report(params)
quad = quadrature_report(params)

print("%-14s %-12s %-14s %-14s" % ("quantity", "table", "closed form", "quadrature"))
for name in closed.names():
    print("%-14s %-12s %-14.9g %-14.9g" % (name, REFERENCE_VALUES[name], getattr(closed, name),
                                           getattr(quad, name)))
