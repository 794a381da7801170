"""Sources, fields and energies of the triplet state of a two-electron 2-D quantum dot."""

from .wavefunction import TripletParams, PlanarPoint

__version__ = "0.1.0"
