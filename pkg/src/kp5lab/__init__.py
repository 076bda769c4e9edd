"""Spectral laboratory for the 5th-order Kadomtsev-Petviashvili equations.

Periodic pseudospectral solver for KP-I (delta=+1) and KP-II (delta=-1)
with fifth-order dispersion, together with numerical verification tooling:
dyadic frequency projections, resonance algebra, oscillatory kernel decay,
Strichartz ratio probes, convolution multipliers and conservation checks.
"""

from kp5lab.grid import Grid2D, Field2D, Spectrum2D, build_grid, to_field, to_spectrum

__version__ = "0.1.0"

__all__ = [
    "Grid2D",
    "Field2D",
    "Spectrum2D",
    "build_grid",
    "to_field",
    "to_spectrum",
]
