"""Tools for tristability and snaking analysis of hexagonal patterns.

Subpackages/modules:

- ``amplitude``: third/fifth-order amplitude equations on the hexagonal
  lattice, their equilibria, stability maps and Ginzburg-Landau energies.
- ``pde_systems``: cosine-collocation discretizations of the generalized
  Swift-Hohenberg equation and a semi-arid vegetation model, plus
  homogeneous-state and dispersion (Turing) analysis.
- ``continuation``: Newton correction, pseudo-arclength continuation,
  event detection, branch switching and branch diagnostics.
- ``conserved``: spatial Hamiltonian profiles, energy curves and
  Maxwell-point location.
- ``cli``: configuration-driven command line front end.
"""

from . import amplitude, conserved, continuation, pde_systems, scenarios

__all__ = ["amplitude", "pde_systems", "continuation", "conserved", "scenarios"]
__version__ = "0.1.0"
