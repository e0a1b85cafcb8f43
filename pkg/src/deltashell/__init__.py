"""Exactly solvable delta interactions on a point, a circle and a sphere.

Bound states, s-wave scattering and independent numerical cross-checks,
in units with hbar = 2m = 1.
"""

__version__ = "0.1.0"

from .model import EnergyParam, PotentialSpec, SpecError, validate  # noqa: E402

__all__ = ["__version__", "PotentialSpec", "EnergyParam", "SpecError", "validate"]
