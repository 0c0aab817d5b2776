"""singulab: symbolic-numeric toolkit for singularities of mixed polynomials."""

__version__ = "0.1.0"

from .mixedpoly import (
    GaussianRational,
    MixedPolynomial,
    RealPoly,
    RealPolyPair,
    WeightSystem,
    polar_radial_degrees,
    realize,
    verify_euler_identities,
)

__all__ = [
    "GaussianRational",
    "MixedPolynomial",
    "RealPoly",
    "RealPolyPair",
    "WeightSystem",
    "polar_radial_degrees",
    "realize",
    "verify_euler_identities",
    "__version__",
]
