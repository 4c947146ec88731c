"""Fuchsian groups, Dirichlet domains and Carleson checks for equivariant Beltrami coefficients."""

from ._kernels import BACKEND
from .mobius import DiskAutomorphism, HyperbolicDisk, hyp_distance

__version__ = "0.1.0"

__all__ = ["BACKEND", "DiskAutomorphism", "HyperbolicDisk", "hyp_distance", "__version__"]
