"""Computer-assisted bounds between the unstable manifold of Wright's equation
``y'(t) = -alpha y(t - 1) (1 + y(t))`` and that of its Chebyshev pseudospectral
approximation.
"""
from .cheb import ChebyshevScheme, build_scheme
from .interval import ComplexRect, RealInterval
from .linalg import IntervalArray, verified_solve
from .roots import SpectralPair, census_psa, find_dde_pair
from .seq import TaylorSeq2, conv, ell1_norm

__all__ = [
    "ChebyshevScheme",
    "ComplexRect",
    "IntervalArray",
    "RealInterval",
    "SpectralPair",
    "TaylorSeq2",
    "build_scheme",
    "census_psa",
    "conv",
    "ell1_norm",
    "find_dde_pair",
    "verified_solve",
]

__version__ = "0.1.0"
