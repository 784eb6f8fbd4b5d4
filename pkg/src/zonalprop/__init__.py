"""Propagators and heat kernels on homogeneous spaces by harmonic analysis.

Submodules
----------
specfun
    Gegenbauer, conical, Bessel and Gamma functions; quadrature rules.
zonal
    Zonal transforms, synthesis and convolution on spheres, hyperboloids
    and Euclidean space.
hyperbolic
    Free particle on the d-dimensional hyperboloid.
oscillator
    Radial and full propagators of the isotropic harmonic oscillator.
su11
    Truncated matrix realization of the oscillator's su(1,1) algebra.
slicer
    N-fold time slicing with convergence tables.
cli
    Command-line front end.
"""

from . import hyperbolic, oscillator, slicer, specfun, su11, zonal
from .errors import (
    ConvergenceError,
    ConvergenceWarning,
    DomainError,
    ParityError,
    SingularTimeError,
    UnsupportedModeError,
)
from .hyperbolic import HyperbolicModel, closed_form, spectral_propagator
from .oscillator import ChannelLabel, OscillatorModel, full_propagator, radial_propagator
from .zonal import GroupDescriptor, RadialGrid, zonal_synthesize, zonal_transform

__version__ = "0.1.0"

__all__ = [
    "specfun",
    "zonal",
    "hyperbolic",
    "oscillator",
    "su11",
    "slicer",
    "DomainError",
    "ParityError",
    "UnsupportedModeError",
    "SingularTimeError",
    "ConvergenceWarning",
    "ConvergenceError",
    "HyperbolicModel",
    "closed_form",
    "spectral_propagator",
    "OscillatorModel",
    "ChannelLabel",
    "radial_propagator",
    "full_propagator",
    "GroupDescriptor",
    "RadialGrid",
    "zonal_transform",
    "zonal_synthesize",
]
