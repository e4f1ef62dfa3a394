"""Numerical and symbolic tooling for the generalized sixth-order Boussinesq equation

    u_tt - u_xx + k u_xxxx - u_xxxxxx = (u^2)_xx + (u^2)_xxxx + (u u_xx)_xx + (u^3)_xx.
"""
from .cutoff import CutoffFn
from .dispersion import ModelParams, phi, v2_multiplier
from .errors import (GsobeError, ParameterError, StructuralError,
                     UnsupportedRegionError, VerificationFailure)
from .solver import (CauchyData, PicardResult, duhamel_integral, evolve, linear_evolve,
                     nonlinear_term, picard_iterate)
from .spectral import GridSpec, LatticeSpec, RealField, SpaceTimeSpectrum, SpectralField
from .trajectory import Trajectory

__version__ = "0.1.0"
