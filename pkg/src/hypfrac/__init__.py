"""Fractional Laplacian machinery on 3-dimensional hyperbolic space.

Subpackages:

* ``geometry`` -- hyperboloid/ball models, distances, volumes, dyadic rings
* ``gyro``     -- Mobius gyrogroup algebra and plane-wave identities
* ``specfun``  -- modified Bessel/Struve functions and integral families
* ``kernel``   -- the explicit jump kernel and its normalizing constant
* ``scale``    -- near/far scale functions and the contact-scale radius
* ``operator`` -- fractional Laplacian, Pucci extremal operators, barriers,
  envelopes
* ``cli``      -- verification command line
"""

from . import geometry, gyro, kernel, operator, quadrature, scale, specfun
from .errors import (
    CalibrationError,
    DomainError,
    HypfracError,
    NumericError,
    UnsupportedRangeError,
)
from .quadrature import QuadratureConfig

__version__ = "0.1.0"

__all__ = [
    "geometry",
    "gyro",
    "specfun",
    "kernel",
    "scale",
    "operator",
    "quadrature",
    "QuadratureConfig",
    "HypfracError",
    "DomainError",
    "UnsupportedRangeError",
    "NumericError",
    "CalibrationError",
]
