"""Quadrature configuration and thin wrappers around QUADPACK.

Every integral in the package is driven by a :class:`QuadratureConfig`.  The
wrappers below add error policies on top of ``scipy.integrate.quad``:

* ``quad_finite``     -- adaptive integration on [a, b], optional break points.
* ``quad_semi_inf``   -- adaptive integration on [a, oo) for algebraic or
  exponential tails.
* ``quad_alg_left``   -- integration of f(x) * (x - a)**alpha on [a, b] where
  alpha > -1, i.e. an integrable algebraic singularity at the left endpoint.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, NumericError

__all__ = [
    "QuadratureConfig",
    "DEFAULT_QUAD",
    "gauss_legendre",
    "quad_finite",
    "quad_semi_inf",
    "quad_alg_left",
]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and limits shared by all adaptive integrals.

    ``truncation_decay`` is the e-folding exponent used when a tail is cut off
    analytically: integration stops where the integrand's tail bound has
    decayed by exp(-truncation_decay) relative to its scale.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_subdiv: int = 200
    truncation_decay: float = 45.0

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdiv < 10:
            raise DomainError("max_subdiv must be at least 10")
        if self.truncation_decay <= 0:
            raise DomainError("truncation_decay must be positive")


DEFAULT_QUAD = QuadratureConfig()


@lru_cache(maxsize=32)
def gauss_legendre(n: int):
    """Cached Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _check(result, cfg: QuadratureConfig, what: str):
    value, abserr, info = result[0], result[1], result[2]
    message = result[3] if len(result) > 3 else None
    if message is not None:
        # QUADPACK raised a warning; accept only if the error estimate still
        # meets the requested tolerance.
        if abserr > max(cfg.abs_tol, 100.0 * cfg.rel_tol * abs(value)):
            raise NumericError(
                f"{what}: quadrature did not converge "
                f"(value={value:.6g}, abserr={abserr:.3g}, {message})"
            )
    return value


def quad_finite(f, a, b, cfg: QuadratureConfig = DEFAULT_QUAD, points=None):
    """Adaptive integral of f on [a, b]."""
    if not b > a:
        raise DomainError("quad_finite requires b > a")
    pts = None
    if points:
        pts = sorted(p for p in points if a < p < b)
        pts = pts or None
    result = quad(
        f, a, b,
        epsabs=cfg.abs_tol, epsrel=cfg.rel_tol,
        limit=cfg.max_subdiv, points=pts, full_output=1,
    )
    return _check(result, cfg, "quad_finite")


def quad_semi_inf(f, a, cfg: QuadratureConfig = DEFAULT_QUAD):
    """Adaptive integral of f on [a, oo)."""
    result = quad(
        f, a, np.inf,
        epsabs=cfg.abs_tol, epsrel=cfg.rel_tol,
        limit=cfg.max_subdiv, full_output=1,
    )
    return _check(result, cfg, "quad_semi_inf")


def quad_alg_left(f_smooth, a, b, alpha, cfg: QuadratureConfig = DEFAULT_QUAD):
    """Integral of f_smooth(x) * (x - a)**alpha on [a, b], alpha > -1.

    QUADPACK's QAWS handles the algebraic endpoint weight with dedicated
    Chebyshev moments, so f_smooth only needs to be smooth up to the endpoint.
    """
    if alpha <= -1:
        raise DomainError("algebraic weight exponent must exceed -1")
    if not b > a:
        raise DomainError("quad_alg_left requires b > a")
    result = quad(
        f_smooth, a, b,
        weight="alg", wvar=(alpha, 0.0),
        epsabs=cfg.abs_tol, epsrel=cfg.rel_tol,
        limit=cfg.max_subdiv, full_output=1,
    )
    return _check(result, cfg, "quad_alg_left")
