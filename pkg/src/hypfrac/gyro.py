"""Mobius gyrogroup algebra on the conformal ball, plane-wave eigenfunctions,
and the sphere-averaged identities they satisfy.

Gyration is computed compositionally through the gyroassociativity identity
rather than via Clifford products; the only Clifford quantity ever needed is
the real norm |1 + conj(z) y / t^2|^2, which has the closed form
(1 + <z,y>/t^2)^2 + (|z|^2 |y|^2 - <z,y>^2)/t^4.

Complex powers always have a strictly positive real base for interior points;
this is asserted at runtime.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericError
from .geometry import BallPoint, ModelParams, DEFAULT_MODEL
from .quadrature import QuadratureConfig, DEFAULT_QUAD, gauss_legendre

__all__ = [
    "GyroElement",
    "EigenParams",
    "mobius_add",
    "neg",
    "gyration",
    "coadd",
    "cosub",
    "cosub_compositional",
    "CancellationResult",
    "cancellation_check",
    "clifford_norm_sq",
    "boxminus_jacobian",
    "measure_factor",
    "eigenfunction",
    "e_factor",
    "transport_prefactor",
    "sphere_integral_E",
    "sphere_integral_E_reference",
]


@dataclass(frozen=True, eq=False)
class GyroElement:
    """Vector y strictly inside the ball of radius t."""

    y: tuple
    t: float

    def __init__(self, y, t):
        arr = np.asarray(y, dtype=float)
        if arr.shape != (3,):
            raise DomainError("GyroElement needs a 3-vector")
        if t <= 0.0:
            raise DomainError("ball radius t must be positive")
        if not float(np.linalg.norm(arr)) < t:
            raise DomainError("GyroElement must lie strictly inside the ball")
        object.__setattr__(self, "y", tuple(arr))
        object.__setattr__(self, "t", float(t))

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.y)

    def norm(self) -> float:
        return float(np.linalg.norm(self.y))


@dataclass(frozen=True, eq=False)
class EigenParams:
    """Spectral parameter, boundary direction and ball radius of a plane wave."""

    lam: float
    xi: tuple
    t: float

    def __init__(self, lam, xi, t):
        arr = np.asarray(xi, dtype=float)
        if arr.shape != (3,):
            raise DomainError("EigenParams needs a 3-vector direction")
        if abs(float(np.linalg.norm(arr)) - 1.0) > 1e-14:
            raise DomainError("xi must be a unit vector (within 1e-14)")
        if t <= 0.0:
            raise DomainError("ball radius t must be positive")
        object.__setattr__(self, "lam", float(lam))
        object.__setattr__(self, "xi", tuple(arr))
        object.__setattr__(self, "t", float(t))


def _same_t(a: GyroElement, b: GyroElement):
    if a.t != b.t:
        raise DomainError("gyro operands must share the same ball radius t")


def mobius_add(a: GyroElement, b: GyroElement) -> GyroElement:
    """Mobius addition a (+) b on the ball."""
    _same_t(a, b)
    t2 = a.t * a.t
    x, y = a.vec, b.vec
    xy = float(x @ y)
    nx = float(x @ x)
    ny = float(y @ y)
    den = 1.0 + 2.0 * xy / t2 + nx * ny / (t2 * t2)
    num = (1.0 + 2.0 * xy / t2 + ny / t2) * x + (1.0 - nx / t2) * y
    return GyroElement(num / den, a.t)


def neg(a: GyroElement) -> GyroElement:
    return GyroElement(-a.vec, a.t)


def mobius_sub(a: GyroElement, b: GyroElement) -> GyroElement:
    return mobius_add(a, neg(b))


def gyration(a: GyroElement, b: GyroElement, z: GyroElement) -> GyroElement:
    """gyr[a,b]z = (-(a+b)) (+) (a (+) (b (+) z)); a rotation fixing 0."""
    _same_t(a, b)
    _same_t(a, z)
    return mobius_add(neg(mobius_add(a, b)), mobius_add(a, mobius_add(b, z)))


def coadd(a: GyroElement, b: GyroElement) -> GyroElement:
    """Coaddition a [+] b = a (+) gyr[a, -b] b."""
    _same_t(a, b)
    return mobius_add(a, gyration(a, neg(b), b))


def cosub(a: GyroElement, b: GyroElement) -> GyroElement:
    """Cosubtraction a [-] b, rational closed form."""
    _same_t(a, b)
    t2 = a.t * a.t
    na = float(a.vec @ a.vec)
    nb = float(b.vec @ b.vec)
    den = 1.0 - na * nb / (t2 * t2)
    vec = ((1.0 - nb / t2) * a.vec - (1.0 - na / t2) * b.vec) / den
    return GyroElement(vec, a.t)


def cosub_compositional(a: GyroElement, b: GyroElement) -> GyroElement:
    """a [-] b through the defining composition a (-) gyr[a,b]b."""
    _same_t(a, b)
    return mobius_sub(a, gyration(a, b, b))


class CancellationResult:
    """Residuals of the two gyrogroup cancellation laws."""

    def __init__(self, ok, left_residual, right_residual):
        self.ok = bool(ok)
        self.left_residual = left_residual
        self.right_residual = right_residual

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return (
            f"CancellationResult(ok={self.ok}, left={self.left_residual:.3e}, "
            f"right={self.right_residual:.3e})"
        )


def cancellation_check(a: GyroElement, b: GyroElement, tol: float = 1e-12) -> CancellationResult:
    """Check a (+) ((-a) (+) b) = b and (b [-] a) (+) a = b."""
    _same_t(a, b)
    left = mobius_add(a, mobius_add(neg(a), b))
    right = mobius_add(cosub(b, a), a)
    r1 = float(np.linalg.norm(left.vec - b.vec))
    r2 = float(np.linalg.norm(right.vec - b.vec))
    return CancellationResult(max(r1, r2) <= tol, r1, r2)


def clifford_norm_sq(z, y, t: float):
    """|1 + conj(z) y / t^2|^2 for vectors z, y (broadcasting over leading axes)."""
    z = np.asarray(z, dtype=float)
    y = np.asarray(y, dtype=float)
    t2 = t * t
    dot = np.sum(z * y, axis=-1)
    nz = np.sum(z * z, axis=-1)
    ny = np.sum(y * y, axis=-1)
    wedge = np.maximum(nz * ny - dot * dot, 0.0)
    return (1.0 + dot / t2) ** 2 + wedge / (t2 * t2)


def boxminus_jacobian(z: GyroElement, y: GyroElement) -> float:
    """Jacobian determinant of w -> w [-] y at w = z (n = 3)."""
    _same_t(z, y)
    t2 = z.t * z.t
    nz = float(z.vec @ z.vec)
    ny = float(y.vec @ y.vec)
    a = 1.0 - nz * ny / (t2 * t2)
    return a ** (-4.0) * (1.0 - ny / t2) ** 3 * float(clifford_norm_sq(z.vec, y.vec, z.t))


def measure_factor(z: GyroElement, y: GyroElement) -> float:
    """Density of the ball measure pulled back through z -> z [-] y (n = 3)."""
    _same_t(z, y)
    t2 = z.t * z.t
    nz = float(z.vec @ z.vec)
    ny = float(y.vec @ y.vec)
    a = 1.0 - nz * ny / (t2 * t2)
    return (a / float(clifford_norm_sq(z.vec, y.vec, z.t))) ** 2


def eigenfunction(ep: EigenParams, y) -> complex:
    """Plane-wave eigenfunction ((t^2-|y|^2)/|t xi - y|^2)^((2 + i lam t)/2).

    Accepts a BallPoint or an array of shape (..., 3); broadcasts in the
    latter case.
    """
    if isinstance(y, BallPoint):
        arr = y.vec
    else:
        arr = np.asarray(y, dtype=float)
    t = ep.t
    xi = np.array(ep.xi)
    ny = np.sum(arr * arr, axis=-1)
    if np.any(ny >= t * t):
        raise DomainError("eigenfunction requires |y| < t")
    diff = t * xi - arr
    base = (t * t - ny) / np.sum(diff * diff, axis=-1)
    if np.any(base <= 0.0):
        raise NumericError("eigenfunction base left the positive axis")
    expo = 1.0 + 0.5j * ep.lam * t
    out = np.exp(expo * np.log(base))
    if out.ndim == 0:
        return complex(out)
    return out


def _e_parts(lam: float, xi, y, z, t: float):
    xi = np.asarray(xi, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    t2 = t * t
    ny = np.sum(y * y, axis=-1)
    nz = np.sum(z * z, axis=-1)
    if np.any(ny >= t2) or np.any(nz >= t2):
        raise DomainError("e_factor requires interior points")
    a = 1.0 - nz * ny / (t2 * t2)
    b = 1.0 - ny / t2
    c = 1.0 - nz / t2
    cl = clifford_norm_sq(z, y, t)
    diff = xi - z / t
    vec = a[..., None] * xi - b[..., None] * (z / t) + c[..., None] * (y / t)
    base = np.sum(diff * diff, axis=-1) * b * cl / np.sum(vec * vec, axis=-1)
    if np.any(base <= 0.0):
        raise NumericError("e_factor base left the positive axis")
    return base, a, cl


def transport_prefactor(lam: float, xi, y, z, t: float):
    """The factor carrying e_{-lam,xi;t}(z) to e_{-lam,xi;t}(z [-] y)."""
    base, _, _ = _e_parts(lam, xi, y, z, t)
    expo = 1.0 - 0.5j * lam * t
    return np.exp(expo * np.log(base))


def e_factor(lam: float, xi, y, z, t: float):
    """Transport prefactor times the pulled-back measure density (n = 3)."""
    base, a, cl = _e_parts(lam, xi, y, z, t)
    expo = 1.0 - 0.5j * lam * t
    out = np.exp(expo * np.log(base)) * (a / cl) ** 2
    if out.ndim == 0:
        return complex(out)
    return out


def sphere_integral_E(
    lam: float,
    r: float,
    z: BallPoint,
    m: ModelParams = DEFAULT_MODEL,
    cfg: QuadratureConfig = DEFAULT_QUAD,
    xi=(1.0, 0.0, 0.0),
) -> complex:
    """Integral of E(lam, xi, r*omega, z) over the unit sphere of directions.

    Product quadrature: Gauss-Legendre in the polar cosine, trapezoid in the
    azimuth, doubled until two consecutive refinements agree.  The result is
    independent of xi and z; its imaginary part vanishes analytically.
    """
    t = m.t
    if not 0.0 < r < t:
        raise DomainError("sphere_integral_E requires 0 < r < t")
    z.validate(m)
    xi = np.asarray(xi, dtype=float)
    xi = xi / np.linalg.norm(xi)
    zv = z.vec

    def level(nc: int, ntheta: int) -> complex:
        cnodes, cweights = gauss_legendre(nc)
        theta = 2.0 * math.pi * np.arange(ntheta) / ntheta
        st = np.sqrt(np.maximum(1.0 - cnodes ** 2, 0.0))
        omega = np.empty((nc, ntheta, 3))
        omega[:, :, 0] = cnodes[:, None]
        omega[:, :, 1] = st[:, None] * np.cos(theta)[None, :]
        omega[:, :, 2] = st[:, None] * np.sin(theta)[None, :]
        vals = e_factor(lam, xi, r * omega, zv, t)
        inner = vals.sum(axis=1) * (2.0 * math.pi / ntheta)
        return complex(np.sum(cweights * inner))

    nc, ntheta = 24, 48
    prev = level(nc, ntheta)
    for _ in range(8):
        nc *= 2
        ntheta *= 2
        cur = level(nc, ntheta)
        if abs(cur - prev) <= max(cfg.abs_tol, cfg.rel_tol * abs(cur)):
            return cur
        prev = cur
    raise NumericError("sphere_integral_E did not converge under refinement")


def sphere_integral_E_reference(lam: float, r: float, m: ModelParams = DEFAULT_MODEL) -> float:
    """Closed form of the sphere integral: (4 pi / (lam t)) (t/r - r/t) sin(lam d)
    with d the ball distance of r*omega to the center; lam = 0 by its limit."""
    t = m.t
    if not 0.0 < r < t:
        raise DomainError("sphere_integral_E_reference requires 0 < r < t")
    d = m.tau * math.log((t + r) / (t - r))
    geom = t / r - r / t
    if lam == 0.0:
        return 4.0 * math.pi * geom * d / t
    return 4.0 * math.pi / (lam * t) * geom * math.sin(lam * d)
