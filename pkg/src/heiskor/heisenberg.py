"""Heisenberg group operations, metrics, projections, and chord phase.

Points of the group live in C x R and are represented as float arrays of
shape (..., 3) holding (zx, zy, t); all operations broadcast.  The
symplectic form on the plane is

    omega(z, w) = Im(z * conj(w)) = zy * wx - zx * wy,

which fixes the sign convention used by the group law
(z, t) * (w, s) = (z + w, t + s + 2 omega(z, w)).

For an angle theta, the horizontal line through e^(i theta) and the
vertical plane spanned by i e^(i theta) and the t-axis decompose every
point uniquely as (vertical factor) * (horizontal factor); the vertical
projection extracts the first factor and is nonlinear through the t-twist.

Everything here is pure value arithmetic: no state, no tolerance knobs,
safe for unrestricted concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


def hpoint(zx: float, zy: float, t: float) -> np.ndarray:
    """Build a point array (zx, zy, t)."""
    return np.array([zx, zy, t], dtype=float)


def normalize_angle(theta: float) -> float:
    """Reduce an angle to the fundamental range [0, pi)."""
    return float(np.mod(theta, math.pi))


def omega(z, w) -> np.ndarray:
    """Symplectic form Im(z * conj(w)) on (..., 2) arrays."""
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    return z[..., 1] * w[..., 0] - z[..., 0] * w[..., 1]


def group_mul(p, q) -> np.ndarray:
    """Group product (z,t) * (w,s) = (z + w, t + s + 2 omega(z, w))."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    out = np.broadcast_arrays(p, q)[0].copy()
    out[..., :2] = p[..., :2] + q[..., :2]
    out[..., 2] = p[..., 2] + q[..., 2] + 2.0 * omega(p[..., :2], q[..., :2])
    return out


def group_inv(p) -> np.ndarray:
    """Group inverse (-z, -t)."""
    return -np.asarray(p, dtype=float)


def koranyi_norm(p) -> np.ndarray:
    """Homogeneous norm (|z|^4 + t^2)^(1/4)."""
    p = np.asarray(p, dtype=float)
    zsq = p[..., 0] ** 2 + p[..., 1] ** 2
    return (zsq ** 2 + p[..., 2] ** 2) ** 0.25


def distance(p, q, metric: str = "koranyi") -> np.ndarray:
    """Distance between points: left-invariant Koranyi or parabolic.

    The parabolic metric is (|z-w|^4 + |t-s|^2)^(1/4) on coordinate
    differences; it drops the group twist and is not equivalent to the
    Koranyi metric.
    """
    if metric == "koranyi":
        return koranyi_norm(group_mul(group_inv(q), p))
    if metric == "parabolic":
        return koranyi_norm(np.asarray(p, dtype=float) - np.asarray(q, dtype=float))
    raise DomainError(f"unknown metric {metric!r}")


def dilate(lam: float, p) -> np.ndarray:
    """Anisotropic dilation (z, t) -> (lam z, lam^2 t), lam > 0."""
    if not lam > 0.0:
        raise DomainError("dilation factor must be positive")
    p = np.asarray(p, dtype=float)
    out = p.copy()
    out[..., :2] *= lam
    out[..., 2] *= lam * lam
    return out


@dataclass(frozen=True)
class VerticalPoint:
    """A point (lam1 * i e^(i theta), lam2) of the vertical plane at angle
    theta; carrying theta makes the embedding back into the group
    unambiguous."""

    lam1: np.ndarray
    lam2: np.ndarray
    theta: float

    def embed(self) -> np.ndarray:
        """Coordinates in the ambient group."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        lam1 = np.asarray(self.lam1, dtype=float)
        lam2 = np.asarray(self.lam2, dtype=float)
        return np.stack([-lam1 * s, lam1 * c, lam2], axis=-1)

    def coords(self) -> np.ndarray:
        """Planar coordinates (lam1, lam2) as an (..., 2) array."""
        return np.stack([np.asarray(self.lam1, dtype=float),
                         np.asarray(self.lam2, dtype=float)], axis=-1)


def vertical_projection(theta: float, p) -> VerticalPoint:
    """Vertical projection at angle theta.

    lam1 is the component of z along i e^(i theta); lam2 is
    t + 2 omega(pi_h(z), z) where pi_h is the planar orthogonal projection
    onto the e^(i theta) line.
    """
    theta = normalize_angle(theta)
    p = np.asarray(p, dtype=float)
    c, s = math.cos(theta), math.sin(theta)
    zx, zy, t = p[..., 0], p[..., 1], p[..., 2]
    a = zx * c + zy * s          # <z, e^(i theta)>
    lam1 = -zx * s + zy * c      # <z, i e^(i theta)>
    lam2 = t + 2.0 * a * (s * zx - c * zy)
    return VerticalPoint(lam1, lam2, theta)


def horizontal_projection(theta: float, p) -> np.ndarray:
    """Horizontal coefficient <z, e^(i theta)> of the unique decomposition."""
    theta = normalize_angle(theta)
    p = np.asarray(p, dtype=float)
    return p[..., 0] * math.cos(theta) + p[..., 1] * math.sin(theta)


def embed_horizontal(lam, theta: float) -> np.ndarray:
    """Point (lam e^(i theta), 0) of the horizontal line."""
    theta = normalize_angle(theta)
    lam = np.asarray(lam, dtype=float)
    return np.stack([lam * math.cos(theta), lam * math.sin(theta),
                     np.zeros_like(lam)], axis=-1)


def chord_phase(theta, p, q) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The vertical offset F(theta) between the projections of p and q,
    with its first two theta-derivatives in closed form.

    With u = z - w and v = z + w,

        F(theta) = (t - s) + 2 <u, e^(i theta)> omega(e^(i theta), v)
                   - 2 omega(z, w),

    and differentiating the two angle factors gives F' and F''.  The
    closed forms satisfy (F'/2)^2 + (F''/4)^2 = |u|^2 |v|^2 identically.
    """
    theta = np.asarray(theta, dtype=float)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    c, s = np.cos(theta), np.sin(theta)
    u = p[..., :2] - q[..., :2]
    v = p[..., :2] + q[..., :2]
    dt = p[..., 2] - q[..., 2]
    a = u[..., 0] * c + u[..., 1] * s        # <u, e^(i theta)>
    ap = -u[..., 0] * s + u[..., 1] * c      # <u, i e^(i theta)>
    b = s * v[..., 0] - c * v[..., 1]        # omega(e^(i theta), v)
    bp = c * v[..., 0] + s * v[..., 1]       # <v, e^(i theta)>
    f = dt + 2.0 * a * b - 2.0 * omega(p[..., :2], q[..., :2])
    f1 = 2.0 * (ap * b + a * bp)
    f2 = 4.0 * (ap * bp - a * b)
    return f, f1, f2


def omega_projection_identity_check(theta: float, p, q) -> np.ndarray:
    """Residual of the projection twist identity

        omega(pi_h z, z) - omega(pi_h w, w)
            = omega(z, w) + omega(pi_h(z + w), z - w),

    which vanishes identically; the returned residual is pure rounding,
    below 1e-12 * (1 + |z|^2 + |w|^2).
    """
    theta = normalize_angle(theta)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    c, s = math.cos(theta), math.sin(theta)
    e = np.array([c, s])

    def twist(z):
        a = z[..., 0] * c + z[..., 1] * s
        return a * (s * z[..., 0] - c * z[..., 1])

    z = p[..., :2]
    w = q[..., :2]
    proj_sum = (np.tensordot((z + w), e, axes=([-1], [0])))[..., None] * e
    return (twist(z) - twist(w) - omega(z, w) - omega(proj_sum, z - w))


def sublevel_measure(p, q, eps: float, samples: int) -> float:
    """Lebesgue measure estimate of {theta in [0, pi): |F(theta)| < eps}
    from a uniform deterministic half-open grid."""
    if not eps > 0.0:
        raise DomainError("eps must be positive")
    samples = int(samples)
    if samples < 1000:
        raise DomainError("samples must be at least 1000")
    thetas = math.pi * np.arange(samples) / samples
    f, _, _ = chord_phase(thetas, p, q)
    return math.pi * float(np.count_nonzero(np.abs(f) < eps)) / samples
