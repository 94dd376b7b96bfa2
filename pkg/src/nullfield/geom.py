"""Geometry of the unit 3-sphere in C^2 = R^4.

Points are stored as real 4-vectors (x1, y1, x2, y2), read as the complex
pair (z1, z2) = (x1 + i*y1, x2 + i*y2).  The module provides the orthonormal
frame adapted to the standard contact structure, the contact pairing, the
ambient complex structure J, the inverse-stereographic correspondence with
R^3 (plus a point at infinity), and Hopf coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SPHERE_TOL = 1e-12
_NORMALIZE_TOL = 1e-6


@dataclass(frozen=True)
class S3Point:
    """A point of the unit sphere in R^4; the constructor renormalizes.

    Inputs whose norm differs from 1 by more than 1e-6 are rejected, so a
    caller cannot silently feed a far-off-sphere vector.
    """

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if c.shape != (4,):
            raise ValueError(f"expected a real 4-vector, got shape {c.shape}")
        n = float(np.linalg.norm(c))
        if not math.isfinite(n) or abs(n - 1.0) > _NORMALIZE_TOL:
            raise ValueError(f"not a unit 4-vector (norm {n!r})")
        object.__setattr__(self, "coords", c / n)

    @classmethod
    def from_complex(cls, z1: complex, z2: complex) -> "S3Point":
        return cls(np.array([z1.real, z1.imag, z2.real, z2.imag]))

    @property
    def z1(self) -> complex:
        return complex(self.coords[0], self.coords[1])

    @property
    def z2(self) -> complex:
        return complex(self.coords[2], self.coords[3])


_INF_SENTINEL = object()


@dataclass(frozen=True)
class R3Point:
    """A point of R^3 with a tagged point at infinity (not a NaN)."""

    coords: np.ndarray = field(default=None)
    at_infinity: bool = False

    def __post_init__(self):
        if self.at_infinity:
            object.__setattr__(self, "coords", None)
            return
        c = np.asarray(self.coords, dtype=float)
        if c.shape != (3,) or not np.all(np.isfinite(c)):
            raise ValueError("finite real 3-vector required unless at_infinity")
        object.__setattr__(self, "coords", c)

    @classmethod
    def infinity(cls) -> "R3Point":
        return cls(coords=None, at_infinity=True)


@dataclass(frozen=True)
class HopfFrame:
    """Orthonormal frame (v1, v2, v3, v4) of R^4 attached at a sphere point.

    v1, v2 span the contact plane (kernel of the standard contact form),
    v3 is the outward radial direction and v4 is the dual of the contact
    form, i.e. the Hopf field.
    """

    base: S3Point
    v1: np.ndarray
    v2: np.ndarray
    v3: np.ndarray
    v4: np.ndarray

    def gram(self) -> np.ndarray:
        m = np.stack([self.v1, self.v2, self.v3, self.v4])
        return m @ m.T


def frame_vectors(coords: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Frame fields as functions of the raw coordinates (vectorized).

    `coords` has shape (..., 4); each returned array matches that shape.
    The formulas are polynomial, so they extend off the sphere (where the
    frame is orthogonal but scaled by |coords|).
    """
    x1, y1, x2, y2 = np.moveaxis(np.asarray(coords, dtype=float), -1, 0)
    v1 = np.stack([-x2, y2, x1, -y1], axis=-1)
    v2 = np.stack([-y2, -x2, y1, x1], axis=-1)
    v3 = np.stack([x1, y1, x2, y2], axis=-1)
    v4 = np.stack([-y1, x1, -y2, x2], axis=-1)
    return v1, v2, v3, v4


def hopf_frame(p: S3Point) -> HopfFrame:
    """Contact-adapted orthonormal frame at a sphere point."""
    v1, v2, v3, v4 = frame_vectors(p.coords)
    return HopfFrame(p, v1, v2, v3, v4)


def contact_pairing(p: S3Point, X) -> float:
    """Pairing of the standard contact form with a 4-vector at p.

    Equals -y1*X1 + x1*X2 - y2*X3 + x2*X4, i.e. v4 . X.  Vanishes exactly
    when X lies in the contact plane.
    """
    x1, y1, x2, y2 = p.coords
    X = np.asarray(X, dtype=float)
    return float(-y1 * X[0] + x1 * X[1] - y2 * X[2] + x2 * X[3])


def complex_structure(X) -> np.ndarray:
    """Ambient complex structure J: (a1,a2,a3,a4) -> (-a2,a1,-a4,a3)."""
    X = np.asarray(X, dtype=float)
    return np.stack([-X[..., 1], X[..., 0], -X[..., 3], X[..., 2]], axis=-1)


def stereo_project(p: S3Point) -> R3Point:
    """Projection S^3 -> R^3 u {inf} inverting `stereo_lift`.

    The pole (1, 0, 0, 0) maps to the infinity sentinel.
    """
    x1, y1, x2, y2 = p.coords
    d = 1.0 - x1
    if d <= SPHERE_TOL:
        return R3Point.infinity()
    return R3Point(np.array([x2 / d, -y2 / d, y1 / d]))


def stereo_lift(q: R3Point | np.ndarray) -> S3Point:
    """Lift R^3 u {inf} -> S^3; infinity maps to the pole (1, 0, 0, 0).

    (x, y, z) -> ((r^2 - 1 + 2iz)/(r^2 + 1), 2(x - iy)/(r^2 + 1)).
    """
    if isinstance(q, R3Point):
        if q.at_infinity:
            return S3Point(np.array([1.0, 0.0, 0.0, 0.0]))
        x, y, z = q.coords
    else:
        x, y, z = np.asarray(q, dtype=float)
    r2 = x * x + y * y + z * z
    d = r2 + 1.0
    return S3Point(np.array([(r2 - 1.0) / d, 2.0 * z / d, 2.0 * x / d, -2.0 * y / d]))


def stereo_lift_array(q: np.ndarray) -> np.ndarray:
    """Vectorized `stereo_lift` on an (..., 3) array, returning (..., 4)."""
    q = np.asarray(q, dtype=float)
    x, y, z = np.moveaxis(q, -1, 0)
    r2 = x * x + y * y + z * z
    d = r2 + 1.0
    return np.stack([(r2 - 1.0) / d, 2.0 * z / d, 2.0 * x / d, -2.0 * y / d], axis=-1)


def stereo_project_array(w: np.ndarray) -> np.ndarray:
    """Vectorized `stereo_project` on an (..., 4) array of on-sphere points.

    No infinity handling: the caller must keep samples away from the pole.
    """
    w = np.asarray(w, dtype=float)
    x1, y1, x2, y2 = np.moveaxis(w, -1, 0)
    d = 1.0 - x1
    return np.stack([x2 / d, -y2 / d, y1 / d], axis=-1)


def hopf_coords(p: S3Point) -> tuple[float, float, float]:
    """Hopf coordinates (s, phi1, phi2) with z1 = cos(s) e^{i phi1}, z2 = sin(s) e^{i phi2}.

    s lies in [0, pi/2]; on the degenerate circles the undefined angle is
    returned as 0 (the atan2(0, 0) convention).
    """
    x1, y1, x2, y2 = p.coords
    r1 = math.hypot(x1, y1)
    r2 = math.hypot(x2, y2)
    s = math.atan2(r2, r1)
    phi1 = math.atan2(y1, x1)
    phi2 = math.atan2(y2, x2)
    return s, phi1, phi2


def hopf_coords_inverse(s: float, phi1: float, phi2: float) -> S3Point:
    c, sn = math.cos(s), math.sin(s)
    return S3Point(np.array([c * math.cos(phi1), c * math.sin(phi1),
                             sn * math.cos(phi2), sn * math.sin(phi2)]))
