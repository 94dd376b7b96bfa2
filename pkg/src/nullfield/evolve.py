"""Transport along the unit energy-flow field and topology-preservation checks.

For a null field the normalized flow direction P = E x B / W is a unit
field wherever W > 0, and its non-autonomous flow carries field lines at
time t0 to field lines at time t1.  Only direction and topology claims are
checked here; the scalar intensity factor of the evolution law is never
needed because the tangency metric is a normalized cross product.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from . import bateman
from .curves import Curve
from .funcspace import Generator

W_FLOOR = 1e-10
MIN_TRANSPORT_SAMPLES = 512


@dataclass(frozen=True)
class TransportSpec:
    """Transport of a point set or curve from time t0 to time t1."""

    generator: Generator
    payload: object                # Curve or (N, 3) / (3,) array
    t0: float = 0.0
    t1: float = 0.5
    mode: str = "direct"
    rtol: float = 1e-10
    atol: float = 1e-12

    def __post_init__(self):
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("tolerances must be positive")


def poynting_direction(h: Generator, pts: np.ndarray, t: float,
                       mode: str = "direct") -> np.ndarray:
    """Unit flow direction at an (..., 3) array of points; raises when the
    energy density drops below the floor anywhere in the batch."""
    F = bateman.rs_field_array(h, pts, t, "hopf", mode)
    E, B = F.real, F.imag
    W = 0.5 * (np.sum(E * E, axis=-1) + np.sum(B * B, axis=-1))
    if np.min(W) <= W_FLOOR:
        raise RuntimeError("energy density degenerated along the transport")
    return np.cross(E, B) / W[..., None]


def _resample_keep_gap(c: Curve, n: int) -> Curve:
    """Chord-length resample that keeps the endpoint samples untouched.

    The residual first/last gap of a traced closed curve is preserved so
    that transported closure defects stay honest.
    """
    if len(c.samples) >= n:
        return c
    gaps = np.linalg.norm(np.diff(c.samples, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(gaps)])
    spline = CubicSpline(s, c.samples, axis=0)
    snew = np.linspace(0.0, s[-1], n)
    out = Curve(snew, spline(snew), None, c.closed)
    return out


def poynting_transport(spec: TransportSpec):
    """Integrate dx/dt = P(x, t) from t0 to t1 for every payload point.

    Returns the same kind of payload (Curve in, Curve out).  All points are
    integrated as one batch system, so the step control is governed by the
    worst point.
    """
    payload = spec.payload
    if isinstance(payload, Curve):
        if payload.dim != 3:
            raise ValueError("transport acts on R^3 curves")
        src = _resample_keep_gap(payload, MIN_TRANSPORT_SAMPLES) \
            if payload.closed else payload
        pts = src.samples
    else:
        pts = np.atleast_2d(np.asarray(payload, dtype=float))
        src = None
    if spec.t1 == spec.t0:
        moved = pts.copy()
    else:
        shape = pts.shape

        def rhs(t, y):
            return poynting_direction(spec.generator, y.reshape(shape), t,
                                      spec.mode).ravel()

        sol = solve_ivp(rhs, (spec.t0, spec.t1), pts.ravel(), method="RK45",
                        rtol=spec.rtol, atol=spec.atol)
        if not sol.success:
            raise RuntimeError(f"transport integration failed: {sol.message}")
        moved = sol.y[:, -1].reshape(shape)

    if src is not None:
        return Curve(src.params, moved, None, src.closed)
    if np.asarray(spec.payload).ndim == 1:
        return moved[0]
    return moved


def transport_unit_speed_defect(spec: TransportSpec, n_checks: int = 33) -> float:
    """Max | |P| - 1 | sampled along the transport trajectories.

    Unit speed is equivalent to pointwise nullness of the field along the
    swept tube.
    """
    payload = spec.payload
    pts = payload.samples if isinstance(payload, Curve) \
        else np.atleast_2d(np.asarray(payload, dtype=float))
    worst = 0.0
    for t in np.linspace(spec.t0, spec.t1, n_checks):
        stage = TransportSpec(spec.generator, pts, spec.t0, t, spec.mode,
                              spec.rtol, spec.atol)
        moved = poynting_transport(stage)
        P = poynting_direction(spec.generator, moved, t, spec.mode)
        worst = max(worst, float(np.max(np.abs(np.linalg.norm(P, axis=-1) - 1.0))))
    return worst


def _curve_tangents(c: Curve) -> np.ndarray:
    if c.tangents is not None:
        return c.tangents
    if not c.closed:
        raise ValueError("tangency check needs tangents or a closed curve")
    pts = c.samples.copy()
    gaps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(gaps)])
    pts[-1] = pts[0]   # periodic fit; the residual gap is far below spline error
    spline = CubicSpline(s, pts, axis=0, bc_type="periodic")
    return spline(s, 1)


def tangency_at_time(h: Generator, c: Curve, t: float, mode: str = "direct",
                     part: str = "E") -> float:
    """Max over samples of |F_part x T| / (|F_part| |T|).

    Zero means the curve is an integral curve of the chosen field component
    at time t.  Raises when the field vanishes on the curve.
    """
    pts = c.samples
    T = _curve_tangents(c)
    F = bateman.rs_field_array(h, pts, t, "hopf", mode)
    V = F.real if part == "E" else F.imag
    nv = np.linalg.norm(V, axis=1)
    nt = np.linalg.norm(T, axis=1)
    if np.min(nv) < 1e-12:
        raise RuntimeError("field vanishes on the curve at this time")
    sin = np.linalg.norm(np.cross(V, T), axis=1) / (nv * nt)
    return float(np.max(sin))
