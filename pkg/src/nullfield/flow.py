"""Field-line tracing, closed-orbit detection, and curve topology.

Tracing uses an embedded Runge-Kutta 4(5) pair with adaptive step control
and per-step dense output (quartic interpolation).  Trajectories on the
sphere are renormalized after every accepted step; the total renormalization
displacement is accumulated on the returned curve as a quality diagnostic.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import RK45

from . import bateman, geom, legendrian
from .curves import Curve, curve_from_function
from .funcspace import Generator, MixedPoly

# re-exported container type
__all__ = [
    "Curve", "TraceSpec", "LegendrianSelector", "TorusSelector",
    "SeifertSelector", "RSLineSelector", "PoyntingSelector", "trace",
    "detect_closure", "integral_drift", "phase_windings", "linking_number",
    "hopf_fiber_r3",
]

MIN_CURVE_SEPARATION = 1e-3


# -- field selectors ------------------------------------------------------------

@dataclass(frozen=True)
class LegendrianSelector:
    """Contact-plane field of a generator, traced on the sphere."""
    generator: Generator
    polarity: str = "E"


@dataclass(frozen=True)
class TorusSelector:
    """The quadratic torus-foliating field (see `legendrian.torus_field`)."""


@dataclass(frozen=True)
class SeifertSelector:
    p: int
    q: int


@dataclass(frozen=True)
class RSLineSelector:
    """Electric or magnetic lines of the assembled field at a fixed time."""
    generator: Generator
    part: str = "E"            # 'E' or 'B'
    mode: str = "direct"
    variant: str = "hopf"
    time: float = 0.0


@dataclass(frozen=True)
class PoyntingSelector:
    """Unit energy-flow direction at a fixed time (autonomous tracing)."""
    generator: Generator
    mode: str = "direct"
    time: float = 0.0


@dataclass(frozen=True)
class TraceSpec:
    field: object
    start: np.ndarray
    tau_max: float
    rtol: float = 1e-10
    atol: float = 1e-10
    max_step: float = 0.1
    bbox: float = 50.0          # R^3 traces abort outside this box

    def __post_init__(self):
        if self.rtol <= 0 or self.atol <= 0 or self.max_step <= 0:
            raise ValueError("tolerances and max_step must be positive")


def _legendrian_rhs(L: legendrian.LegendrianField):
    crhs = legendrian.field_rhs_complex(L)

    def f(_tau, y):
        d1, d2 = crhs(complex(y[0], y[1]), complex(y[2], y[3]))
        return np.array([d1.real, d1.imag, d2.real, d2.imag])

    return f


def build_rhs(selector) -> tuple[object, bool]:
    """Right-hand side callable and whether the trace lives on the sphere."""
    if isinstance(selector, LegendrianSelector):
        L = legendrian.LegendrianField(selector.generator, selector.polarity)
        return _legendrian_rhs(L), True
    if isinstance(selector, TorusSelector):
        return _legendrian_rhs(legendrian.torus_field()), True
    if isinstance(selector, SeifertSelector):
        spec = legendrian.SeifertSpec(selector.p, selector.q)
        p_, q_ = float(spec.p), float(spec.q)

        def f_seifert(_tau, y):
            return np.array([-p_ * y[1], p_ * y[0], -q_ * y[3], q_ * y[2]])

        return f_seifert, True
    if isinstance(selector, RSLineSelector):
        h, part = selector.generator, selector.part
        mode, variant, t0 = selector.mode, selector.variant, selector.time
        if part not in ("E", "B"):
            raise ValueError("part must be 'E' or 'B'")

        def f_rs(_tau, y):
            F = bateman.rs_field_array(h, y, t0, variant, mode)
            return F.real if part == "E" else F.imag

        return f_rs, False
    if isinstance(selector, PoyntingSelector):
        h, mode, t0 = selector.generator, selector.mode, selector.time

        def f_poy(_tau, y):
            F = bateman.rs_field_array(h, y, t0, "hopf", mode)
            E, B = F.real, F.imag
            W = 0.5 * float(E @ E + B @ B)
            if W <= 1e-10:
                raise RuntimeError("energy density vanished along the trace")
            return np.cross(E, B) / W

        return f_poy, False
    raise TypeError(f"unknown field selector {selector!r}")


class _DensePath:
    """Piecewise dense output collected from the accepted integrator steps."""

    def __init__(self, segments, t_ends, t0, y0):
        self.segments = segments
        self.t_ends = t_ends          # right endpoint of each segment
        self.t0 = t0
        self.y0 = y0
        self.t_max = t_ends[-1] if t_ends else t0

    def __call__(self, tau: float) -> np.ndarray:
        if tau <= self.t0:
            return self.y0.copy()
        i = min(bisect_right(self.t_ends, tau), len(self.segments) - 1)
        # bisect gives the first segment ending strictly after tau
        if i > 0 and tau <= self.t_ends[i - 1]:
            i -= 1
        return self.segments[i](min(tau, self.t_max))


def trace(spec: TraceSpec) -> Curve:
    """Integrate a field line and return the sampled curve with tangents.

    Raises RuntimeError on integrator failure (step-size underflow at a
    singularity) or when an R^3 trajectory leaves the bounding box.
    """
    f, on_sphere = build_rhs(spec.field)
    y0 = np.asarray(spec.start, dtype=float).copy()
    if on_sphere:
        if y0.shape != (4,):
            raise ValueError("sphere traces need a 4-vector start")
        y0 /= np.linalg.norm(y0)
    elif y0.shape != (3,):
        raise ValueError("R^3 traces need a 3-vector start")

    if spec.tau_max == 0.0:
        c = Curve(np.array([0.0]), y0[None, :],
                  np.asarray(f(0.0, y0))[None, :], False)
        c.rhs = f
        return c
    if spec.tau_max < 0:
        raise ValueError("tau_max must be nonnegative")

    stepper = RK45(f, 0.0, y0, t_bound=spec.tau_max, max_step=spec.max_step,
                   rtol=spec.rtol, atol=spec.atol)
    ts, ys = [0.0], [y0.copy()]
    segments, ends = [], []
    renorm = 0.0
    while stepper.status == "running":
        msg = stepper.step()
        if stepper.status == "failed":
            raise RuntimeError(f"integration failed: {msg}")
        segments.append(stepper.dense_output())
        ends.append(stepper.t)
        if on_sphere:
            n = float(np.linalg.norm(stepper.y))
            renorm += abs(n - 1.0)
            stepper.y = stepper.y / n
        elif np.any(np.abs(stepper.y) > spec.bbox):
            raise RuntimeError("trajectory left the bounding box")
        ts.append(stepper.t)
        ys.append(stepper.y.copy())

    ys = np.array(ys)
    tangents = np.array([f(t, y) for t, y in zip(ts, ys)])
    c = Curve(np.array(ts), ys, tangents, False)
    c.dense = _DensePath(segments, ends, 0.0, y0)
    c.rhs = f
    c.renorm_accum = renorm
    return c


# -- closed-orbit detection -----------------------------------------------------

def detect_closure(c: Curve, tol: float = 1e-8):
    """Smallest positive return time of a traced curve, or None.

    Scans the dense output for local minima of the distance to the start
    point, requires tangent alignment above 0.99 at the candidate, and
    refines the minimum by ternary search.  Marks the curve closed and
    returns the period when a return below `tol` is found.
    """
    if c.dense is None or c.rhs is None:
        raise ValueError("closure detection needs a traced curve with dense output")
    x0 = c.samples[0]
    v0 = np.asarray(c.rhs(0.0, x0))
    n0 = np.linalg.norm(v0)
    if n0 == 0:
        raise ValueError("stationary start point")
    t_max = c.params[-1]

    def dist(tau):
        return float(np.linalg.norm(c.dense(tau) - x0))

    n_grid = max(2048, min(32768, int(t_max / 1e-2)))
    taus = np.linspace(0.0, t_max, n_grid + 1)
    ds = np.array([dist(t) for t in taus])

    escape = max(100.0 * tol, 1e-6)
    start_idx = int(np.argmax(ds > escape))
    if ds[start_idx] <= escape:
        return None

    # a grid-sampled V-shaped minimum sits up to (local speed) * step above
    # the true minimum, so candidates are filtered with that bound
    grid_step = t_max / n_grid
    for i in range(start_idx + 1, n_grid):
        if ds[i] <= ds[i - 1] and ds[i] <= ds[i + 1]:
            v_loc = float(np.linalg.norm(c.rhs(taus[i], c.dense(taus[i]))))
            if ds[i] > 1.5 * v_loc * grid_step + 100.0 * tol:
                continue
            lo, hi = taus[i - 1], taus[i + 1]
            for _ in range(200):
                m1 = lo + (hi - lo) / 3.0
                m2 = hi - (hi - lo) / 3.0
                if dist(m1) <= dist(m2):
                    hi = m2
                else:
                    lo = m1
                if hi - lo < 1e-14 * max(1.0, t_max):
                    break
            tau_star = 0.5 * (lo + hi)
            if dist(tau_star) < tol:
                v = np.asarray(c.rhs(tau_star, c.dense(tau_star)))
                align = float(v @ v0) / (np.linalg.norm(v) * n0)
                if align > 0.99:
                    c.closed = True
                    return tau_star
    return None


def truncate_to_period(c: Curve, period: float, n: int | None = None) -> Curve:
    """Resample a traced curve over one period as a closed curve."""
    if c.dense is None:
        raise ValueError("needs a traced curve")
    if n is None:
        n = max(256, int(np.sum(c.params <= period)) * 2)
    ts = np.linspace(0.0, period, n + 1)
    pts = np.array([c.dense(t) for t in ts])
    pts[-1] = pts[0] + (pts[-1] - pts[0])  # keep the true (tiny) gap
    tans = np.array([c.rhs(t, y) for t, y in zip(ts, pts)])
    out = Curve(ts, pts, tans, True)
    out.rhs = c.rhs
    out.dense = c.dense
    return out


# -- invariants along curves ----------------------------------------------------

def integral_drift(c: Curve, f) -> float:
    """Max |f(sample) - f(start)| along a curve.

    `f` is a mixed polynomial (or any generator) evaluated in the complex
    sphere coordinates; drift of a complex value is measured in modulus of
    the difference.  R^3 curves are pulled back through the inverse
    projection before evaluating.
    """
    pts = c.samples
    if c.dim == 3:
        pts = geom.stereo_lift_array(pts)
    z1 = pts[:, 0] + 1j * pts[:, 1]
    z2 = pts[:, 2] + 1j * pts[:, 3]
    vals = np.asarray(f.eval(z1, z2) if hasattr(f, "eval") else f(z1, z2))
    return float(np.max(np.abs(vals - vals[0])))


def phase_windings(c: Curve) -> tuple[int, int]:
    """Integer windings of arg z1 and arg z2 over a closed sphere curve.

    Raises when the curve is not closed or passes within 1e-6 of either
    degenerate circle (where the phase is meaningless).
    """
    if not c.closed:
        raise ValueError("phase windings need a closed curve")
    if c.dim != 4:
        raise ValueError("phase windings are defined on sphere curves")
    z1 = c.samples[:, 0] + 1j * c.samples[:, 1]
    z2 = c.samples[:, 2] + 1j * c.samples[:, 3]
    if np.min(np.abs(z1)) <= 1e-6 or np.min(np.abs(z2)) <= 1e-6:
        raise ValueError("curve passes too near a degenerate circle")
    out = []
    for z in (z1, z2):
        ang = np.unwrap(np.angle(z))
        total = (ang[-1] - ang[0]) / (2.0 * math.pi)
        k = round(total)
        if abs(total - k) > 1e-3:
            raise ValueError(f"phase winding {total} is not an integer")
        out.append(int(k))
    return out[0], out[1]


# -- linking numbers ------------------------------------------------------------

def _min_separation(P1: np.ndarray, P2: np.ndarray) -> float:
    d = P1[:, None, :] - P2[None, :, :]
    return float(np.sqrt(np.min(np.sum(d * d, axis=-1))))


def _vertices(c: Curve) -> np.ndarray:
    if not c.closed:
        raise ValueError("linking numbers need closed curves")
    if c.dim != 3:
        raise ValueError("linking numbers are computed for R^3 curves")
    pts = c.samples
    if np.linalg.norm(pts[0] - pts[-1]) < 1e-6 * (1.0 + np.abs(pts).max()):
        pts = pts[:-1]
    return pts


def _subdivide(P: np.ndarray) -> np.ndarray:
    mids = 0.5 * (P + np.roll(P, -1, axis=0))
    out = np.empty((2 * len(P), 3))
    out[0::2] = P
    out[1::2] = mids
    return out


def _gauss_midpoint_sum(P1: np.ndarray, P2: np.ndarray) -> float:
    d1 = np.roll(P1, -1, axis=0) - P1
    d2 = np.roll(P2, -1, axis=0) - P2
    m1 = P1 + 0.5 * d1
    m2 = P2 + 0.5 * d2
    total = 0.0
    block = max(1, int(4e6) // max(1, len(P2)))
    for i0 in range(0, len(P1), block):
        i1 = i0 + block
        diff = m1[i0:i1, None, :] - m2[None, :, :]
        r3 = np.sum(diff * diff, axis=-1) ** 1.5
        cross = np.cross(d1[i0:i1, None, :], d2[None, :, :])
        total += float(np.sum(np.sum(diff * cross, axis=-1) / r3))
    return total / (4.0 * math.pi)


def linking_number(c1: Curve, c2: Curve, max_refine: int = 6) -> int:
    """Gauss linking number of two disjoint closed curves in R^3.

    Composite midpoint quadrature of the double line integral over the
    sampled polylines, with successive segment subdivision and Richardson
    extrapolation until the extrapolated value sits within 1e-3 of an
    integer.  Raises when the curves come closer than 1e-3 or the
    quadrature fails to settle on an integer.
    """
    P1, P2 = _vertices(c1), _vertices(c2)
    if _min_separation(P1, P2) <= MIN_CURVE_SEPARATION:
        raise ValueError("curves are too close for a reliable linking number")
    prev = _gauss_midpoint_sum(P1, P2)
    for _ in range(max_refine):
        P1, P2 = _subdivide(P1), _subdivide(P2)
        cur = _gauss_midpoint_sum(P1, P2)
        extrap = (4.0 * cur - prev) / 3.0
        k = round(extrap)
        if abs(extrap - k) < 1e-3 and abs(cur - extrap) < 5e-3:
            return int(k)
        prev = cur
    raise RuntimeError("linking quadrature did not converge to an integer")


def _polyline_linking_exact(c1: Curve, c2: Curve) -> float:
    """Exact linking number of the sampled polylines (solid-angle formula).

    Independent of the quadrature path; used as an oracle in tests.
    """
    P1, P2 = _vertices(c1), _vertices(c2)
    B0, B1 = P2, np.roll(P2, -1, axis=0)
    A1 = np.roll(P1, -1, axis=0)

    def dots(u, v):
        return np.einsum("ij,ij->i", u, v)

    total = 0.0
    for j in range(len(P1)):
        a = B0 - P1[j]
        b = B0 - A1[j]
        cc = B1 - A1[j]
        dd = B1 - P1[j]
        p = dots(a, np.cross(b, cc))
        an, bn = np.linalg.norm(a, axis=1), np.linalg.norm(b, axis=1)
        cn, dn = np.linalg.norm(cc, axis=1), np.linalg.norm(dd, axis=1)
        d1 = an * bn * cn + dots(a, b) * cn + dots(b, cc) * an + dots(cc, a) * bn
        d2 = an * dn * cn + dots(a, dd) * cn + dots(dd, cc) * an + dots(cc, a) * dn
        total += float(np.sum(np.arctan2(p, d1) + np.arctan2(p, d2)))
    return total / (2.0 * math.pi)


# -- canonical curves -----------------------------------------------------------

def hopf_fiber_r3(w: geom.S3Point, n: int = 512) -> Curve:
    """Projection to R^3 of the circle (z1 e^{i theta}, z2 e^{i theta}).

    The fiber through the pole (|z2| = 0) projects to an unbounded line and
    is rejected.
    """
    if abs(w.z2) < 1e-9:
        raise ValueError("fiber through the projection pole is unbounded in R^3")

    def point(th):
        ph = np.exp(1j * th)
        z1, z2 = w.z1 * ph, w.z2 * ph
        p4 = np.array([z1.real, z1.imag, z2.real, z2.imag])
        return geom.stereo_project_array(p4)

    return curve_from_function(point, 0.0, 2.0 * math.pi, n, closed=True)
