"""Sampled curves in R^3 or on the 3-sphere, with CSV serialization.

A closed curve stores the duplicated endpoint, so samples[0] and samples[-1]
agree within the closure tolerance used to build it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

ON_SPHERE_TOL = 1e-10
CSV_HEADERS = {3: "param,x,y,z", 4: "param,x1,y1,x2,y2"}


@dataclass
class Curve:
    """Ordered samples of a path, with optional tangents and a closure flag."""

    params: np.ndarray
    samples: np.ndarray
    tangents: np.ndarray | None = None
    closed: bool = False
    # set by the tracer: dense interpolant, RHS callable, sphere diagnostics
    dense: object = field(default=None, repr=False)
    rhs: object = field(default=None, repr=False)
    renorm_accum: float = 0.0

    def __post_init__(self):
        self.params = np.asarray(self.params, dtype=float)
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 2 or self.samples.shape[1] not in (3, 4):
            raise ValueError("samples must be (N, 3) or (N, 4)")
        if self.params.shape != (self.samples.shape[0],):
            raise ValueError("params length must match samples")
        if np.any(np.diff(self.params) <= 0):
            raise ValueError("params must be strictly increasing")
        if self.tangents is not None:
            self.tangents = np.asarray(self.tangents, dtype=float)
            if self.tangents.shape != self.samples.shape:
                raise ValueError("tangents shape must match samples")

    @property
    def dim(self) -> int:
        return self.samples.shape[1]

    @property
    def on_sphere(self) -> bool:
        if self.dim != 4:
            return False
        r = np.linalg.norm(self.samples, axis=1)
        return bool(np.max(np.abs(r - 1.0)) <= ON_SPHERE_TOL)

    def closure_gap(self) -> float:
        return float(np.linalg.norm(self.samples[0] - self.samples[-1]))

    def reversed(self) -> "Curve":
        t = None if self.tangents is None else -self.tangents[::-1]
        p = self.params[-1] - self.params[::-1]
        return Curve(p, self.samples[::-1].copy(), t, self.closed)

    def rotated(self, k: int) -> "Curve":
        """Cyclically move sample k to the front (closed curves only)."""
        if not self.closed:
            raise ValueError("rotation needs a closed curve")
        pts = self.samples[:-1]
        tans = None if self.tangents is None else self.tangents[:-1]
        n = len(pts)
        k %= n
        new_pts = np.vstack([pts[k:], pts[:k], pts[k:k + 1]])
        new_t = None if tans is None else np.vstack([tans[k:], tans[:k], tans[k:k + 1]])
        gaps = np.linalg.norm(np.diff(new_pts, axis=0), axis=1)
        params = np.concatenate([[0.0], np.cumsum(np.maximum(gaps, 1e-300))])
        return Curve(params, new_pts, new_t, True)

    def resampled(self, n: int) -> "Curve":
        """Resample to n points uniformly in chord length.

        Closed curves use a periodic cubic spline and keep the duplicated
        endpoint; open curves use a natural spline over [0, 1].
        """
        pts = self.samples
        gaps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        s = np.concatenate([[0.0], np.cumsum(gaps)])
        total = s[-1]
        if total <= 0:
            raise ValueError("degenerate curve")
        if self.closed:
            spline = CubicSpline(s, pts, axis=0, bc_type="periodic")
            snew = np.linspace(0.0, total, n + 1)
        else:
            spline = CubicSpline(s, pts, axis=0)
            snew = np.linspace(0.0, total, n)
        new_pts = spline(snew)
        new_tan = spline(snew, 1)
        return Curve(snew, new_pts, new_tan, self.closed)

    # -- serialization (17 significant digits, plain \n endings) -----------

    def write_csv(self, path: str) -> None:
        lines = [CSV_HEADERS[self.dim]]
        for t, row in zip(self.params, self.samples):
            cells = [f"{t:.17g}"] + [f"{v:.17g}" for v in row]
            lines.append(",".join(cells))
        with open(path, "w", newline="") as fh:
            fh.write("\n".join(lines) + "\n")

    @classmethod
    def read_csv(cls, path: str, closed: bool | None = None) -> "Curve":
        with open(path) as fh:
            header = fh.readline().strip()
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        dims = {v: k for k, v in CSV_HEADERS.items()}
        if header not in dims:
            raise ValueError(f"unrecognized curve header {header!r}")
        params, samples = data[:, 0], data[:, 1:]
        if closed is None:
            closed = bool(np.linalg.norm(samples[0] - samples[-1])
                          <= 1e-6 * (1.0 + np.abs(samples).max()))
        return cls(params, samples, None, closed)


def curve_from_function(fn, t0: float, t1: float, n: int, closed: bool = True,
                        tangent_fn=None) -> Curve:
    """Sample a parametric curve on [t0, t1] with n+1 points (endpoint kept)."""
    ts = np.linspace(t0, t1, n + 1)
    pts = np.array([fn(t) for t in ts])
    tans = None if tangent_fn is None else np.array([tangent_fn(t) for t in ts])
    return Curve(ts, pts, tans, closed)
