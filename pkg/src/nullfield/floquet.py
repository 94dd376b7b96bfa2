"""Linear variational analysis along periodic orbits.

The normal variational system treated here is the planar ODE
xi' = A(t) xi with

    A(t) = [[0, -(1 + G(t))], [2, 0]],

for a periodic scalar G.  A is trace-free, so the monodromy (fundamental
solution over one period) has unit determinant and is classified by its
trace: elliptic for |tr| < 2, hyperbolic for |tr| > 2, parabolic on the
border.  Multipliers are derived from the trace with det = 1, which keeps
the parabolic case numerically meaningful (raw eigenvalues of a near-shear
matrix split as the square root of the entry noise).

For closed orbits of full fields on the sphere, `orbit_monodromy`
integrates the linearized flow over one period and projects the transfer
map onto the normal plane spanned by (-Z, v4), where Z is the Legendrian
orthogonal of the orbit's generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from . import flow as flow_mod
from . import geom, legendrian

TRACE_DEAD_ZONE = 1e-9
DET_TOL = 1e-9


@dataclass(frozen=True)
class NveSpec:
    """Periodic coefficient G(t) = g0 + sum_k (a_k cos + b_k sin)(2 pi k t / period)."""

    g0: float
    cos_coeffs: tuple[float, ...] = ()
    sin_coeffs: tuple[float, ...] = ()
    period: float = 1.0

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError("period must be positive")

    def g(self, t: float) -> float:
        w = 2.0 * math.pi / self.period
        val = self.g0
        for k, a in enumerate(self.cos_coeffs, start=1):
            val += a * math.cos(w * k * t)
        for k, b in enumerate(self.sin_coeffs, start=1):
            val += b * math.sin(w * k * t)
        return val

    def matrix(self, t: float) -> np.ndarray:
        return np.array([[0.0, -(1.0 + self.g(t))], [2.0, 0.0]])


@dataclass(frozen=True)
class DiophantineReport:
    """Bounded rational-approximation check: the verdict only covers
    denominators up to q_max and is not a proof of the unbounded property."""

    passed: bool
    w: float
    gamma: float
    tau: float
    q_max: int
    worst_p: int
    worst_q: int
    margin: float       # min over q of |w - p/q| |q|^tau / gamma; pass iff >= 1

    def to_json(self) -> dict:
        return {
            "passed": self.passed, "w": self.w, "gamma": self.gamma,
            "tau": self.tau, "q_max": self.q_max, "worst_p": self.worst_p,
            "worst_q": self.worst_q, "margin": self.margin,
        }


@dataclass(frozen=True)
class MonodromyReport:
    matrix: np.ndarray
    multipliers: tuple[complex, complex]
    classification: str
    omega: float | None
    diophantine: DiophantineReport | None = None

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix))

    def to_json(self) -> dict:
        return {
            "matrix": [[float(v) for v in row] for row in self.matrix],
            "multipliers": [[m.real, m.imag] for m in self.multipliers],
            "classification": self.classification,
            "omega": self.omega,
            "diophantine": None if self.diophantine is None
            else self.diophantine.to_json(),
        }


def classify_matrix(M: np.ndarray, dead_zone: float = TRACE_DEAD_ZONE,
                    diophantine: DiophantineReport | None = None) -> MonodromyReport:
    """Build a report from a 2x2 area-preserving monodromy matrix.

    Multipliers come from the characteristic data (trace, det): within the
    dead zone around |tr| = 2 the matrix is reported parabolic with the
    double multiplier sign(tr); elliptic multipliers are placed exactly on
    the unit circle at angle omega = arccos(tr / 2).
    """
    M = np.asarray(M, dtype=float)
    tr = float(np.trace(M))
    det = float(np.linalg.det(M))
    if abs(det - 1.0) > 1e-6:
        raise ValueError(f"monodromy determinant {det} is not 1; "
                         "the source system is not area-preserving")
    if abs(abs(tr) - 2.0) <= dead_zone:
        s = 1.0 if tr > 0 else -1.0
        return MonodromyReport(M, (complex(s), complex(s)),
                               "parabolic", None, diophantine)
    if abs(tr) < 2.0:
        omega = math.acos(tr / 2.0)
        lam = complex(math.cos(omega), math.sin(omega))
        return MonodromyReport(M, (lam, lam.conjugate()),
                               "elliptic", omega, diophantine)
    disc = math.sqrt(tr * tr - 4.0 * det)
    return MonodromyReport(M, (complex((tr + disc) / 2.0), complex((tr - disc) / 2.0)),
                           "hyperbolic", None, diophantine)


def monodromy(spec: NveSpec, rtol: float = 1e-12, atol: float = 1e-14) -> MonodromyReport:
    """Fundamental solution of xi' = A(t) xi over one period, from identity."""

    def rhs(t, y):
        return (spec.matrix(t) @ y.reshape(2, 2)).ravel()

    sol = solve_ivp(rhs, (0.0, spec.period), np.eye(2).ravel(),
                    method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(f"monodromy integration failed: {sol.message}")
    return classify_matrix(sol.y[:, -1].reshape(2, 2))


def analytic_monodromy(omega: float) -> np.ndarray:
    """Closed-form monodromy for constant G = omega^2 / 2 - 1 over period 1:
    [[cos w, -(w/2) sin w], [(2/w) sin w, cos w]], eigenvalues e^{+-iw}."""
    if omega == 0:
        raise ValueError("omega must be nonzero")
    return np.array([
        [math.cos(omega), -0.5 * omega * math.sin(omega)],
        [2.0 / omega * math.sin(omega), math.cos(omega)],
    ])


def diophantine_check(w: float, gamma: float, tau: float, q_max: int) -> DiophantineReport:
    """Check |w - p/q| >= gamma / |q|^tau for all p and all 1 <= q <= q_max.

    Only the nearest p per q matters.  The margin reported is the smallest
    ratio |w - p/q| |q|^tau / gamma; the verdict is a bounded check up to
    q_max, never a proof.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if tau <= 2:
        raise ValueError("tau must exceed 2")
    if q_max < 1:
        raise ValueError("q_max must be at least 1")
    qs = np.arange(1, q_max + 1, dtype=float)
    ps = np.round(w * qs)
    err = np.abs(w - ps / qs)
    ratio = err * qs ** tau / gamma
    idx = int(np.argmin(ratio))
    margin = float(ratio[idx])
    return DiophantineReport(margin >= 1.0, w, gamma, tau, q_max,
                             int(ps[idx]), int(qs[idx]), margin)


# -- monodromy of closed orbits of full fields ---------------------------------

FRAME_FLOOR = 1e-9
FD_JAC_STEP = 1e-5


def _fd_jacobian(rhs, x: np.ndarray, step: float) -> np.ndarray:
    n = len(x)
    jac = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = step
        jac[:, j] = (np.asarray(rhs(0.0, x + e)) - np.asarray(rhs(0.0, x - e))) / (2.0 * step)
    return jac


def orbit_monodromy(field, c, theta_frame, period: float | None = None,
                    jacobian: str = "auto", fd_step: float = FD_JAC_STEP,
                    rtol: float = 1e-12, atol: float = 1e-13,
                    dead_zone: float = TRACE_DEAD_ZONE) -> MonodromyReport:
    """Monodromy of a verified closed orbit, in the normal frame (-Z, v4).

    `field` is a flow selector (or a bare rhs callable); `theta_frame` is
    the generator whose E-type combination supplies the Legendrian
    orthogonal Z along the orbit.  The linearized flow is integrated from
    the identity over one period and the 4x4 transfer map is projected onto
    the plane spanned by (-Z/|Z|, v4) at the base point; that plane is
    orthogonal to both the orbit direction and the radius, and the ambient
    polynomial extension of the field keeps the complement invariant, so
    the projection is the normal-bundle return map.

    jacobian='auto' uses exact term-wise Jacobians for generator-built
    fields and central differences (step `fd_step`) otherwise; 'fd' forces
    finite differences.
    """
    if not getattr(c, "closed", False):
        raise ValueError("orbit closure not verified; run detect_closure first")
    if period is None:
        period = float(c.params[-1])

    # frame along the orbit must not degenerate
    z_field = legendrian.LegendrianField(theta_frame, "E")
    zmin = min(abs(z_field.coefficient(complex(r[0], r[1]), complex(r[2], r[3])))
               for r in c.samples)
    if zmin < FRAME_FLOOR:
        raise ValueError("normal frame degenerates along the orbit")

    if callable(field):
        rhs = field
        lfield = None
    else:
        rhs, on_sphere = flow_mod.build_rhs(field)
        if not on_sphere:
            raise ValueError("orbit monodromy is for sphere fields")
        lfield = None
        if jacobian != "fd":
            if isinstance(field, flow_mod.LegendrianSelector):
                lfield = legendrian.LegendrianField(field.generator, field.polarity)
            elif isinstance(field, flow_mod.TorusSelector):
                lfield = legendrian.torus_field()

    if lfield is not None:
        def jac_at(x):
            return legendrian.field_jacobian(lfield, x)
    else:
        def jac_at(x):
            return _fd_jacobian(rhs, x, fd_step)

    base = c.samples[0]

    def aug(tau, s):
        x, Y = s[:4], s[4:].reshape(4, 4)
        return np.concatenate([np.asarray(rhs(tau, x)), (jac_at(x) @ Y).ravel()])

    s0 = np.concatenate([base, np.eye(4).ravel()])
    sol = solve_ivp(aug, (0.0, period), s0, method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(f"variational integration failed: {sol.message}")
    M_full = sol.y[4:, -1].reshape(4, 4)

    Z = legendrian.eval_field_coords(z_field, base)
    n1 = -Z / np.linalg.norm(Z)
    _, _, _, v4 = geom.frame_vectors(base)
    N = np.column_stack([n1, v4])
    M2 = N.T @ M_full @ N
    return classify_matrix(M2, dead_zone)
