"""Legendrian vector fields on the 3-sphere and their invariants.

A generator Theta (a mixed polynomial or exponential) determines two fields
through the contact frame {v1, v2}:

    E-type:  Re(Theta) v1 - Im(Theta) v2      (the real part of Theta*(v1 + i v2))
    B-type:  Re(Theta) v2 + Im(Theta) v1      (the imaginary part; equals J of E-type)

Both lie in the contact plane at every point.  The module also provides the
ambient divergence identities that characterize which generators give
divergence-free pairs, rotation numbers of closed Legendrian curves in the
global {v1, v2} trivialization, the circle-fibration fields and contact
forms indexed by coprime (p, q), first-integral generators, the level-set
tangency criterion, and totally-tangential intersection defects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import geom
from .curves import Curve, curve_from_function
from .funcspace import Generator, MixedPoly, eval_jet

PAIRING_TOL = 1e-12
LEGENDRIAN_TOL = 1e-6       # tangent must stay in the contact plane to this
PROJECTION_FLOOR = 1e-9     # contact projection below this -> winding undefined
MAX_ANGLE_STEP = math.pi / 2

POLARITIES = ("E", "B")


@dataclass(frozen=True)
class LegendrianField:
    """Contact-plane field built from a generator and a polarity."""

    generator: Generator
    polarity: str = "E"

    def __post_init__(self):
        if self.polarity not in POLARITIES:
            raise ValueError(f"polarity must be one of {POLARITIES}")

    def coefficient(self, z1: complex, z2: complex) -> complex:
        return self.generator.eval(z1, z2)


def eval_field(L: LegendrianField, p: geom.S3Point) -> np.ndarray:
    """Tangent 4-vector of the field at a sphere point."""
    return eval_field_coords(L, p.coords)


def eval_field_coords(L: LegendrianField, coords: np.ndarray) -> np.ndarray:
    """Field value from raw (..., 4) coordinates (polynomial extension)."""
    coords = np.asarray(coords, dtype=float)
    z1 = coords[..., 0] + 1j * coords[..., 1]
    z2 = coords[..., 2] + 1j * coords[..., 3]
    th = np.asarray(L.generator.eval(z1, z2))
    v1, v2, _, _ = geom.frame_vectors(coords)
    if L.polarity == "E":
        return th.real[..., None] * v1 - th.imag[..., None] * v2
    return th.real[..., None] * v2 + th.imag[..., None] * v1


def field_rhs_complex(L: LegendrianField):
    """Scalar right-hand side in complex form, for fast ODE stepping.

    E-type: (dz1, dz2) = (-conj(Theta) zb2, conj(Theta) zb1); B-type is i times that.
    """
    gen = L.generator
    factor = 1.0 if L.polarity == "E" else 1j

    def rhs(z1: complex, z2: complex) -> tuple[complex, complex]:
        tc = factor * gen.eval(z1, z2).conjugate()
        return -tc * z2.conjugate(), tc * z1.conjugate()

    return rhs


def field_jacobian(L: LegendrianField, coords: np.ndarray) -> np.ndarray:
    """Exact 4x4 real Jacobian of the field at a point (term-wise derivatives).

    In complex form the field is (dz1, dz2) = (-c Tb zb2, c Tb zb1) with
    Tb = conj(Theta) and c = 1 (E-type) or i (B-type); the real Jacobian is
    assembled from the Wirtinger jet of Theta via d/dx = d/dz + d/dzb,
    d/dy = i (d/dz - d/dzb).
    """
    x1, y1, x2, y2 = np.asarray(coords, dtype=float)
    z1, z2 = complex(x1, y1), complex(x2, y2)
    w1, w2 = z1.conjugate(), z2.conjugate()
    c = 1.0 if L.polarity == "E" else 1j
    t = eval_jet(L.generator, z1, z2)
    tb = t.value.conjugate()
    # Wirtinger partials of conj(Theta)
    b_z1, b_zb1 = t.d_z1bar.conjugate(), t.d_z1.conjugate()
    b_z2, b_zb2 = t.d_z2bar.conjugate(), t.d_z2.conjugate()

    u = (-c * b_z1 * w2, -c * b_zb1 * w2, -c * b_z2 * w2, -c * b_zb2 * w2 - c * tb)
    v = (c * b_z1 * w1, c * b_zb1 * w1 + c * tb, c * b_z2 * w1, c * b_zb2 * w1)

    jac = np.empty((4, 4))
    for row, (w_z1, w_zb1, w_z2, w_zb2) in ((0, u), (2, v)):
        dx1 = w_z1 + w_zb1
        dy1 = 1j * (w_z1 - w_zb1)
        dx2 = w_z2 + w_zb2
        dy2 = 1j * (w_z2 - w_zb2)
        jac[row] = [dx1.real, dy1.real, dx2.real, dy2.real]
        jac[row + 1] = [dx1.imag, dy1.imag, dx2.imag, dy2.imag]
    return jac


def torus_field() -> LegendrianField:
    """The quadratic field whose orbits foliate the tori |z1| = const.

    Componentwise it is ( y1|z2|^2, -x1|z2|^2, -y2|z1|^2, x2|z1|^2 ), with
    integral curves (z1 e^{-i|z2|^2 tau}, z2 e^{i|z1|^2 tau}); |z1|^2 and
    |z2|^2 are first integrals.  Equals the B-type field of zb1*zb2.
    """
    return LegendrianField(MixedPoly.monomial(1.0, 0, 0, 1, 1), "B")


def divergence_identities(theta: MixedPoly, p: geom.S3Point):
    """Ambient divergences of both fields and their tangential-CR forms.

    Returns (divE_direct, divB_direct, 2 Re Lbar, 2 Im Lbar).  The direct
    values come from exact term-wise differentiation of the polynomial
    component formulas; the frame fields are divergence-free, so
    divE = grad(Re Theta).v1 - grad(Im Theta).v2 and
    divB = grad(Re Theta).v2 + grad(Im Theta).v1.  Both pairs agree, and
    vanish identically exactly when the generator is tangentially CR.
    """
    if not isinstance(theta, MixedPoly):
        raise TypeError("exact divergence needs a MixedPoly generator")
    jet = eval_jet(theta, p.z1, p.z2)
    grad = jet.gradient_r4()          # complex: d(theta)/d(x1,y1,x2,y2)
    v1, v2, _, _ = geom.frame_vectors(p.coords)
    grad_re, grad_im = grad.real, grad.imag
    div_e = float(grad_re @ v1 - grad_im @ v2)
    div_b = float(grad_re @ v2 + grad_im @ v1)
    lbar = -p.z2 * jet.d_z1bar + p.z1 * jet.d_z2bar
    return div_e, div_b, 2.0 * lbar.real, 2.0 * lbar.imag


# -- rotation numbers ----------------------------------------------------------

def rotation_number(c: Curve) -> int:
    """Winding number of the tangent in the global contact trivialization.

    The tangent at each sample is expressed as (T.v1) + i (T.v2); the summed
    angle increments of this loop divided by 2 pi give an exact integer.
    Raises if the curve is not closed, the tangent leaves the contact plane
    beyond 1e-6 (relative), the contact projection drops below 1e-9, or the
    sampling is too coarse (an angle step of pi/2 or more).
    """
    if not c.closed:
        raise ValueError("rotation number needs a closed curve")
    if c.dim != 4 or c.tangents is None:
        raise ValueError("need an on-sphere curve with tangents")
    pts, tans = c.samples[:-1], c.tangents[:-1]
    v1, v2, v3, v4 = geom.frame_vectors(pts)
    norms = np.linalg.norm(tans, axis=1)
    if np.any(norms == 0):
        raise ValueError("vanishing tangent")
    a = np.sum(tans * v1, axis=1)
    b = np.sum(tans * v2, axis=1)
    off_plane = np.hypot(np.sum(tans * v3, axis=1), np.sum(tans * v4, axis=1))
    if np.max(off_plane / norms) > LEGENDRIAN_TOL:
        raise ValueError("tangent leaves the contact plane: curve is not Legendrian")
    proj = np.hypot(a, b)
    if np.min(proj) < PROJECTION_FLOOR:
        raise ValueError("contact projection of the tangent is too small; "
                         "winding undefined")
    w = a + 1j * b
    steps = np.angle(np.roll(w, -1) / w)
    if np.max(np.abs(steps)) >= MAX_ANGLE_STEP:
        raise ValueError("angle step of pi/2 or more; refine the sampling")
    total = float(np.sum(steps)) / (2.0 * math.pi)
    k = round(total)
    if abs(total - k) > 1e-6:
        raise ValueError(f"winding sum {total} is not an integer")
    return int(k)


# -- circle fibrations ---------------------------------------------------------

@dataclass(frozen=True)
class SeifertSpec:
    """Coprime positive integers selecting a foliation of S^3 by circles."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1 or math.gcd(self.p, self.q) != 1:
            raise ValueError("p, q must be positive coprime integers")


def seifert_field(S: SeifertSpec, p: geom.S3Point) -> np.ndarray:
    """(-p y1, p x1, -q y2, q x2): tangent to the (p, q) circle fibration."""
    x1, y1, x2, y2 = p.coords
    return np.array([-S.p * y1, S.p * x1, -S.q * y2, S.q * x2])


def seifert_form(S: SeifertSpec, p: geom.S3Point) -> np.ndarray:
    """Cartesian coefficients of the contact form annihilating the fibration.

    Evaluated through the on-sphere simplification
        [-(p-q) R x1 - q x2,  -(p-q) R y1 + q y2,
          (q-p) R x2 + p x1,  (q-p) R y2 - p y1],   R = x1 x2 - y1 y2,
    which agrees with the rational coefficient formulas away from the two
    degenerate circles and extends real-analytically across them.
    """
    return seifert_form_coords(S, p.coords)


def seifert_form_coords(S: SeifertSpec, coords: np.ndarray) -> np.ndarray:
    x1, y1, x2, y2 = np.moveaxis(np.asarray(coords, dtype=float), -1, 0)
    R = x1 * x2 - y1 * y2
    pq = S.p - S.q
    return np.stack([
        -pq * R * x1 - S.q * x2,
        -pq * R * y1 + S.q * y2,
        -pq * R * x2 + S.p * x1,
        -pq * R * y2 - S.p * y1,
    ], axis=-1)


def seifert_form_rational(S: SeifertSpec, p: geom.S3Point) -> np.ndarray:
    """The rational coefficient formulas; needs both |z1|, |z2| > 0."""
    x1, y1, x2, y2 = p.coords
    m1, m2 = x1 * x1 + y1 * y1, x2 * x2 + y2 * y2
    if m1 < 1e-18 or m2 < 1e-18:
        raise ValueError("rational form is singular on the degenerate circles")
    P = S.p * m1 + S.q * m2
    R = x1 * x2 - y1 * y2
    I = y1 * x2 + x1 * y2
    return np.array([
        (-P * R * x1 - S.q * I * y1) / m1,
        (-P * R * y1 + S.q * I * x1) / m1,
        (P * R * x2 + S.p * I * y2) / m2,
        (P * R * y2 - S.p * I * x2) / m2,
    ])


def seifert_pairing_hopf(S: SeifertSpec, p: geom.S3Point, X: np.ndarray) -> float:
    """Pairing of the contact form with a tangent vector, evaluated through
    the Hopf-coordinate expression

        (p cos^2 s + q sin^2 s) cos(phi1+phi2) ds
        + sin(phi1+phi2) sin s cos s (q dphi1 - p dphi2),

    with the coordinate differentials pushed to Cartesian components.
    Valid away from the degenerate circles.
    """
    x1, y1, x2, y2 = p.coords
    r1, r2 = math.hypot(x1, y1), math.hypot(x2, y2)
    if r1 < 1e-9 or r2 < 1e-9:
        raise ValueError("Hopf pairing undefined on the degenerate circles")
    s, phi1, phi2 = geom.hopf_coords(p)
    ds = -(x1 * X[0] + y1 * X[1]) / (r1 * r2)   # -d|z1| / sin s with |z1| = cos s
    dphi1 = (x1 * X[1] - y1 * X[0]) / (r1 * r1)
    dphi2 = (x2 * X[3] - y2 * X[2]) / (r2 * r2)
    A = (S.p * r1 * r1 + S.q * r2 * r2) * math.cos(phi1 + phi2)
    B = math.sin(phi1 + phi2) * r1 * r2
    return float(A * ds + B * (S.q * dphi1 - S.p * dphi2))


def contact_volume_ratio(S: SeifertSpec, p: geom.S3Point,
                         fd_step: float = 1e-3) -> float:
    """Ratio of alpha ^ d(alpha) to the round volume form at a point.

    d(alpha) is computed by 4th-order central differences of the Cartesian
    coefficients; both 3-forms are contracted against the orthonormal
    tangent frame (v1, v2, v4), with the volume normalized so that
    vol(u, v, w) = det[n | u | v | w] for the outward normal n.
    Closed form of the ratio: (p + q)(p cos^2 s + q sin^2 s).
    """
    s, _, _ = geom.hopf_coords(p)
    if min(s, math.pi / 2 - s) < 1e-3:
        raise ValueError("point too close to a degenerate circle")
    coords = p.coords
    offsets = np.array([-2.0, -1.0, 1.0, 2.0]) * fd_step
    weights = np.array([1.0, -8.0, 8.0, -1.0]) / (12.0 * fd_step)

    jac = np.zeros((4, 4))  # jac[i, j] = d(alpha_i)/d(x_j)
    for j in range(4):
        e = np.zeros(4)
        e[j] = 1.0
        for o, wgt in zip(offsets, weights):
            jac[:, j] += wgt * seifert_form_coords(S, coords + o * e)
    d_alpha = jac.T - jac   # (d alpha)(u, v) = u^T (jac^T - jac) v

    alpha = seifert_form_coords(S, coords)
    v1, v2, _, v4 = geom.frame_vectors(coords)
    frame = (v1, v2, v4)

    def two_form(u, v):
        return float(u @ d_alpha @ v)

    a_vals = [float(alpha @ u) for u in frame]
    wedge = (a_vals[0] * two_form(frame[1], frame[2])
             - a_vals[1] * two_form(frame[0], frame[2])
             + a_vals[2] * two_form(frame[0], frame[1]))
    vol = float(np.linalg.det(np.column_stack([coords, *frame])))
    return wedge / vol


# -- first integrals and tangency ----------------------------------------------

def h_from_potential_poly(G: MixedPoly) -> MixedPoly:
    """Generator with prescribed first integrals: 2 dG/dz2 zb1 - 2 dG/dz1 zb2.

    For real-valued G this is the contact projection recipe (the x,y
    derivative combination collapses to Wirtinger derivatives); the level
    sets of G are invariant under the B-type field of the result.  For
    holomorphic G the real part plays the role of G and Im(G) is in
    addition a first integral of the E-type field.
    """
    zb1 = MixedPoly.monomial(2.0, 0, 0, 1, 0)
    zb2 = MixedPoly.monomial(2.0, 0, 0, 0, 1)
    return G.wirtinger(1) * zb1 - G.wirtinger(0) * zb2


def h_from_potential(G: MixedPoly, z1: complex, z2: complex) -> complex:
    """Pointwise value of `h_from_potential_poly` (G must be holomorphic
    or real-valued for the first-integral interpretation)."""
    return h_from_potential_poly(G).eval(z1, z2)


@dataclass(frozen=True)
class TangencyResult:
    defect: float
    vacuous: bool


def tangency_defect(theta: Generator, G: MixedPoly, p: geom.S3Point,
                    floor: float = 1e-9) -> TangencyResult:
    """Mod-pi angle defect |sin(arg Theta - arg h)| for level-set tangency.

    The field of Theta is tangent to the level set of G through p exactly
    when the two arguments agree modulo pi (an unoriented line field is
    sign-blind).  When either |h| or |Theta| falls below `floor` the
    criterion is vacuous at p and a flagged zero is returned.
    """
    th = theta.eval(p.z1, p.z2)
    hv = h_from_potential(G, p.z1, p.z2)
    if abs(th) <= floor or abs(hv) <= floor:
        return TangencyResult(0.0, True)
    return TangencyResult(abs((th * hv.conjugate()).imag) / (abs(th) * abs(hv)), False)


def critical_rho(p: int, q: int) -> float:
    """Scale making the zero set of rho z1^p z2^q - 1 touch the unit sphere.

    |z1|^p |z2|^q is maximized on |z1|^2 = p/(p+q) with maximum
    (p/(p+q))^{p/2} (q/(p+q))^{q/2}; rho is the reciprocal.
    """
    t = p + q
    return (t / p) ** (p / 2.0) * (t / q) ** (q / 2.0)


def tt_polynomial(p: int, q: int) -> MixedPoly:
    """rho z1^p z2^q - 1 with the critical scale."""
    return (MixedPoly.monomial(critical_rho(p, q), p, q, 0, 0)
            - MixedPoly.constant(1.0))


def tt_torus_curve(p: int, q: int, n: int | None = None,
                   arg_target: float = 0.0) -> Curve:
    """Phase-locked (p, q) torus curve on the critical torus r1^2 = p/(p+q).

    Parametrized as
        (r1 e^{i(q theta + psi/(2p))}, r2 e^{i(-p theta + psi/(2q))}),
    which sits on {rho z1^p z2^q = e^{i psi}} for psi = `arg_target`.
    psi = 0 gives the tangential intersection of `tt_polynomial` with the
    sphere.  Sampled with at least 64 (p + q) points.
    """
    if n is None:
        n = 64 * (p + q)
    r1 = math.sqrt(p / (p + q))
    r2 = math.sqrt(q / (p + q))
    c1 = arg_target / (2.0 * p)
    c2 = arg_target / (2.0 * q)

    def phases(th):
        z1 = r1 * np.exp(1j * (q * th + c1))
        z2 = r2 * np.exp(1j * (-p * th + c2))
        return z1, z2

    def point(th):
        z1, z2 = phases(th)
        return np.array([z1.real, z1.imag, z2.real, z2.imag])

    def tangent(th):
        z1, z2 = phases(th)
        d1, d2 = 1j * q * z1, -1j * p * z2
        return np.array([d1.real, d1.imag, d2.real, d2.imag])

    return curve_from_function(point, 0.0, 2.0 * math.pi, n, closed=True,
                               tangent_fn=tangent)


def tt_link_defect(G: MixedPoly, c: Curve) -> tuple[float, float]:
    """(max |G| on the curve, max contact projection of grad Re G).

    Both vanish exactly when the curve lies in the zero set of G and every
    intersection with the sphere is tangential (the gradient then sits in
    the span of the radial and Hopf directions).
    """
    if c.dim != 4:
        raise ValueError("need a curve on the sphere")
    max_g = 0.0
    max_proj = 0.0
    for row in c.samples:
        z1 = complex(row[0], row[1])
        z2 = complex(row[2], row[3])
        jet = eval_jet(G, z1, z2)
        max_g = max(max_g, abs(jet.value))
        grad_re = jet.gradient_r4().real
        v1, v2, _, _ = geom.frame_vectors(row)
        max_proj = max(max_proj, math.hypot(float(grad_re @ v1), float(grad_re @ v2)))
    return max_g, max_proj
