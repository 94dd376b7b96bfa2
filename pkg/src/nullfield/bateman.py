"""Null electromagnetic fields from a pair of complex spacetime potentials.

The potentials (alpha, beta) map R^{3+1} onto the unit sphere of C^2 and
satisfy the cross-product identity

    grad(alpha) x grad(beta) = i (dt(alpha) grad(beta) - dt(beta) grad(alpha)),

so that F = h(alpha, beta) * grad(alpha) x grad(beta) solves Maxwell's
equations and is null for every holomorphic h.  The module evaluates the
potentials and their exact first derivatives (closed-form quotient rule),
assembles the complex field F = E + iB, and provides the pointwise residual
checks: the identity above, nullness, and finite-difference Maxwell
residuals.

Two variable families are provided: ``hopf`` (the explicit rational pair
whose t=0 slice inverts `geom.stereo_project`) and ``tilde`` (complex
conjugation combined with time reversal, which preserves the identity and
carries antiholomorphic generators).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geom
from .funcspace import ExpWrapped, Generator, MixedPoly

FD_STEP = 1e-3           # default 4th-order finite-difference step
W_UNDEFINED = 1e-14      # energy density below which P is flagged undefined

VARIANTS = ("hopf", "tilde")


@dataclass(frozen=True)
class SpacetimePoint:
    """A point (x, y, z, t); the rational potentials are regular at every
    real point because |denominator|^2 = (r^2 - t^2 + 1)^2 + 4 t^2 > 0."""

    x: float
    y: float
    z: float
    t: float

    @property
    def xyz(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class VariableJet:
    """Values and exact first derivatives of the potential pair at a point."""

    alpha: complex
    beta: complex
    grad_alpha: np.ndarray
    grad_beta: np.ndarray
    dt_alpha: complex
    dt_beta: complex


@dataclass(frozen=True)
class ComplexTriple:
    """A complex 3-vector F = E + iB."""

    components: np.ndarray

    @property
    def E(self) -> np.ndarray:
        return self.components.real.copy()

    @property
    def B(self) -> np.ndarray:
        return self.components.imag.copy()


@dataclass(frozen=True)
class EMSample:
    """Electric/magnetic vectors with energy density and unit energy-flow
    direction; `poynting` is None when the density is below `W_UNDEFINED`."""

    E: np.ndarray
    B: np.ndarray
    W: float
    poynting: np.ndarray | None


# -- potential jets (vectorized core) -----------------------------------------

def variable_jets(xyz: np.ndarray, t, variant: str = "hopf"):
    """Potentials and their exact derivatives on an (..., 3) array of points.

    Returns (alpha, beta, grad_alpha, grad_beta, dt_alpha, dt_beta) where the
    gradients have shape (..., 3).  ``tilde`` values are the conjugated,
    time-reversed counterparts; note dt picks up a sign under t -> -t.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    xyz = np.asarray(xyz, dtype=float)
    x, y, z = np.moveaxis(xyz, -1, 0)
    t = np.broadcast_to(np.asarray(t, dtype=float), x.shape)

    if variant == "tilde":
        a, b, ga, gb, da, db = variable_jets(xyz, -t, "hopf")
        return (np.conj(a), np.conj(b), np.conj(ga), np.conj(gb),
                -np.conj(da), -np.conj(db))

    r2 = x * x + y * y + z * z
    tmi = t - 1j                      # t - i
    D = r2 - tmi * tmi
    Na = r2 - t * t - 1.0 + 2j * z
    Nb = 2.0 * (x - 1j * y)
    D2 = D * D

    alpha = Na / D
    beta = Nb / D

    # dD/d(x,y,z) = (2x, 2y, 2z), dD/dt = -2(t - i)
    # dNa = (2x, 2y, 2z + 2i), dNa/dt = -2t;  dNb = (2, -2i, 0), dNb/dt = 0
    ga = np.stack([
        (2.0 * x * D - Na * 2.0 * x) / D2,
        (2.0 * y * D - Na * 2.0 * y) / D2,
        ((2.0 * z + 2j) * D - Na * 2.0 * z) / D2,
    ], axis=-1)
    gb = np.stack([
        (2.0 * D - Nb * 2.0 * x) / D2,
        (-2j * D - Nb * 2.0 * y) / D2,
        (-Nb * 2.0 * z) / D2,
    ], axis=-1)
    da = (-2.0 * t * D + Na * 2.0 * tmi) / D2
    db = Nb * 2.0 * tmi / D2
    return alpha, beta, ga, gb, da, db


def variables(p: SpacetimePoint, variant: str = "hopf") -> VariableJet:
    """Potential jet at a single spacetime point."""
    a, b, ga, gb, da, db = variable_jets(p.xyz, p.t, variant)
    return VariableJet(complex(a), complex(b), ga, gb, complex(da), complex(db))


def variables_inverse(w: geom.S3Point, t: float) -> np.ndarray:
    """Spatial point mapped to `w` by the potential pair at time t.

    Closed form: with S = (1 + Re a - 2 t Im a) / (1 - Re a) and
    D = (S + 1) + 2it one has z = Im(a D)/2 and x - iy = b D / 2.
    Fails near the pole (1, 0) where the map is not invertible into R^3.
    """
    a, b = w.z1, w.z2
    if 1.0 - a.real < 1e-9:
        raise ValueError("sample too close to the pole (1, 0)")
    S = (1.0 + a.real - 2.0 * t * a.imag) / (1.0 - a.real)
    D = complex(S + 1.0, 2.0 * t)
    z = (a * D).imag / 2.0
    bd = b * D / 2.0
    return np.array([bd.real, -bd.imag, z])


# -- field assembly ------------------------------------------------------------

def _cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.stack([
        u[..., 1] * v[..., 2] - u[..., 2] * v[..., 1],
        u[..., 2] * v[..., 0] - u[..., 0] * v[..., 2],
        u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0],
    ], axis=-1)


def bateman_pde_residual(p: SpacetimePoint, variant: str = "hopf") -> np.ndarray:
    """grad(a) x grad(b) - i (dt(a) grad(b) - dt(b) grad(a)); must vanish."""
    return pde_residual_array(p.xyz, p.t, variant)


def pde_residual_array(xyz: np.ndarray, t, variant: str = "hopf") -> np.ndarray:
    a, b, ga, gb, da, db = variable_jets(xyz, t, variant)
    return _cross(ga, gb) - 1j * (da[..., None] * gb - db[..., None] * ga)


def _check_mode(h: Generator, mode: str) -> None:
    if mode == "direct":
        if not h.is_holomorphic():
            raise ValueError("direct mode requires a holomorphic generator "
                             "(terms free of zb1, zb2)")
    elif mode == "antiholomorphic":
        if not h.is_antiholomorphic():
            raise ValueError("antiholomorphic mode requires a generator in "
                             "zb1, zb2 only")
    else:
        raise ValueError(f"unknown mode {mode!r}")


def rs_field_array(h: Generator, xyz: np.ndarray, t, variant: str = "hopf",
                   mode: str = "direct") -> np.ndarray:
    """Complex field E + iB on an (..., 3) array of spatial points.

    direct mode evaluates h(a, b) * grad(a) x grad(b) with the requested
    variant's potentials.  Antiholomorphic mode evaluates conj(h) through
    the tilde potentials, which at t = 0 agrees componentwise with the
    conjugate of the direct field of conj(h).
    """
    _check_mode(h, mode)
    if mode == "antiholomorphic":
        a, b, ga, gb, _, _ = variable_jets(xyz, t, "tilde")
        hv = h.conj().eval(a, b)
    else:
        a, b, ga, gb, _, _ = variable_jets(xyz, t, variant)
        hv = h.eval(a, b)
    return np.asarray(hv)[..., None] * _cross(ga, gb)


def rs_field(h: Generator, p: SpacetimePoint, variant: str = "hopf",
             mode: str = "direct") -> ComplexTriple:
    """Complex field E + iB at a single spacetime point."""
    return ComplexTriple(rs_field_array(h, p.xyz, p.t, variant, mode))


def em_sample(F: ComplexTriple) -> EMSample:
    """Split a complex field vector into E, B, energy density and unit flow."""
    E, B = F.components.real, F.components.imag
    W = 0.5 * float(E @ E + B @ B)
    if W < W_UNDEFINED:
        return EMSample(E.copy(), B.copy(), W, None)
    return EMSample(E.copy(), B.copy(), W, np.cross(E, B) / W)


def null_defect(F: ComplexTriple) -> tuple[float, float]:
    """(E.B, |E|^2 - |B|^2); the real and half-imaginary parts of F.F."""
    E, B = F.components.real, F.components.imag
    return float(E @ B), float(E @ E - B @ B)


def null_defect_array(F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    E, B = F.real, F.imag
    return np.sum(E * B, axis=-1), np.sum(E * E, axis=-1) - np.sum(B * B, axis=-1)


# -- finite-difference machinery ------------------------------------------------

_FD4_OFFSETS = np.array([-2.0, -1.0, 1.0, 2.0])
_FD4_WEIGHTS = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0


def _fd4_derivative(sample, h: float):
    """4th-order first derivative from values at offsets (-2,-1,1,2)*h."""
    vals = [sample(o * h) for o in _FD4_OFFSETS]
    return sum(w * v for w, v in zip(_FD4_WEIGHTS, vals)) / h


def maxwell_residual(h: Generator, p: SpacetimePoint, variant: str = "hopf",
                     mode: str = "direct", fd_step: float = FD_STEP):
    """Maxwell residuals (dtE - curl B, dtB + curl E, div E, div B).

    All derivatives are 4th-order central finite differences of the
    assembled field, independent of the exact jets used to build it.
    """
    if fd_step <= 0:
        raise ValueError("fd_step must be positive")
    base = np.array([p.x, p.y, p.z, p.t])

    def field_at(q):
        return rs_field_array(h, q[:3], q[3], variant, mode)

    # Jacobian dF_i/dq_j, shape (3, 4), complex
    jac = np.empty((3, 4), dtype=complex)
    for j in range(4):
        e = np.zeros(4)
        e[j] = 1.0
        jac[:, j] = _fd4_derivative(lambda s: field_at(base + s * e), fd_step)

    dE, dB = jac.real, jac.imag
    curl_E = np.array([dE[2, 1] - dE[1, 2], dE[0, 2] - dE[2, 0], dE[1, 0] - dE[0, 1]])
    curl_B = np.array([dB[2, 1] - dB[1, 2], dB[0, 2] - dB[2, 0], dB[1, 0] - dB[0, 1]])
    faraday = dE[:, 3] - curl_B
    ampere = dB[:, 3] + curl_E
    div_E = dE[0, 0] + dE[1, 1] + dE[2, 2]
    div_B = dB[0, 0] + dB[1, 1] + dB[2, 2]
    return faraday, ampere, float(div_E), float(div_B)


def sphere_pushforward_check(h: Generator, t: float, sample: geom.S3Point,
                             fd_step: float = FD_STEP) -> float:
    """Angle defect between the pushed-forward (E, B) pair and the
    sphere-side pair (Re h, Im h) combinations of the contact frame.

    The potential map at time t carries the spatial field vectors to
    tangent vectors of the sphere; both images must be positive multiples
    (the same multiple) of the frame combinations built from h.  Returns
    the worst of the two direction defects and the factor mismatch;
    0 means parallel with a common positive factor.
    """
    if not h.is_holomorphic():
        raise ValueError("pushforward check requires a holomorphic generator")
    x0 = variables_inverse(sample, t)
    F = rs_field_array(h, x0, t)
    E, B = F.real, F.imag
    nE, nB = np.linalg.norm(E), np.linalg.norm(B)
    if min(nE, nB) < 1e-9:
        raise ValueError("field vanishes at the sampled point")

    def sphere_map(x):
        a, b, *_ = variable_jets(x, t)
        return np.array([a.real, a.imag, b.real, b.imag])

    jac = np.empty((4, 3))
    for j in range(3):
        e = np.zeros(3)
        e[j] = 1.0
        jac[:, j] = _fd4_derivative(lambda s: sphere_map(x0 + s * e), fd_step)

    Et, Bt = jac @ E, jac @ B
    v1, v2, _, _ = geom.frame_vectors(sample.coords)
    hv = complex(h.eval(sample.z1, sample.z2))
    Eref = hv.real * v1 - hv.imag * v2
    Bref = hv.real * v2 + hv.imag * v1

    cE = np.linalg.norm(Et) / np.linalg.norm(Eref)
    cB = np.linalg.norm(Bt) / np.linalg.norm(Bref)
    dE = np.linalg.norm(Et / np.linalg.norm(Et) - Eref / np.linalg.norm(Eref))
    dB = np.linalg.norm(Bt / np.linalg.norm(Bt) - Bref / np.linalg.norm(Bref))
    return float(max(dE, dB, abs(cE - cB) / max(cE, cB)))
