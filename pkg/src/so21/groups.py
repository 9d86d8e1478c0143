"""Group layer for SO(2,1)^0: membership, subgroup constructors, the double
cover SL(2,R) -> SO(2,1)^0, and the Iwasawa / Cartan coordinate systems.

Conventions
-----------
The invariant quadratic form is J = diag(1, 1, -1), time axis last.  Group
elements are plain (3, 3) float arrays.  All constructors broadcast: pass a
shape-(k,) parameter array and you get a (k, 3, 3) stack back.  Everything
here is pure, so concurrent use needs no locking.

The one-parameter subgroups are

    a_t : boost in the (x, time) plane,
    n_u : unipotent (parabolic) element,
    k_theta : rotation of the (x, y) plane,

and the Iwasawa factorization used throughout is g = a_t n_u k_theta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

J = np.diag([1.0, 1.0, -1.0])

FORM_TOL = 1e-10
DET_TOL = 1e-10
COMPONENT_TOL = 1e-12
SIGN_TOL = 1e-12


def _require_finite(*values):
    for v in values:
        if not np.all(np.isfinite(v)):
            raise DomainError("non-finite parameter")


def make_a(t):
    """Boost a_t = exp(t V2); broadcasts over array-valued t."""
    t = np.asarray(t, dtype=float)
    _require_finite(t)
    out = np.zeros(t.shape + (3, 3))
    ch, sh = np.cosh(t), np.sinh(t)
    out[..., 0, 0] = ch
    out[..., 0, 2] = sh
    out[..., 1, 1] = 1.0
    out[..., 2, 0] = sh
    out[..., 2, 2] = ch
    return out


def make_n(u):
    """Unipotent element n_u = exp(u (V1 - W)); broadcasts over u."""
    u = np.asarray(u, dtype=float)
    _require_finite(u)
    out = np.zeros(u.shape + (3, 3))
    h = u * u / 2.0
    out[..., 0, 0] = 1.0 - h
    out[..., 0, 1] = u
    out[..., 0, 2] = h
    out[..., 1, 0] = -u
    out[..., 1, 1] = 1.0
    out[..., 1, 2] = u
    out[..., 2, 0] = -h
    out[..., 2, 1] = u
    out[..., 2, 2] = 1.0 + h
    return out


def make_k(theta):
    """Rotation k_theta = exp(theta W), periodic in 2*pi; broadcasts over theta."""
    theta = np.asarray(theta, dtype=float)
    _require_finite(theta)
    out = np.zeros(theta.shape + (3, 3))
    c, s = np.cos(theta), np.sin(theta)
    out[..., 0, 0] = c
    out[..., 0, 1] = -s
    out[..., 1, 0] = s
    out[..., 1, 1] = c
    out[..., 2, 2] = 1.0
    return out


@dataclass(frozen=True)
class So21Diagnostic:
    """Result of a membership test; purely informational, never raised."""

    form_defect: float
    det_defect: float
    component_ok: bool

    @property
    def accepted(self) -> bool:
        return (
            self.form_defect < FORM_TOL
            and self.det_defect < DET_TOL
            and self.component_ok
        )


def so21_check(mat) -> So21Diagnostic:
    """Diagnose whether ``mat`` lies in SO(2,1)^0.

    Reports the worst-entry defect of g^T J g = J, the determinant defect
    |det g - 1|, and whether the (3,3) entry is >= 1 (identity component).
    Accepts any input and never raises; malformed shapes come back with
    infinite defects.
    """
    m = np.asarray(mat, dtype=float)
    if m.shape[-2:] != (3, 3):
        return So21Diagnostic(np.inf, np.inf, False)
    with np.errstate(all="ignore"):
        form = np.swapaxes(m, -1, -2) @ J @ m - J
        form_defect = float(np.max(np.abs(form)))
        det_defect = float(np.max(np.abs(np.linalg.det(m) - 1.0)))
        component_ok = bool(np.all(m[..., 2, 2] >= 1.0 - COMPONENT_TOL))
    if not np.isfinite(form_defect):
        return So21Diagnostic(np.inf, np.inf, False)
    return So21Diagnostic(form_defect, det_defect, component_ok)


def require_member(mat, what="matrix"):
    """Return ``mat`` as an array after asserting SO(2,1)^0 membership."""
    m = np.asarray(mat, dtype=float)
    diag = so21_check(m)
    if not diag.accepted:
        raise DomainError(
            f"{what} is not in SO(2,1)^0: form defect {diag.form_defect:.2e}, "
            f"det defect {diag.det_defect:.2e}, component_ok={diag.component_ok}"
        )
    return m


# ---------------------------------------------------------------------------
# SL(2,R) side and the covering map
# ---------------------------------------------------------------------------

def sl2_a(t):
    """diag(e^{t/2}, e^{-t/2}); maps to make_a(t) under the covering map."""
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape + (2, 2))
    out[..., 0, 0] = np.exp(t / 2.0)
    out[..., 1, 1] = np.exp(-t / 2.0)
    return out


def sl2_n(u):
    """Upper-triangular unipotent [[1, u], [0, 1]]; maps to make_n(u)."""
    u = np.asarray(u, dtype=float)
    out = np.zeros(u.shape + (2, 2))
    out[..., 0, 0] = 1.0
    out[..., 0, 1] = u
    out[..., 1, 1] = 1.0
    return out


def sl2_k(theta):
    """Rotation by theta/2; maps to make_k(theta) (angle doubling)."""
    theta = np.asarray(theta, dtype=float)
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    out = np.zeros(theta.shape + (2, 2))
    out[..., 0, 0] = c
    out[..., 0, 1] = -s
    out[..., 1, 0] = s
    out[..., 1, 1] = c
    return out


def psi(m):
    """Two-to-one covering homomorphism SL(2,R) -> SO(2,1)^0.

    Parameters
    ----------
    m : array_like, shape (..., 2, 2)
        Real matrix with det = 1 (checked to 1e-10).

    Returns
    -------
    ndarray, shape (..., 3, 3)
        Image in SO(2,1)^0.  Quadratic in the entries, so psi(-m) = psi(m).
    """
    m = np.asarray(m, dtype=float)
    if m.shape[-2:] != (2, 2):
        raise DomainError("psi expects a 2x2 matrix")
    _require_finite(m)
    det = m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]
    if np.max(np.abs(det - 1.0)) > DET_TOL:
        raise DomainError(f"psi input must have det 1, defect {np.max(np.abs(det - 1.0)):.2e}")
    a, b = m[..., 0, 0], m[..., 0, 1]
    c, d = m[..., 1, 0], m[..., 1, 1]
    out = np.empty(m.shape[:-2] + (3, 3))
    out[..., 0, 0] = 0.5 * (a * a - b * b - c * c + d * d)
    out[..., 0, 1] = a * b - c * d
    out[..., 0, 2] = 0.5 * (a * a + b * b - c * c - d * d)
    out[..., 1, 0] = a * c - b * d
    out[..., 1, 1] = a * d + b * c
    out[..., 1, 2] = a * c + b * d
    out[..., 2, 0] = 0.5 * (a * a - b * b + c * c - d * d)
    out[..., 2, 1] = a * b + c * d
    out[..., 2, 2] = 0.5 * (a * a + b * b + c * c + d * d)
    return out


@dataclass(frozen=True)
class PSL2Element:
    """A class in PSL(2,R), stored as a sign-canonical SL(2,R) representative.

    The representative makes the first entry of (a, b, c, d) whose modulus
    exceeds 1e-12 positive, which is deterministic and total on SL(2,R).
    """

    matrix: np.ndarray

    @classmethod
    def from_matrix(cls, m) -> "PSL2Element":
        m = np.asarray(m, dtype=float)
        if m.shape != (2, 2):
            raise DomainError("PSL2Element expects a single 2x2 matrix")
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det - 1.0) > 1e-12:
            raise DomainError(f"PSL2 representative must have det 1, got defect {abs(det - 1.0):.2e}")
        for entry in (m[0, 0], m[0, 1], m[1, 0], m[1, 1]):
            if abs(entry) > SIGN_TOL:
                if entry < 0:
                    m = -m
                break
        out = m.copy()
        out.flags.writeable = False
        return cls(out)


# ---------------------------------------------------------------------------
# Coordinates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IwasawaCoords:
    """Coordinates (t, u, theta) of g = a_t n_u k_theta; fields may be arrays."""

    t: float
    u: float
    theta: float


@dataclass(frozen=True)
class CartanCoords:
    """Coordinates (theta1, t, theta2) of g = k_theta1 a_t k_theta2 with t >= 0.

    For t > 0 the pair (theta1, theta2) is unique modulo 2*pi; at t = 0 the
    element is a pure rotation, stored as (0, 0, theta2) with theta2 carrying
    the whole angle.
    """

    theta1: float
    t: float
    theta2: float


def iwasawa(g) -> IwasawaCoords:
    """Decompose g = a_t n_u k_theta.

    The point z = x + iy that g moves the hyperbolic base point to is read
    off the third column (p1, p2, p3): y = 1/(p3 - p1) and x = p2 * y.  The
    boost is t = ln y.  Swapping the order of the boost and unipotent factors
    rescales the unipotent parameter by e^{-t} (= 1/y), so with x = u e^t the
    decomposition g = a_t n_u k lands on u = x / y = p2.  The rotation angle
    is read off the residual k = (a_t n_u)^{-1} g.

    Broadcasts over stacked input; membership is checked first.
    """
    g = require_member(g, "iwasawa input")
    p1, p2, p3 = g[..., 0, 2], g[..., 1, 2], g[..., 2, 2]
    emt = p3 - p1
    # the third column is J-unit: p3^2 = 1 + p1^2 + p2^2, hence p3 > |p1|
    assert np.all(emt > 0.0), "invalid member slipped past the form check"
    t = -np.log(emt) + 0.0  # avoid negative zero at the identity
    u = p2
    k = make_n(-u) @ make_a(-t) @ g
    theta = np.arctan2(k[..., 1, 0], k[..., 0, 0]) % (2.0 * np.pi)
    if g.ndim == 2:
        return IwasawaCoords(float(t), float(u), float(theta))
    return IwasawaCoords(t, u, theta)


def recompose(c: IwasawaCoords):
    """Rebuild the group element a_t n_u k_theta from its coordinates."""
    return make_a(c.t) @ make_n(c.u) @ make_k(c.theta)


def cartan_radius(g):
    """Radius t >= 0 of the polar factorization g = k_theta1 a_t k_theta2.

    Computed as arcsinh of the Euclidean norm of (g13, g23), which is exact
    on the subgroup elements and numerically stable near the identity,
    unlike arcosh(g33).  Invariant under multiplication by K on both sides.
    """
    g = require_member(g, "cartan_radius input")
    return np.arcsinh(np.hypot(g[..., 0, 2], g[..., 1, 2]))


_DEGENERATE_RADIUS = 1e-12


def cartan(g) -> CartanCoords:
    """Polar (K-A-K) coordinates of a single group element.

    The radius comes from :func:`cartan_radius`; for positive radius the two
    angles are pinned by the third column and third row of g, and the
    factorization k_theta1 a_t k_theta2 is unique with t >= 0 and both
    angles in [0, 2*pi).  Radii below 1e-12 degenerate to a pure rotation.
    """
    g = require_member(g, "cartan input")
    if g.ndim != 2:
        raise DomainError("cartan expects a single matrix; use cartan_radius for batches")
    t = float(cartan_radius(g))
    if t < _DEGENERATE_RADIUS:
        theta2 = float(np.arctan2(g[1, 0], g[0, 0]) % (2.0 * np.pi))
        return CartanCoords(0.0, 0.0, theta2)
    theta1 = float(np.arctan2(g[1, 2], g[0, 2]) % (2.0 * np.pi))
    theta2 = float(np.arctan2(-g[2, 1], g[2, 0]) % (2.0 * np.pi))
    return CartanCoords(theta1, t, theta2)


def psi_inv(g) -> PSL2Element:
    """Invert the covering map on a single element of SO(2,1)^0.

    Runs the Iwasawa decomposition and maps each factor back through the
    subgroup correspondences (sl2_a, sl2_n, sl2_k), then canonicalizes the
    overall sign.  Avoids any entrywise sign-case analysis; correctness is
    pinned by round-trip tests.
    """
    g = require_member(g, "psi_inv input")
    if g.ndim != 2:
        raise DomainError("psi_inv expects a single matrix")
    c = iwasawa(g)
    m = sl2_a(c.t) @ sl2_n(c.u) @ sl2_k(c.theta)
    return PSL2Element.from_matrix(m)


def haar_density(c: IwasawaCoords):
    """Density of Haar measure at g = a_t n_u k_theta, against dt du dtheta/(2*pi).

    In these coordinates the bi-invariant measure has constant density 1:
    the quotient map g -> g.i sends the (t, u) patch to the upper half-plane
    with Jacobian exactly cancelling the hyperbolic area weight 1/y^2.  The
    value is certified by the translation-invariance oracle in
    :func:`so21.character.haar_invariance_check` rather than trusted.
    """
    t = np.asarray(c.t, dtype=float)
    if t.ndim == 0:
        return 1.0
    return np.ones_like(t)


def random_elements(rng, count, t_bound=2.0, u_bound=2.0):
    """Seeded random sample of group elements, Iwasawa parameters uniform.

    t and u are uniform in [-t_bound, t_bound] and [-u_bound, u_bound],
    theta uniform in [0, 2*pi).  Returns a (count, 3, 3) stack.
    """
    t = rng.uniform(-t_bound, t_bound, size=count)
    u = rng.uniform(-u_bound, u_bound, size=count)
    theta = rng.uniform(0.0, 2.0 * np.pi, size=count)
    return make_a(t) @ make_n(u) @ make_k(theta)
