"""Induced representations of SO(2,1)^0 realized on Fourier series over K.

A vector of the induced space V(s), restricted to the rotation subgroup, is
a function on the circle, stored here as a truncated coefficient vector
(c_n) for |n| <= N.  The group acts by right translation; pulling a
translate back through the decomposition k_theta g = a_t n_u k_theta' gives
the compact-picture formula

    (rho(g) v)(theta) = e^{(1+s) t(theta, g) / 2} v(theta'(theta, g)).

The exponent carries the half shift (1+s)/2 rather than (1+s): the modular
function of the upper-triangular subgroup scales as e^t in these
coordinates, and the half shift is exactly what makes the action unitary
for imaginary s.  That normalization is certified by tests (norm
preservation for s in iR, measurable failure for the unshifted exponent),
not assumed.

Discrete series with even parameter m live inside V(m-1) as one-sided
ladders of K-types; they are modeled here only through those invariant
ladder subspaces.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from ._util import resolve_nodes
from .errors import DomainError, TruncationWarning
from .groups import require_member

TOP_MODE_ENERGY_TOL = 1e-6


# ---------------------------------------------------------------------------
# Spectral parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralParam:
    """Tagged descriptor of an irreducible (or induced-point) representation.

    kind is one of "trivial", "principal", "complementary", "induced_point",
    "discrete".  The induced kinds carry the complex parameter s; discrete
    series carry an even integer m >= 2 and a sign.
    """

    kind: str
    s: complex = 0j
    m: int = 0
    sign: int = 1

    @staticmethod
    def trivial() -> "SpectralParam":
        return SpectralParam("trivial")

    @staticmethod
    def principal(imag_part: float) -> "SpectralParam":
        if imag_part < 0:
            raise DomainError("principal parameter must have s in i*[0, inf)")
        return SpectralParam("principal", s=1j * float(imag_part))

    @staticmethod
    def complementary(x: float) -> "SpectralParam":
        if not 0.0 < x < 1.0:
            raise DomainError("complementary parameter must lie in (0, 1)")
        return SpectralParam("complementary", s=complex(x))

    @staticmethod
    def induced_point(s: complex) -> "SpectralParam":
        return SpectralParam("induced_point", s=complex(s))

    @staticmethod
    def discrete(m: int, sign: int = 1) -> "SpectralParam":
        if m < 2 or m % 2 != 0:
            raise DomainError("discrete parameter m must be an even integer >= 2")
        if sign not in (1, -1):
            raise DomainError("discrete sign must be +1 or -1")
        return SpectralParam("discrete", m=int(m), sign=int(sign))

    @classmethod
    def from_s(cls, s: complex) -> "SpectralParam":
        """Classify a complex parameter into the matching induced kind."""
        s = complex(s)
        if abs(s.real) < 1e-14 and s.imag >= 0:
            return cls.principal(s.imag)
        if abs(s.imag) < 1e-14 and 0.0 < s.real < 1.0:
            return cls.complementary(s.real)
        return cls.induced_point(s)

    @classmethod
    def parse(cls, text: str) -> "SpectralParam":
        """Parse labels like "trivial", "D+4", "D-2", "rho", "rho:i", "rho:0.5".

        Bare "rho" stands for the spherical principal point s = 0; the
        K-type support is the same for the whole rho_s family.
        """
        text = text.strip()
        if text == "trivial":
            return cls.trivial()
        if text == "rho":
            return cls.principal(0.0)
        if text.startswith("D+") or text.startswith("D-"):
            sign = 1 if text[1] == "+" else -1
            return cls.discrete(int(text[2:]), sign)
        if text.startswith("rho:"):
            return cls.from_s(parse_complex(text[4:]))
        raise DomainError(f"cannot parse representation label {text!r}")

    @property
    def is_induced(self) -> bool:
        return self.kind in ("principal", "complementary", "induced_point")

    @property
    def induced_s(self) -> complex:
        """Parameter of the ambient induced space (m - 1 for discrete series)."""
        if self.is_induced:
            return self.s
        if self.kind == "discrete":
            return complex(self.m - 1)
        raise DomainError("the trivial representation has no induced realization here")

    @property
    def label(self) -> str:
        if self.kind == "trivial":
            return "trivial"
        if self.kind == "discrete":
            return f"D{'+' if self.sign > 0 else '-'}{self.m}"
        return f"rho_s({_format_complex(self.s)})"


def parse_complex(text: str) -> complex:
    """Parse "i", "2i", "0.5", "0.5+2i", "1-1i" into a complex number."""
    cleaned = text.strip().replace(" ", "").replace("I", "i")
    if not cleaned:
        raise DomainError("empty complex literal")
    cleaned = cleaned.replace("i", "j")
    if cleaned in ("j", "+j"):
        cleaned = "1j"
    elif cleaned == "-j":
        cleaned = "-1j"
    else:
        # bare trailing j after a sign, e.g. "0.5+j"
        cleaned = cleaned.replace("+j", "+1j").replace("-j", "-1j")
    try:
        return complex(cleaned)
    except ValueError as exc:
        raise DomainError(f"cannot parse complex literal {text!r}") from exc


def _format_complex(value: complex) -> str:
    if value.imag == 0:
        return f"{value.real:g}"
    if value.real == 0:
        return f"{value.imag:g}i"
    return f"{value.real:g}{value.imag:+g}i"


# ---------------------------------------------------------------------------
# Truncated Fourier vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KFourierVector:
    """Coefficients (c_n) for |n| <= N of a function on the rotation circle."""

    N: int
    c: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.c, dtype=complex)
        if c.shape != (2 * self.N + 1,):
            raise DomainError(f"coefficient vector must have length {2 * self.N + 1}")
        object.__setattr__(self, "c", c)

    @classmethod
    def basis(cls, N: int, n: int) -> "KFourierVector":
        if abs(n) > N:
            raise DomainError(f"basis index {n} outside truncation [-{N}, {N}]")
        c = np.zeros(2 * N + 1, dtype=complex)
        c[n + N] = 1.0
        return cls(N, c)

    @classmethod
    def smooth_random(cls, N: int, rng, decay: float = 4.0) -> "KFourierVector":
        """Unit vector with coefficients ~ e^{-|n|/decay} and random phases."""
        ns = np.arange(-N, N + 1)
        c = np.exp(-np.abs(ns) / decay) * np.exp(2j * np.pi * rng.random(2 * N + 1))
        return cls(N, c / np.linalg.norm(c))

    def coeff(self, n: int) -> complex:
        return complex(self.c[n + self.N])

    def norm(self) -> float:
        """L2(K) norm; Parseval makes it the plain 2-norm of the coefficients."""
        return float(np.linalg.norm(self.c))


# ---------------------------------------------------------------------------
# Cocycle and the induced action
# ---------------------------------------------------------------------------

def _cocycle_batch(thetas, gs):
    """Iwasawa data of k_theta g for a node vector and a stack of elements.

    Parameters
    ----------
    thetas : ndarray, shape (M,)
    gs : ndarray, shape (B, 3, 3)

    Returns
    -------
    t, theta_out : ndarrays of shape (B, M)
        Boost and rotation coordinates of k_theta g = a_t n_u k_theta'.

    Entirely closed-form: only the first and third columns of g enter, and
    the residual rotation angle is assembled from the rows of
    (a_t n_u)^{-1} without building any 3x3 products.
    """
    c = np.cos(thetas)[None, :]
    s = np.sin(thetas)[None, :]
    p1 = gs[:, 0, 2, None]
    p2 = gs[:, 1, 2, None]
    p3 = gs[:, 2, 2, None]
    q1 = gs[:, 0, 0, None]
    q2 = gs[:, 1, 0, None]
    q3 = gs[:, 2, 0, None]
    exp_neg_t = p3 - (p1 * c - p2 * s)
    t = -np.log(exp_neg_t)
    u = p1 * s + p2 * c
    # first column of h = k_theta g
    h1 = q1 * c - q2 * s
    h2 = q1 * s + q2 * c
    h3 = q3
    ch, sh = np.cosh(t), np.sinh(t)
    half_u2 = u * u / 2.0
    k00 = ((1.0 - half_u2) * ch - half_u2 * sh) * h1 - u * h2 \
        + (-(1.0 - half_u2) * sh + half_u2 * ch) * h3
    u_et = u * np.exp(t)
    k10 = u_et * h1 + h2 - u_et * h3
    theta_out = np.arctan2(k10, k00) % (2.0 * np.pi)
    return t, theta_out


def cocycle(theta, g):
    """Boost and rotation parts (t, theta') of k_theta g = a_t n_u k_theta'.

    theta may be a scalar or an array; g is a single validated element.
    """
    g = require_member(g, "cocycle input")
    theta_arr = np.atleast_1d(np.asarray(theta, dtype=float))
    t, theta_out = _cocycle_batch(theta_arr, g[None])
    if np.ndim(theta) == 0:
        return float(t[0, 0]), float(theta_out[0, 0])
    return t[0], theta_out[0]


def _dft_nodes(nodes):
    return 2.0 * np.pi * np.arange(nodes) / nodes


def act_induced(gamma, g, v: KFourierVector, nodes=None) -> KFourierVector:
    """Right-translation action with multiplier e^{gamma * t(theta, g)}.

    This is the raw building block: evaluate v on a theta grid, transport
    through the cocycle, multiply, and project back onto |n| <= N by the
    discrete Fourier transform.  Callers pick the exponent gamma; the
    unitary normalization is gamma = (1 + s)/2.
    """
    g = require_member(g, "act_induced input")
    N = v.N
    min_nodes = 4 * N + 4
    nodes = resolve_nodes(nodes, min_nodes)
    if nodes < min_nodes:
        raise DomainError(f"need at least {min_nodes} nodes for truncation {N}")
    thetas = _dft_nodes(nodes)
    t, theta_out = _cocycle_batch(thetas, g[None])
    t, theta_out = t[0], theta_out[0]
    ns = np.arange(-N, N + 1)
    values = np.exp(1j * np.outer(theta_out, ns)) @ v.c
    transported = np.exp(np.asarray(gamma, complex) * t) * values
    coeffs = np.exp(-1j * np.outer(ns, thetas)) @ transported / nodes
    out = KFourierVector(N, coeffs)
    _warn_on_top_modes(out)
    return out


def _warn_on_top_modes(v: KFourierVector):
    total = np.sum(np.abs(v.c) ** 2)
    if total == 0:
        return
    top = abs(v.c[0]) ** 2 + abs(v.c[-1]) ** 2
    if top / total > TOP_MODE_ENERGY_TOL:
        warnings.warn(
            f"top-mode energy fraction {top / total:.2e} exceeds {TOP_MODE_ENERGY_TOL}",
            TruncationWarning,
            stacklevel=3,
        )


def act_principal(p: SpectralParam, g, v: KFourierVector, nodes=None) -> KFourierVector:
    """Unitarily normalized induced action of g on a truncated vector."""
    if not p.is_induced:
        raise DomainError(f"act_principal needs an induced kind, got {p.kind}")
    return act_induced((1.0 + p.s) / 2.0, g, v, nodes=nodes)


@dataclass(frozen=True)
class RepMatrix:
    """Truncated operator of the induced action on the Fourier basis."""

    mat: np.ndarray = field(repr=False)
    s: complex
    g: np.ndarray = field(repr=False)
    N: int
    nodes: int


def rep_matrix(p: SpectralParam, g, N: int, nodes=None) -> RepMatrix:
    """Matrix of the induced action of g on the basis e_n, |n| <= N."""
    if not p.is_induced:
        raise DomainError(f"rep_matrix needs an induced kind, got {p.kind}")
    g = require_member(g, "rep_matrix input")
    min_nodes = 4 * N + 4
    nodes = resolve_nodes(nodes, min_nodes)
    if nodes < min_nodes:
        raise DomainError(f"need at least {min_nodes} nodes for truncation {N}")
    thetas = _dft_nodes(nodes)
    t, theta_out = _cocycle_batch(thetas, g[None])
    t, theta_out = t[0], theta_out[0]
    ns = np.arange(-N, N + 1)
    columns = np.exp((1.0 + p.s) / 2.0 * t)[:, None] * np.exp(1j * np.outer(theta_out, ns))
    project = np.exp(-1j * np.outer(ns, thetas)) / nodes
    return RepMatrix(project @ columns, p.s, g, N, nodes)


def _matcoef_batch(s, gs, n, m, nodes):
    """<rho_s(g) e_n, e_m> for a stack of elements, one (n, m) pair."""
    thetas = _dft_nodes(nodes)
    t, theta_out = _cocycle_batch(thetas, gs)
    mult = np.exp((1.0 + s) / 2.0 * t)
    integrand = mult * np.exp(1j * n * theta_out) * np.exp(-1j * m * thetas)[None, :]
    return integrand.sum(axis=1) / nodes


DEFAULT_MATCOEF_NODES = 128


def matcoef(p: SpectralParam, g, n: int, m: int, nodes=None, N=None) -> complex:
    """Matrix coefficient <rho(g) e_n, e_m> in the L2(K) inner product.

    Exact up to aliasing in the theta quadrature (no basis truncation
    enters: a single coefficient is a plain integral over the circle).
    For g in the rotation subgroup this reduces to the character values,
    and the diagonal (n, n) coefficient transforms under k_theta1 g k_theta2
    by the phase e^{i n (theta1 + theta2)}.
    """
    if not p.is_induced:
        raise DomainError(f"matcoef needs an induced kind, got {p.kind}")
    if N is not None and (abs(n) > N or abs(m) > N):
        raise DomainError(f"indices ({n}, {m}) outside truncation {N}")
    g = require_member(g, "matcoef input")
    nodes = resolve_nodes(nodes, max(DEFAULT_MATCOEF_NODES, 4 * max(abs(n), abs(m)) + 4))
    return complex(_matcoef_batch(p.s, g[None], n, m, nodes)[0])


# ---------------------------------------------------------------------------
# K-type bookkeeping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KTypeSet:
    """Which rotation characters tau_n occur in a representation."""

    param: SpectralParam
    description: str

    def contains(self, n) -> bool | np.ndarray:
        n = np.asarray(n)
        p = self.param
        if p.kind == "trivial":
            result = n == 0
        elif p.kind == "discrete":
            result = n >= p.m // 2 if p.sign > 0 else n <= -(p.m // 2)
        else:
            result = np.ones_like(n, dtype=bool)
        if result.ndim == 0:
            return bool(result)
        return result

    def __contains__(self, n) -> bool:
        return bool(self.contains(int(n)))


def k_types(p: SpectralParam) -> KTypeSet:
    """K-type support of a representation as a predicate plus description.

    The trivial representation carries only tau_0; an induced
    representation rho_s carries every tau_n; the discrete series with
    parameter (m, +) carries the upward ladder n = m/2 + j, j >= 0, and its
    mirror (m, -) the downward ladder n = -m/2 - j.
    """
    if p.kind == "trivial":
        desc = "{0}"
    elif p.kind == "discrete":
        edge = p.m // 2
        desc = f"{{n >= {edge}}}" if p.sign > 0 else f"{{n <= {-edge}}}"
    else:
        desc = "all integers"
    return KTypeSet(p, desc)


@dataclass(frozen=True)
class SpectralFamily:
    """A family of representations sharing tau_n: a single item or a curve."""

    kind: str  # "trivial", "discrete", or "rho" (all unitary induced)
    m: int = 0
    sign: int = 1

    @property
    def label(self) -> str:
        if self.kind == "trivial":
            return "trivial"
        if self.kind == "discrete":
            return f"D{'+' if self.sign > 0 else '-'}{self.m}"
        return "rho_s (principal and complementary)"


def tau_spherical_set(n: int) -> list[SpectralFamily]:
    """All families of irreducible unitary representations containing tau_n.

    Derived from the K-type supports: every rho_s family always qualifies;
    the trivial representation only at n = 0; for n != 0 the discrete
    ladders D(m, sign n) with m = 2, 4, ..., 2|n| reach down to |n|.
    """
    families: list[SpectralFamily] = []
    if n == 0:
        families.append(SpectralFamily("trivial"))
    else:
        sign = 1 if n > 0 else -1
        for m in range(2, 2 * abs(n) + 1, 2):
            families.append(SpectralFamily("discrete", m=m, sign=sign))
    families.append(SpectralFamily("rho"))
    return families


# ---------------------------------------------------------------------------
# Discrete-series ladders
# ---------------------------------------------------------------------------

LADDER_GUARD = 4
LADDER_SOURCE_GUARD = 8


def discrete_ladder_leakage(m: int, sign: int, g, N: int, nodes=None) -> float:
    """Coefficient mass escaping the discrete-series ladder inside V(m-1).

    Acts with the induced representation at parameter s = m - 1 on every
    basis vector of the ladder (n >= m/2 for sign +, mirrored for -) whose
    index keeps a margin of 8 below the truncation bound, and measures the
    relative mass landing outside the ladder.  The top 4 modes on each side
    are excluded as truncation guard.  An exactly invariant subspace drives
    this to roundoff; the value must also not grow beyond noise as N does.
    """
    p = SpectralParam.discrete(m, sign)
    if N < m // 2 + LADDER_SOURCE_GUARD:
        raise DomainError(f"need N >= {m // 2 + LADDER_SOURCE_GUARD} for m = {m}")
    g = require_member(g, "ladder input")
    ambient = SpectralParam.induced_point(p.induced_s)
    rep = rep_matrix(ambient, g, N, nodes=nodes)
    ns = np.arange(-N, N + 1)
    edge = m // 2
    in_ladder = ns >= edge if sign > 0 else ns <= -edge
    guard = np.abs(ns) <= N - LADDER_GUARD
    sources = in_ladder & (np.abs(ns) <= N - LADDER_SOURCE_GUARD)
    cols = rep.mat[:, sources]
    leaked = np.sum(np.abs(cols[~in_ladder & guard, :]) ** 2)
    total = np.sum(np.abs(cols[guard, :]) ** 2)
    if total == 0.0:
        return 0.0
    return float(leaked / total)
