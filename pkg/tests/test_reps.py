import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st
from numpy.testing import assert_allclose

from so21 import groups, hyperbolic, reps
from so21.errors import DomainError, TruncationWarning


# ---------------------------------------------------------------------------
# spectral parameters
# ---------------------------------------------------------------------------

def test_param_constructors_validate():
    with pytest.raises(DomainError):
        reps.SpectralParam.principal(-1.0)
    with pytest.raises(DomainError):
        reps.SpectralParam.complementary(1.5)
    with pytest.raises(DomainError):
        reps.SpectralParam.discrete(3, 1)
    with pytest.raises(DomainError):
        reps.SpectralParam.discrete(2, 0)


def test_param_classification():
    assert reps.SpectralParam.from_s(2j).kind == "principal"
    assert reps.SpectralParam.from_s(0.5).kind == "complementary"
    assert reps.SpectralParam.from_s(3.0).kind == "induced_point"
    assert reps.SpectralParam.from_s(1 + 1j).kind == "induced_point"


def test_param_parse_labels():
    assert reps.SpectralParam.parse("trivial").kind == "trivial"
    p = reps.SpectralParam.parse("D+4")
    assert (p.kind, p.m, p.sign) == ("discrete", 4, 1)
    p = reps.SpectralParam.parse("D-2")
    assert (p.kind, p.m, p.sign) == ("discrete", 2, -1)
    assert reps.SpectralParam.parse("rho:i").s == 1j
    assert reps.SpectralParam.parse("rho:0.5").kind == "complementary"
    assert reps.SpectralParam.parse("rho").kind == "principal"
    with pytest.raises(DomainError):
        reps.SpectralParam.parse("Q+2")


def test_parse_complex_forms():
    assert reps.parse_complex("i") == 1j
    assert reps.parse_complex("2i") == 2j
    assert reps.parse_complex("0.5+2i") == 0.5 + 2j
    assert reps.parse_complex("1-1i") == 1 - 1j
    assert reps.parse_complex("-0.25") == -0.25
    with pytest.raises(DomainError):
        reps.parse_complex("zz")


def test_discrete_ambient_parameter():
    assert reps.SpectralParam.discrete(4, 1).induced_s == 3.0
    with pytest.raises(DomainError):
        _ = reps.SpectralParam.trivial().induced_s


# ---------------------------------------------------------------------------
# Fourier vectors
# ---------------------------------------------------------------------------

def test_basis_vector_layout():
    v = reps.KFourierVector.basis(4, -3)
    assert v.coeff(-3) == 1.0
    assert v.norm() == 1.0
    with pytest.raises(DomainError):
        reps.KFourierVector.basis(4, 5)


def test_smooth_vector_is_unit(rng):
    v = reps.KFourierVector.smooth_random(32, rng)
    assert abs(v.norm() - 1.0) < 1e-12


# ---------------------------------------------------------------------------
# cocycle
# ---------------------------------------------------------------------------

def test_cocycle_identity():
    t, theta_out = reps.cocycle(1.2, np.eye(3))
    assert abs(t) < 1e-15
    assert abs(theta_out - 1.2) < 1e-12


def test_cocycle_boost_at_zero_angle():
    t, theta_out = reps.cocycle(0.0, groups.make_a(0.8))
    assert abs(t - 0.8) < 1e-12
    assert abs(theta_out) < 1e-12


@given(st.floats(0, 2 * np.pi, exclude_max=True), st.floats(0, 2 * np.pi, exclude_max=True))
def test_cocycle_rotation_adds_angles(theta, alpha):
    t, theta_out = reps.cocycle(theta, groups.make_k(alpha))
    assert abs(t) < 1e-12
    gap = (theta_out - (theta + alpha)) % (2 * np.pi)
    assert min(gap, 2 * np.pi - gap) < 1e-10


def test_cocycle_matches_iwasawa():
    g = groups.make_a(0.5) @ groups.make_n(1.0) @ groups.make_k(2.0)
    theta = 0.9
    c = groups.iwasawa(groups.make_k(theta) @ g)
    t, theta_out = reps.cocycle(theta, g)
    assert abs(t - c.t) < 1e-12
    assert abs(theta_out - c.theta) < 1e-12


# ---------------------------------------------------------------------------
# the induced action
# ---------------------------------------------------------------------------

def test_act_identity_fixes_basis():
    p = reps.SpectralParam.principal(1.0)
    for n in (-3, 0, 2):
        v = reps.KFourierVector.basis(8, n)
        w = reps.act_principal(p, np.eye(3), v)
        assert_allclose(w.c, v.c, atol=1e-13)


def test_act_rotation_is_diagonal():
    p = reps.SpectralParam.principal(2.0)
    theta = 1.1
    for n in (-2, 1, 5):
        v = reps.KFourierVector.basis(8, n)
        w = reps.act_principal(p, groups.make_k(theta), v)
        assert abs(w.coeff(n) - np.exp(1j * n * theta)) < 1e-12
        off = w.c.copy()
        off[n + w.N] = 0.0
        assert np.sum(np.abs(off) ** 2) < 1e-24


def test_act_requires_induced_kind():
    v = reps.KFourierVector.basis(8, 0)
    with pytest.raises(DomainError):
        reps.act_principal(reps.SpectralParam.trivial(), np.eye(3), v)


def test_act_node_floor():
    v = reps.KFourierVector.basis(8, 0)
    with pytest.raises(DomainError):
        reps.act_principal(reps.SpectralParam.principal(1.0), np.eye(3), v, nodes=20)


def test_unitarity_for_imaginary_parameter(rng):
    v = reps.KFourierVector.smooth_random(256, rng)
    for s in (1j, 2j):
        p = reps.SpectralParam.from_s(s)
        for t in (0.7, 2.0):
            w = reps.act_principal(p, groups.make_a(t), v)
            assert abs(w.norm() - 1.0) < 1e-7


def test_unitarity_negative_controls(rng):
    v = reps.KFourierVector.smooth_random(256, rng)
    g = groups.make_a(2.0)
    # a non-unitary spectral point
    bad = reps.SpectralParam.induced_point(1 + 1j)
    assert abs(reps.act_principal(bad, g, v).norm() - 1.0) > 0.1
    # the unshifted exponent at a unitary point
    assert abs(reps.act_induced(1.0 + 1j, g, v).norm() - 1.0) > 0.1


def test_truncation_warning_on_rough_vector():
    N = 12
    ns = np.arange(-N, N + 1)
    rough = reps.KFourierVector(N, 1.0 / (1.0 + np.abs(ns)))
    with pytest.warns(TruncationWarning):
        reps.act_principal(reps.SpectralParam.principal(1.0), groups.make_a(1.5), rough)


# ---------------------------------------------------------------------------
# matrix coefficients
# ---------------------------------------------------------------------------

def test_matcoef_identity_is_kronecker():
    p = reps.SpectralParam.principal(1.0)
    for n in (-2, 0, 3):
        for m in (-2, 0, 3):
            value = reps.matcoef(p, np.eye(3), n, m)
            assert abs(value - (1.0 if n == m else 0.0)) < 1e-14


def test_matcoef_bi_equivariance_phase():
    p = reps.SpectralParam.principal(1.0)
    g = groups.make_a(0.9) @ groups.make_n(0.3)
    n = 2
    base = reps.matcoef(p, g, n, n)
    for theta, alpha in ((0.5, 1.7), (2.9, 0.2)):
        moved = reps.matcoef(p, groups.make_k(theta) @ g @ groups.make_k(alpha), n, n)
        assert abs(moved - np.exp(1j * n * (theta + alpha)) * base) < 1e-10


def test_matcoef_agrees_with_spherical_function():
    for s in (1j, 0.5):
        p = reps.SpectralParam.from_s(s)
        for t in np.linspace(0.0, 2.0, 9):
            mc = reps.matcoef(p, groups.make_a(t), 0, 0, nodes=256)
            ph = hyperbolic.phi((1 + complex(s)) / 2.0, np.exp(t) * 1j)
            assert abs(mc - ph) < 1e-7


def test_matcoef_truncation_bound_check():
    p = reps.SpectralParam.principal(1.0)
    with pytest.raises(DomainError):
        reps.matcoef(p, np.eye(3), 5, 0, N=4)


def test_rep_matrix_identity():
    p = reps.SpectralParam.principal(1.5)
    rep = reps.rep_matrix(p, np.eye(3), N=10)
    assert np.max(np.abs(rep.mat - np.eye(21))) < 1e-12


def test_rep_matrix_homomorphism_central_block():
    # truncation-aware: small elements keep the intermediate mass inside the
    # basis, and the comparison excludes a guard band of 4 modes
    rng = np.random.default_rng(77)
    p = reps.SpectralParam.principal(1.0)
    N = 16
    sl = slice(4, 2 * N + 1 - 4)
    for _ in range(5):
        t1, u1, t2, u2 = rng.uniform(-0.03, 0.03, 4)
        a1, a2 = rng.uniform(0, 2 * np.pi, 2)
        g1 = groups.make_a(t1) @ groups.make_n(u1) @ groups.make_k(a1)
        g2 = groups.make_a(t2) @ groups.make_n(u2) @ groups.make_k(a2)
        product = reps.rep_matrix(p, g1 @ g2, N).mat
        staged = reps.rep_matrix(p, g1, N).mat @ reps.rep_matrix(p, g2, N).mat
        assert np.max(np.abs((product - staged)[sl, sl])) < 1e-6


# ---------------------------------------------------------------------------
# K-types
# ---------------------------------------------------------------------------

def test_k_types_trivial():
    types = reps.k_types(reps.SpectralParam.trivial())
    assert types.contains(0)
    assert not types.contains(1)
    assert types.description == "{0}"


def test_k_types_principal_all():
    types = reps.k_types(reps.SpectralParam.principal(1.0))
    assert all(types.contains(n) for n in range(-10, 11))


def test_k_types_discrete_ladders():
    plus = reps.k_types(reps.SpectralParam.discrete(4, 1))
    assert not plus.contains(1)
    assert plus.contains(2) and plus.contains(9)
    minus = reps.k_types(reps.SpectralParam.discrete(2, -1))
    assert minus.contains(-1) and minus.contains(-7)
    assert not minus.contains(0)


def test_tau_spherical_families():
    at_zero = {f.label for f in reps.tau_spherical_set(0)}
    assert at_zero == {"trivial", "rho_s (principal and complementary)"}
    at_one = {f.label for f in reps.tau_spherical_set(1)}
    assert at_one == {"D+2", "rho_s (principal and complementary)"}
    at_minus_one = {f.label for f in reps.tau_spherical_set(-1)}
    assert at_minus_one == {"D-2", "rho_s (principal and complementary)"}
    at_minus_three = {f.label for f in reps.tau_spherical_set(-3)}
    assert {"D-2", "D-4", "D-6"} <= at_minus_three


def test_tau_spherical_consistent_with_k_types():
    for n in range(-5, 6):
        for family in reps.tau_spherical_set(n):
            if family.kind == "trivial":
                assert reps.k_types(reps.SpectralParam.trivial()).contains(n)
            elif family.kind == "discrete":
                p = reps.SpectralParam.discrete(family.m, family.sign)
                assert reps.k_types(p).contains(n)
            else:
                assert reps.k_types(reps.SpectralParam.principal(1.0)).contains(n)


# ---------------------------------------------------------------------------
# ladders
# ---------------------------------------------------------------------------

def test_ladder_leakage_identity_exact():
    # zero up to the roundoff of the discrete Fourier projection
    assert reps.discrete_ladder_leakage(2, 1, np.eye(3), 16) < 1e-20


def test_ladder_leakage_boost():
    leak = reps.discrete_ladder_leakage(2, 1, groups.make_a(1.0), 24)
    assert leak < 1e-6


def test_ladder_leakage_mirrored():
    leak = reps.discrete_ladder_leakage(2, -1, groups.make_a(1.0), 24)
    assert leak < 1e-6


def test_ladder_leakage_generic_element_and_growth():
    g = groups.make_a(0.8) @ groups.make_n(0.4) @ groups.make_k(1.1)
    leaks = [reps.discrete_ladder_leakage(2, 1, g, N) for N in (16, 24, 32)]
    assert all(leak < 1e-6 for leak in leaks)
    assert leaks[1] <= leaks[0] + 1e-9
    assert leaks[2] <= leaks[1] + 1e-9


def test_ladder_higher_weight():
    leak = reps.discrete_ladder_leakage(4, 1, groups.make_a(0.7), 24)
    assert leak < 1e-6


def test_ladder_validates_truncation():
    with pytest.raises(DomainError):
        reps.discrete_ladder_leakage(2, 1, np.eye(3), 6)
