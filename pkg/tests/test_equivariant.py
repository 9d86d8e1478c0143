import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st
from so21 import equivariant, groups, reps
from so21.errors import DomainError


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------

def test_tau_trivial_character():
    for theta in np.linspace(0, 2 * np.pi, 7):
        assert equivariant.tau(0, theta) == 1.0


def test_tau_third_roots():
    assert abs(equivariant.tau(3, 2 * np.pi / 3) - 1.0) < 1e-14


@given(st.integers(-8, 8), st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi))
def test_tau_character_law(n, t1, t2):
    product = equivariant.tau(n, t1) * equivariant.tau(n, t2)
    assert abs(product - equivariant.tau(n, t1 + t2)) < 1e-12


@given(st.integers(-8, 8), st.floats(0, 2 * np.pi))
def test_tau_periodic(n, theta):
    assert abs(equivariant.tau(n, theta + 2 * np.pi) - equivariant.tau(n, theta)) < 1e-12


# ---------------------------------------------------------------------------
# bump profiles
# ---------------------------------------------------------------------------

def test_bump_profile_support():
    profile = equivariant.BumpProfile(0.8, 0.2)
    assert profile(0.8) == pytest.approx(np.exp(-1.0))
    assert profile(0.59) == 0.0
    assert profile(1.01) == 0.0
    assert profile.support == (0.6000000000000001, 1.0)


def test_bump_profile_validation():
    with pytest.raises(DomainError):
        equivariant.BumpProfile(0.5, 0.0)
    with pytest.raises(DomainError):
        equivariant.BumpProfile(-0.1, 0.2)


# ---------------------------------------------------------------------------
# separation witness
# ---------------------------------------------------------------------------

def test_witness_separates_orbits():
    t0, delta = 0.8, 0.2
    witness = equivariant.separation_witness(1, equivariant.BumpProfile(t0, delta))
    inside = complex(witness(groups.make_a(t0)))
    outside = complex(witness(groups.make_a(t0 + 3 * delta)))
    assert inside.real == pytest.approx(np.exp(-1.0))
    assert outside == 0.0


def test_witness_vanishes_on_rotations():
    witness = equivariant.separation_witness(2, equivariant.BumpProfile(0.8, 0.2))
    for theta in np.linspace(0, 2 * np.pi, 5):
        assert complex(witness(groups.make_k(theta))) == 0.0


def test_witness_phase_law():
    rng = np.random.default_rng(19)
    witness = equivariant.separation_witness(3, equivariant.BumpProfile(0.6, 0.3))
    for _ in range(50):
        g = groups.random_elements(rng, 1, t_bound=0.8, u_bound=0.4)[0]
        t1, t2 = rng.uniform(0, 2 * np.pi, 2)
        lhs = witness(groups.make_k(t1) @ g @ groups.make_k(t2))
        rhs = np.exp(3j * (t1 + t2)) * witness(g)
        assert abs(lhs - rhs) < 1e-10


def test_witness_modulus_orbit_invariant():
    rng = np.random.default_rng(29)
    witness = equivariant.separation_witness(1, equivariant.BumpProfile(0.6, 0.3))
    gs = groups.random_elements(rng, 100, t_bound=0.8, u_bound=0.4)
    k1 = groups.make_k(rng.uniform(0, 2 * np.pi, 100))
    k2 = groups.make_k(rng.uniform(0, 2 * np.pi, 100))
    defect = np.max(np.abs(np.abs(witness(k1 @ gs @ k2)) - np.abs(witness(gs))))
    assert defect < 1e-10


def test_witness_satisfies_equivariance_contract():
    # the declared-type invariant of the wrapper, on random probes
    rng = np.random.default_rng(59)
    fn = equivariant.separation_witness(-2, equivariant.BumpProfile(0.5, 0.25))
    assert fn.n_left == fn.n_right == -2
    for _ in range(20):
        g = groups.random_elements(rng, 1, t_bound=0.7, u_bound=0.3)[0]
        t1, t2 = rng.uniform(0, 2 * np.pi, 2)
        lhs = fn(groups.make_k(t1) @ g @ groups.make_k(t2))
        rhs = np.exp(1j * (-2) * (t1 + t2)) * fn(g)
        assert abs(lhs - rhs) < 1e-8


# ---------------------------------------------------------------------------
# bi-equivariant projection
# ---------------------------------------------------------------------------

def test_projection_fixes_equivariant_functions():
    witness = equivariant.separation_witness(2, equivariant.BumpProfile(0.7, 0.3))
    projected = equivariant.project_biequivariant(witness, 2, nodes=64)
    probes = groups.make_a(np.array([0.5, 0.7, 0.9]))
    assert np.max(np.abs(projected(probes) - witness(probes))) < 1e-9


def test_projection_annihilates_other_types():
    witness = equivariant.separation_witness(4, equivariant.BumpProfile(0.7, 0.3))
    killed = equivariant.project_biequivariant(witness, 1, nodes=64)
    probes = groups.make_a(np.array([0.6, 0.8]))
    assert np.max(np.abs(killed(probes))) < 1e-9


def test_projection_idempotent_on_generic_function():
    def generic(gs):
        gs = np.asarray(gs, dtype=float)
        r = np.arcsinh(np.hypot(gs[..., 0, 2], gs[..., 1, 2]))
        return equivariant.bump((r - 0.7) / 0.5) * (0.4 + 0.3 * gs[..., 0, 0])

    once = equivariant.project_biequivariant(generic, 2, nodes=64)
    twice = equivariant.project_biequivariant(once, 2, nodes=64)
    probes = groups.make_a(np.array([0.5, 0.9]))
    assert np.max(np.abs(twice(probes) - once(probes))) < 1e-9


def test_projection_matches_refined_quadrature():
    # refinement oracle: the same double average recomputed in-line at
    # twice the resolution
    def generic(gs):
        gs = np.asarray(gs, dtype=float)
        r = np.arcsinh(np.hypot(gs[..., 0, 2], gs[..., 1, 2]))
        return equivariant.bump((r - 0.7) / 0.5) * (0.4 + 0.3 * gs[..., 0, 0])

    n = 1
    g = groups.make_a(0.8)
    projected = equivariant.project_biequivariant(generic, n, nodes=64)

    m = 128
    thetas = 2 * np.pi * np.arange(m) / m
    k1 = groups.make_k(thetas)
    k2 = groups.make_k(thetas)
    sandwich = k1[:, None] @ g @ k2[None, :]
    phase = np.exp(-1j * n * (thetas[:, None] + thetas[None, :]))
    oracle = np.mean(phase * generic(sandwich))
    assert abs(complex(projected(g)) - oracle) < 1e-8


def test_projection_node_floor():
    with pytest.raises(DomainError):
        equivariant.project_biequivariant(lambda gs: 1.0, 0, nodes=32)


def test_type_grid_annihilation():
    # pure types m != n are killed across a small grid of pairs
    probes = groups.make_a(np.array([0.7]))
    witnesses = {m: equivariant.separation_witness(m, equivariant.BumpProfile(0.7, 0.25))
                 for m in (-6, -2, 0, 3, 6)}
    for n in (-6, -2, 0, 3, 6):
        for m, witness in witnesses.items():
            value = equivariant.project_biequivariant(witness, n, nodes=64)(probes)
            target = witness(probes) if m == n else 0.0
            assert np.max(np.abs(value - target)) < 1e-9


# ---------------------------------------------------------------------------
# right isotype projection
# ---------------------------------------------------------------------------

def test_right_projection_fixes_equivariant():
    witness = equivariant.separation_witness(2, equivariant.BumpProfile(0.7, 0.3))
    h = equivariant.right_isotype_project(witness, 2, nodes=64)
    probes = groups.make_a(np.array([0.6, 0.8]))
    assert np.max(np.abs(h(probes) - witness(probes))) < 1e-9


def test_right_projection_output_is_equivariant():
    def generic(gs):
        gs = np.asarray(gs, dtype=float)
        r = np.arcsinh(np.hypot(gs[..., 0, 2], gs[..., 1, 2]))
        return np.exp(-r * r) * (1.0 + 0.5 * gs[..., 1, 1])

    h = equivariant.right_isotype_project(generic, 3, nodes=128)
    x = groups.make_a(0.5)
    base = complex(h(x))
    for theta in (0.4, 1.9):
        moved = complex(h(x @ groups.make_k(theta)))
        assert abs(moved - np.exp(3j * theta) * base) < 1e-8


def test_right_projection_picks_fourier_mode():
    # oracle: a matrix-coefficient column x -> <rho(x) e_m, e_j> has right
    # Fourier mode exactly m, since rho(x k_theta) e_m = e^{i m theta} rho(x) e_m
    p = reps.SpectralParam.principal(1.0)
    m, j = 2, -1

    def column(xs):
        xs = np.asarray(xs, dtype=float)
        single = xs.ndim == 2
        batch = xs[None] if single else xs
        out = np.array([reps.matcoef(p, x, m, j) for x in batch])
        return out[0] if single else out

    x = groups.make_a(0.6) @ groups.make_n(0.2)
    kept = equivariant.right_isotype_project(column, m, nodes=96)
    assert abs(complex(kept(x)) - column(x)) < 1e-8
    killed = equivariant.right_isotype_project(column, m + 1, nodes=96)
    assert abs(complex(killed(x))) < 1e-8


def test_right_projection_kills_constants_for_nonzero_type():
    h = equivariant.right_isotype_project(lambda gs: np.ones(np.asarray(gs).shape[:-2]), 2, nodes=64)
    assert abs(complex(h(groups.make_a(0.3)))) < 1e-12


# ---------------------------------------------------------------------------
# Gram certificate
# ---------------------------------------------------------------------------

def test_gram_single_parameter_is_norm():
    res = equivariant.gram_min_eig([reps.SpectralParam.principal(1.0)], 0)
    assert res.min_eig > 0.0
    assert res.cond == pytest.approx(1.0)


def test_gram_independence_regression():
    params = [reps.SpectralParam.from_s(s) for s in (1j, 2j, 0.5)]
    res = equivariant.gram_min_eig(params, 0, region=(0.0, 2.0))
    # frozen regression value: 1.669e-4 at the default quadrature
    assert res.min_eig > 1e-4
    assert res.min_eig == pytest.approx(1.6692e-4, rel=1e-2)


def test_gram_duplicate_is_singular():
    params = [reps.SpectralParam.from_s(s) for s in (1j, 2j, 0.5, 1j)]
    res = equivariant.gram_min_eig(params, 0)
    assert abs(res.min_eig) < 1e-10


def test_gram_monotone_in_region():
    params = [reps.SpectralParam.from_s(s) for s in (1j, 0.5)]
    eigs = [equivariant.gram_min_eig(params, 0, region=(0.0, tmax)).min_eig
            for tmax in (1.0, 1.5, 2.0)]
    assert eigs[1] >= eigs[0] - 1e-8
    assert eigs[2] >= eigs[1] - 1e-8


def test_gram_requires_spherical_type():
    with pytest.raises(DomainError):
        equivariant.gram_min_eig([reps.SpectralParam.discrete(4, 1)], 0)


def test_gram_nonzero_isotype():
    params = [reps.SpectralParam.from_s(s) for s in (1j, 0.5)]
    res = equivariant.gram_min_eig(params, 2, region=(0.0, 2.0))
    assert res.min_eig > 0.0
