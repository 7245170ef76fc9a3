import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contractive import (
    FockVector,
    InvalidParameterError,
    OutOfRangeError,
    SeedConditionError,
    SqueezeParams,
    TruncationError,
    build_operators,
    default_grid,
    displace,
    displacement_operator,
    expect,
    expect_hermitian,
    extremal_fock,
    extremal_state,
    hermite_basis,
    make_scs,
    make_sgcs,
    number_state,
    project_to_fock,
    random_state,
    squeeze,
    squeeze_operator,
    wavefunction,
)

from conftest import coherent_amps, squeezed_vacuum_amps


def test_squeeze_params_validation():
    with pytest.raises(OutOfRangeError):
        SqueezeParams(r=-0.1)
    with pytest.raises(InvalidParameterError):
        SqueezeParams(r=float("nan"))


@given(r=st.floats(0.0, 2.0), theta=st.floats(-7.0, 7.0))
@settings(max_examples=60, deadline=None)
def test_bogoliubov_normalization(r, theta):
    # mu^2 - |nu|^2 = 1 for any squeeze parameters.
    params = SqueezeParams(r=r, theta=theta)
    assert abs(params.mu**2 - abs(params.nu) ** 2 - 1.0) < 1e-10


def test_displacement_zero_is_identity():
    op = displacement_operator(0.0, 24)
    assert np.allclose(op, np.eye(24), atol=1e-14)


def test_displaced_vacuum_matches_recursion():
    alpha = 1.1 - 0.4j
    got = displace(number_state(0, 64), alpha)
    want = coherent_amps(alpha, 64)
    assert np.max(np.abs(got.amps - want)) < 1e-12


def test_displacement_unitary_on_states():
    state = number_state(2, 96)
    moved = displace(state, 0.7 + 0.2j)
    assert abs(moved.norm() - 1.0) < 1e-12
    back = displace(moved, -(0.7 + 0.2j))
    assert np.max(np.abs(back.amps - state.amps)) < 1e-10


def test_displaced_number_state_mean():
    alpha = 0.9 + 0.5j
    state = displace(number_state(2, 128), alpha)
    ops = build_operators(128)
    assert abs(expect(state, ops.a) - alpha) < 1e-10


def test_squeezed_vacuum_matches_recursion():
    for theta in (0.0, 1.3):
        params = SqueezeParams(r=0.6, theta=theta)
        got = squeeze(number_state(0, 64), params)
        want = squeezed_vacuum_amps(0.6, theta, 64)
        assert np.max(np.abs(got.amps - want)) < 1e-8
        # odd rungs stay empty
        assert np.max(np.abs(got.amps[1::2])) < 1e-12


def test_squeeze_zero_r_is_identity():
    state = random_state(32, np.random.default_rng(1))
    out = squeeze(state, SqueezeParams(r=0.0, theta=2.0))
    assert np.max(np.abs(out.amps - state.amps)) < 1e-14


def test_squeezed_vacuum_variance():
    r = 0.45
    state = squeeze(number_state(0, 64), SqueezeParams(r=r, theta=0.0))
    ops = build_operators(64)
    var_x = expect_hermitian(state, ops.x @ ops.x)
    assert abs(var_x - 0.5 * math.exp(-2 * r)) < 1e-12


def test_displace_raises_on_unresolved_output():
    with pytest.raises(TruncationError):
        displace(number_state(0, 16), 3.0)


def test_make_scs_auto_dim_resolved():
    state = make_scs(1.5 + 0.5j, SqueezeParams(r=0.8, theta=2.0))
    assert state.tail_mass() < 1e-8
    assert abs(state.norm() - 1.0) < 1e-12


def test_scs_is_bogoliubov_eigenvector():
    # b = mu a + nu a^dag annihilates the displaced-squeezed vacuum up to
    # beta = mu alpha + nu conj(alpha).
    alpha = 0.8 - 0.6j
    params = SqueezeParams(r=0.7, theta=1.1)
    state = make_scs(alpha, params, dim=128)
    ops = build_operators(128)
    b = params.mu * ops.a + params.nu * ops.adag
    beta = params.mu * alpha + params.nu * np.conj(alpha)
    resid = (b - beta * np.eye(128)) @ state.amps
    # the top squeeze-spread rows are truncation noise; check the body
    body = int(128 / (2 * math.exp(2 * params.r)))
    assert np.linalg.norm(resid[:body]) < 1e-8


def test_make_sgcs_vacuum_seed_equals_scs():
    alpha = 0.4 + 0.3j
    params = SqueezeParams(r=0.5, theta=0.9)
    a = make_scs(alpha, params, dim=128)
    b = make_sgcs(alpha, params, number_state(0, 128), dim=128)
    assert np.max(np.abs(a.amps - b.amps)) < 1e-12


def test_make_sgcs_rejects_coherent_seed():
    seed = FockVector(coherent_amps(0.5, 64))
    with pytest.raises(SeedConditionError):
        make_sgcs(0.0, SqueezeParams(r=0.2), seed, dim=128)


def test_sgcs_centered_bogoliubov_moments():
    # For a seed with <a> = <a^2> = 0 the transformed mode keeps
    # <b - beta> = 0 and <(b - beta)^2> = 0.
    phi = number_state(3, 128)
    alpha = 0.6 + 0.2j
    params = SqueezeParams(r=0.4, theta=2.5)
    state = make_sgcs(alpha, params, phi, dim=192)
    ops = build_operators(192)
    b = params.mu * ops.a + params.nu * ops.adag
    beta = params.mu * alpha + params.nu * np.conj(alpha)
    shifted = b - beta * np.eye(192)
    assert abs(expect(state, shifted)) < 1e-8
    assert abs(expect(state, shifted @ shifted)) < 1e-8


def test_vacuum_wavefunction_gaussian():
    grid = default_grid()
    psi = wavefunction(number_state(0, 32), grid)
    want = np.pi ** (-0.25) * np.exp(-0.5 * grid**2)
    assert np.max(np.abs(psi - want)) < 1e-12
    norm = np.trapezoid(np.abs(psi) ** 2, grid)
    assert abs(norm - 1.0) < 1e-9


def test_hermite_basis_orthonormal():
    grid = default_grid()
    basis = hermite_basis(32, grid)
    gram = np.trapezoid(basis[:, None, :] * basis[None, :, :], grid, axis=-1)
    assert np.max(np.abs(gram - np.eye(32))) < 1e-9


def test_squeezed_number_wavefunction_closed_form():
    # theta = 0: <x|S(r)|n> = H_n(x/s) exp(-lam x^2 / 2) / sqrt(s h_n),
    # s = mu - nu, lam = (mu + nu)/(mu - nu), h_n = sqrt(pi) 2^n n!.
    r, n = 0.3, 2
    params = SqueezeParams(r=r, theta=0.0)
    state = squeeze(number_state(n, 64), params)
    grid = default_grid()
    psi = wavefunction(state, grid)

    s = math.exp(-r)  # mu - nu at theta = 0
    lam = (params.mu + params.nu.real) / s
    h_n = math.sqrt(math.pi) * 2**n * math.factorial(n)
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    herm = np.polynomial.hermite.hermval(grid / s, coeffs)
    want = herm * np.exp(-0.5 * lam * grid**2) / math.sqrt(s * h_n)
    assert np.max(np.abs(psi - want)) < 1e-8


def test_displaced_wavefunction_phase_identity():
    # <x|D(a)psi> = psi(x - sqrt(2) a1) exp(i sqrt(2) a2 (x - a1/sqrt(2)))
    # with a = a1 + i a2.
    a1, a2 = 0.7, -0.4
    alpha = complex(a1, a2)
    base = number_state(1, 96)
    moved = displace(base, alpha)
    grid = default_grid()
    psi_moved = wavefunction(moved, grid)
    psi_base = wavefunction(base, grid - math.sqrt(2.0) * a1)
    phase = np.exp(1j * math.sqrt(2.0) * a2 * (grid - a1 / math.sqrt(2.0)))
    assert np.max(np.abs(psi_moved - psi_base * phase)) < 1e-8


def test_project_round_trip(rng):
    state = random_state(32, rng)
    grid = default_grid()
    values = wavefunction(state, grid)
    back = project_to_fock(values, grid, 32)
    assert np.max(np.abs(back.amps - state.amps)) < 1e-9


def test_extremal_state_requires_contracting_real_part():
    grid = default_grid()
    with pytest.raises(InvalidParameterError):
        extremal_state(-1.0 + 0.5j, grid=grid)
    with pytest.raises(InvalidParameterError):
        extremal_state(0.0 + 1.0j, grid=grid)


def test_extremal_lambda_one_is_vacuum():
    state = extremal_fock(1.0 + 0.0j, dim=48)
    want = number_state(0, 48)
    overlap = abs(np.vdot(state.amps, want.amps))
    assert abs(overlap - 1.0) < 1e-10


def test_extremal_moments_and_means():
    lam = 1.0 + 1.0j
    state = extremal_fock(lam, mean_x=0.5, mean_p=-0.3, dim=64)
    ops = build_operators(64)
    assert abs(expect_hermitian(state, ops.x) - 0.5) < 1e-9
    assert abs(expect_hermitian(state, ops.p) - (-0.3)) < 1e-9
    mx = expect_hermitian(state, ops.x)
    mp = expect_hermitian(state, ops.p)
    var_x = expect_hermitian(state, ops.x @ ops.x) - mx**2
    var_p = expect_hermitian(state, ops.p @ ops.p) - mp**2
    cov = expect_hermitian(state, ops.x @ ops.p + ops.p @ ops.x) - 2 * mx * mp
    # lam = 1 + i gives var_x = 1/2, var_p = |lam|^2/2 = 1, cov = -1
    assert abs(var_x - 0.5) < 1e-9
    assert abs(var_p - 1.0) < 1e-9
    assert abs(cov - (-1.0)) < 1e-9


def test_extremal_eigen_condition():
    # (p - i lam x) annihilates the centered extremal state.
    lam = 1.3 + 0.8j
    state = extremal_fock(lam, dim=64)
    ops = build_operators(64)
    resid = (ops.p - 1j * lam * ops.x) @ state.amps
    assert np.linalg.norm(resid[:48]) / abs(lam) < 1e-8
