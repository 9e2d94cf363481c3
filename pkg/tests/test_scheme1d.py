import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lwquarter.core import CflError, Field1D, SupportError
from lwquarter.scheme1d import (
    boundary_form_1d,
    dissipation_1d,
    energy_balance_residual_1d,
    energy_modified_1d,
    energy_standard_1d,
    run_1d,
    step_1d,
)
from oracles import lw1d_loop

ALPHAS = [-0.1 * i for i in range(1, 10)]


def compact_state(rng, n=32, support=24):
    vals = np.zeros(n)
    vals[:support] = rng.standard_normal(support)
    return Field1D.from_interior(vals)


def test_constant_and_zero():
    c = Field1D.from_interior(np.full(10, 2.5))
    assert np.all(step_1d(c, -0.4).data == 2.5)
    z = Field1D.from_interior(np.zeros(10))
    assert np.all(step_1d(z, -0.4).data == 0.0)


def test_spike():
    vals = np.zeros(12)
    vals[5] = 1.0
    out = step_1d(Field1D.from_interior(vals), -0.5)
    assert out.interior[4:7] == pytest.approx([0.375, 0.75, -0.125], abs=1e-15)


def test_matches_loop(rng):
    s = Field1D.from_interior(rng.standard_normal(20))
    assert np.allclose(step_1d(s, -0.37).interior, lw1d_loop(s.data, -0.37), rtol=0, atol=1e-14)


@pytest.mark.parametrize("alpha", [0.0, 1.0, -1.0, -1.5])
def test_cfl_rejected(alpha):
    with pytest.raises(CflError):
        step_1d(Field1D.from_interior(np.zeros(5)), alpha)


def test_energies():
    u = Field1D.from_interior([1.0, 0.0, 0.0, 0.0])
    assert energy_standard_1d(u) == 1.0
    assert energy_modified_1d(u) == 0.5
    z = Field1D.from_interior(np.zeros(4))
    assert energy_standard_1d(z) == energy_modified_1d(z) == 0.0


def test_modified_is_standard_minus_half_u0_sq(rng):
    u = Field1D.from_interior(rng.standard_normal(32))
    assert energy_modified_1d(u) == pytest.approx(energy_standard_1d(u) - 0.5 * u.value(0) ** 2, rel=1e-14)


def test_boundary_coefficients_at_half():
    # in the coordinates (u0, u0 - alpha (u1 - u0)) the diagonal is (c0, c1)
    alpha = -0.5
    g = np.array([1.0 + alpha, -alpha])
    basis = np.linalg.inv(np.array([[1.0, 0.0], g]))
    for modified, expect in ((False, (-0.75, 0.25)), (True, (-0.25, -0.25))):
        _, m = boundary_form_1d(Field1D.from_interior(np.zeros(4)), alpha, modified)
        diag = basis.T @ m @ basis
        assert np.allclose(diag, np.diag(expect), atol=1e-15)


def test_boundary_zero_state():
    z = Field1D.from_interior(np.zeros(4))
    for modified in (False, True):
        assert boundary_form_1d(z, -0.3, modified)[0] == 0.0


def test_boundary_needs_outflow():
    with pytest.raises(CflError, match="outflow"):
        boundary_form_1d(Field1D.from_interior(np.zeros(4)), 0.3, True)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_boundary_matrix_signs(alpha):
    z = Field1D.from_interior(np.zeros(4))
    _, std = boundary_form_1d(z, alpha, False)
    _, mod = boundary_form_1d(z, alpha, True)
    # 2x2 eigenvalue signs through trace and determinant
    assert np.linalg.det(std) < 0
    assert np.trace(mod) < 0 and np.linalg.det(mod) > 0


@given(st.floats(-0.99, -0.01), st.floats(-5, 5), st.floats(-5, 5))
def test_boundary_value_matches_matrix(alpha, u0, u1):
    s = Field1D.from_interior([u0, u1, 0.0, 0.0])
    for modified in (False, True):
        val, m = boundary_form_1d(s, alpha, modified)
        vec = np.array([u0, u1])
        assert val == pytest.approx(vec @ m @ vec, rel=1e-12, abs=1e-12)


def test_residual_zero_state():
    z = Field1D.from_interior(np.zeros(10))
    assert energy_balance_residual_1d(z, -0.5, False) == 0.0


def test_residual_ramp():
    vals = np.zeros(20)
    vals[:8] = np.arange(1.0, 9.0)
    s = Field1D.from_interior(vals)
    for modified in (False, True):
        r = energy_balance_residual_1d(s, -0.3, modified)
        assert abs(r) <= 1e-13 * energy_standard_1d(s)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_residual_random(rng, alpha):
    worst = 0.0
    for _ in range(100):
        s = compact_state(rng)
        for modified in (False, True):
            e = energy_modified_1d(s) if modified else energy_standard_1d(s)
            worst = max(worst, abs(energy_balance_residual_1d(s, alpha, modified)) / e)
    assert worst <= 1e-12


def test_residual_refuses_far_support(rng):
    s = Field1D.from_interior(rng.standard_normal(16))
    with pytest.raises(SupportError):
        energy_balance_residual_1d(s, -0.3, True)


def test_dissipation_sign():
    for a in ALPHAS:
        assert a * a * (1 - a * a) / 4 > 0
    s = Field1D.from_interior(np.r_[0.0, 1.0, 0.0, 0.0])
    assert dissipation_1d(s, -0.5, True) < 0


@given(st.floats(-0.99, -0.01), st.integers(0, 2**32 - 1))
def test_modified_energy_non_increasing(alpha, seed):
    s = compact_state(np.random.default_rng(seed), n=24, support=16)
    new = step_1d(s, alpha)
    assert energy_modified_1d(new) <= energy_modified_1d(s) * (1 + 1e-14)


def test_standard_energy_can_grow():
    # steep ramp out of u0 = 0, slow decay: the positive boundary term
    # alpha^2 (1 + alpha)/2 (u1 - u0)^2 beats the interior dissipation
    s = Field1D.from_interior(np.r_[np.arange(11.0), np.arange(9.9, -0.05, -0.1), np.zeros(20)])
    assert energy_standard_1d(step_1d(s, -0.5)) > energy_standard_1d(s)


def test_run_generator():
    s = Field1D.from_interior(np.r_[np.ones(4), np.zeros(8)])
    states = list(run_1d(s, -0.5, 3))
    assert len(states) == 3
    assert np.array_equal(states[0].data, step_1d(s, -0.5).data)
