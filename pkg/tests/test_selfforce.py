import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zitterdyn.models.state import KinematicState
from zitterdyn.physics.selfforce import (
    effective_inertia, electromagnetic_mass, emission_residual, eom_residual, lw_field,
    present_time_acceleration, self_force, transverse_force_balance,
)
from zitterdyn.utils.errors import ModelViolationError


class TestField:
    def test_rest_coulomb_field(self, params):
        field = lw_field(0.0, 1.0, 0.0, 0.0, params)
        assert field.E_x == pytest.approx(0.0, abs=1e-15)
        assert field.E_y == pytest.approx(-2.0)

    def test_lower_emitter_mirrors(self, params):
        upper = lw_field(0.3, math.hypot(0.3, 1.0), 0.2, 0.1, params, emitter="upper")
        lower = lw_field(0.3, math.hypot(0.3, 1.0), 0.2, 0.1, params, emitter="lower")
        assert lower.E_x == pytest.approx(upper.E_x)
        assert lower.E_y == pytest.approx(-upper.E_y)

    @pytest.mark.parametrize("a", [-1.0, 0.25, 1.0])
    def test_radiation_field_at_rest(self, params, a):
        field = lw_field(0.0, 1.0, 0.0, a, params)
        assert field.E_x == pytest.approx(2.0 * a)
        assert field.radiation_part[0] == pytest.approx(2.0 * a)
        assert field.velocity_part[0] == pytest.approx(0.0, abs=1e-15)

    def test_rejects_short_separation(self, params):
        with pytest.raises(ModelViolationError):
            lw_field(0.0, 0.5, 0.0, 0.0, params)

    def test_rejects_luminal_emitter(self, params):
        with pytest.raises(ModelViolationError):
            lw_field(1.0, math.sqrt(2.0), 1.0, 0.0, params)


class TestSelfForce:
    def test_rest_force_opposes_acceleration(self, params):
        assert self_force(0.0, 1.0, 0.0, 0.5, params) == pytest.approx(-1.0)

    def test_uniform_motion_is_force_free(self, params):
        beta = 0.6
        gamma = 1.25
        assert self_force(gamma * beta, gamma, beta, 0.0, params) == pytest.approx(0.0, abs=1e-14)

    def test_vectorized(self, params):
        l = np.zeros(3)
        force = self_force(l, np.ones(3), np.zeros(3), np.array([0.0, 1.0, 2.0]), params)
        assert np.allclose(force, [0.0, -2.0, -4.0])

    def test_rejects_superluminal_geometry(self, params):
        with pytest.raises(ModelViolationError):
            self_force(2.0, 1.0, 0.9, 0.0, params)


@settings(max_examples=300, deadline=None)
@given(l=st.floats(min_value=-5.0, max_value=5.0),
       beta=st.floats(min_value=-0.99, max_value=0.99),
       a=st.floats(min_value=-2.0, max_value=2.0))
def test_force_is_charge_times_field(params, l, beta, a):
    r = math.hypot(l, params.d)
    field = lw_field(l, r, beta, a, params)
    force = self_force(l, r, beta, a, params)
    scale = 2.0 * (abs(l - r * beta) * (1.0 - beta ** 2) + abs(a)) / (r - l * beta) ** 3
    assert abs(force + params.e_charge * field.E_x) <= 1e-12 * max(scale, 1e-300)


def test_transverse_forces_cancel(params):
    assert transverse_force_balance(0.7, math.hypot(0.7, 1.0), 0.4, 0.3, params) == pytest.approx(0.0, abs=1e-14)


class TestEquationOfMotion:
    def test_uniform_motion_is_on_shell(self, params):
        beta, gamma = 0.6, 1.25
        state = KinematicState.from_kinematics(0.0, 0.0, beta, 0.0, params)
        assert eom_residual(state, beta * gamma, gamma, params) == pytest.approx(0.0, abs=1e-15)

    def test_residual_is_force_over_scale(self, params):
        # at rest with acceleration a the residual is a d^2 / c^2
        state = KinematicState.from_kinematics(0.0, 0.0, 0.0, 0.3, params)
        assert eom_residual(state, 0.0, 1.0, params) == pytest.approx(0.3)

    def test_emission_residual_vectorized(self, params):
        res = emission_residual(np.zeros(4), np.zeros(4), np.arange(4.0), np.zeros(4), np.ones(4), params)
        assert np.allclose(res, np.arange(4.0))

    def test_effective_inertia(self, params):
        assert effective_inertia(params) == pytest.approx(1.0, rel=1e-9)

    def test_present_time_form_uniform(self, params):
        beta, gamma = 0.3, 1.0 / math.sqrt(1.0 - 0.09)
        acc = present_time_acceleration(beta, 0.0, beta * gamma, gamma, params)
        assert acc == pytest.approx(0.0, abs=1e-15)

    def test_present_time_form_at_rest(self, params):
        # ahead of the advanced position, the particle is pulled forward
        assert present_time_acceleration(0.0, 0.0, 0.1, 1.0, params) == pytest.approx(0.1)


def test_electromagnetic_mass(params, si_params):
    assert electromagnetic_mass(params) == 1.0
    assert electromagnetic_mass(si_params) == pytest.approx(si_params.m_e, rel=1e-8)
