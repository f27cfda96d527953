import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zitterdyn.models import constants
from zitterdyn.models.params import (
    UNIT_SCALES, characteristic_period, electron_separation, lorentz_gamma, make_params,
    to_dimensionless, to_physical,
)
from zitterdyn.models.state import KinematicState, TrajectoryHistory
from zitterdyn.utils.errors import ConfigError, ModelViolationError


class TestMakeParams:
    def test_dimensionless_normalization(self, params):
        assert (params.d, params.c, params.m_e, params.tau0, params.omega0) == (1.0, 1.0, 1.0, 1.0, 1.0)
        assert params.eps0 is None
        assert params.force_prefactor == 2.0

    def test_si_electron_mass(self, si_params):
        assert si_params.d == pytest.approx(7.045e-16, rel=1e-3)
        assert si_params.m_e == pytest.approx(constants.ELECTRON_MASS, rel=1e-6)

    def test_si_electron_radius(self, si_params):
        assert si_params.d / 2.0 * 1e15 == pytest.approx(0.352, rel=0.02)

    def test_si_rest_energy_identity(self, si_params):
        expected = constants.HBAR * constants.ALPHA * si_params.c / (4.0 * si_params.d)
        assert si_params.rest_energy == pytest.approx(expected, rel=1e-15)
        assert si_params.d * si_params.m_e * si_params.c == pytest.approx(
            constants.HBAR * constants.ALPHA / 4.0, rel=1e-15)

    def test_force_prefactor_matches_coulomb_constant(self, si_params):
        coulomb = constants.ELEMENTARY_CHARGE ** 2 / (8.0 * math.pi * constants.EPSILON_0)
        assert si_params.force_prefactor == pytest.approx(coulomb, rel=1e-8)

    @pytest.mark.parametrize("d", [0.0, -1.0, float("nan"), float("inf")])
    def test_rejects_bad_separation(self, d):
        with pytest.raises(ModelViolationError):
            make_params(d=d, unit_mode=constants.SI)

    def test_dimensionless_requires_unit_separation(self):
        with pytest.raises(ModelViolationError):
            make_params(d=2.0)

    def test_rejects_unknown_unit_mode(self):
        with pytest.raises(ModelViolationError):
            make_params(unit_mode="cgs")

    def test_separation_inverts_mass_formula(self):
        d = electron_separation()
        assert make_params(d=d, unit_mode=constants.SI).m_e == pytest.approx(constants.ELECTRON_MASS, rel=1e-12)


class TestLorentzGamma:
    @pytest.mark.parametrize("beta, gamma", [(0.0, 1.0), (0.6, 1.25), (0.99, 7.0888)])
    def test_values(self, beta, gamma):
        assert lorentz_gamma(beta) == pytest.approx(gamma, rel=1e-4)

    @pytest.mark.parametrize("beta", [1.0, -1.0, 1.5])
    def test_rejects_luminal(self, beta):
        with pytest.raises(ModelViolationError):
            lorentz_gamma(beta)

    def test_vectorized_and_monotone(self):
        betas = np.linspace(0.0, 0.99, 100)
        gammas = lorentz_gamma(betas)
        assert gammas.shape == betas.shape
        assert np.all(np.diff(gammas) > 0)


class TestCharacteristicPeriod:
    def test_classical_radius(self):
        assert characteristic_period(2.8179e-15, constants.SPEED_OF_LIGHT) == pytest.approx(1.181e-22, rel=1e-3)

    def test_unit_period(self):
        c = constants.SPEED_OF_LIGHT
        assert characteristic_period(c / (4.0 * math.pi), c) == pytest.approx(1.0)

    def test_half_separation_radius(self):
        assert characteristic_period(0.352e-15, constants.SPEED_OF_LIGHT) == pytest.approx(1.476e-23, rel=1e-3)

    def test_rejects_non_positive_radius(self):
        with pytest.raises(ModelViolationError):
            characteristic_period(0.0, 1.0)


@settings(max_examples=60, deadline=None)
@given(value=st.one_of(st.just(0.0), st.floats(min_value=1e-200, max_value=1e3),
                       st.floats(min_value=-1e3, max_value=-1e-200)),
       kind=st.sampled_from(sorted(UNIT_SCALES)))
def test_unit_round_trip(si_params, value, kind):
    back = to_physical(to_dimensionless(value, kind, si_params), kind, si_params)
    assert back == pytest.approx(value, rel=1e-14, abs=1e-300)


def test_unknown_kind(si_params):
    with pytest.raises(ModelViolationError):
        to_dimensionless(1.0, "charge", si_params)


class TestKinematics:
    def test_derived_fields(self, si_params):
        state = KinematicState.from_kinematics(0.0, 0.0, 0.5 * si_params.c, 1e20, si_params)
        assert state.beta == pytest.approx(0.5)
        assert state.bdot == pytest.approx(1e20 * si_params.d / si_params.c ** 2)

    def test_superluminal_state(self, params):
        with pytest.raises(ModelViolationError):
            KinematicState.from_kinematics(0.0, 0.0, 1.0, 0.0, params)

    def test_history_interpolates_nodes(self):
        t = np.linspace(0.0, 1.0, 11)
        hist = TrajectoryHistory(t, 0.1 * t ** 2, 0.2 * t, np.full_like(t, 0.2))
        assert np.allclose(hist.x_at(t), hist.x, atol=1e-15)
        assert float(hist.x_at(0.55)) == pytest.approx(0.1 * 0.55 ** 2, abs=1e-12)
        assert float(hist.a_at(0.55)) == pytest.approx(0.2, abs=1e-12)

    def test_history_rejects_unordered_times(self):
        with pytest.raises(ModelViolationError):
            TrajectoryHistory([0.0, 0.0, 1.0], [0, 0, 0], [0, 0, 0], [0, 0, 0])

    def test_history_rejects_luminal_samples(self):
        with pytest.raises(ModelViolationError):
            TrajectoryHistory([0.0, 1.0], [0.0, 1.0], [1.0, 1.0], [0.0, 0.0])

    def test_history_from_csv(self, tmp_path):
        path = tmp_path / "seed.csv"
        path.write_text("t,x,v,a,beta\n0,0,0.5,0,0.5\n1,0.5,0.5,0,0.5\n2,1,0.5,0,0.5\n")
        hist = TrajectoryHistory.from_csv(path)
        assert hist.t_max == 2.0
        assert float(hist.x_at(1.5)) == pytest.approx(0.75, abs=1e-12)

    def test_history_from_csv_missing_column(self, tmp_path):
        path = tmp_path / "seed.csv"
        path.write_text("t,x,v\n0,0,0\n1,0,0\n")
        with pytest.raises(ConfigError):
            TrajectoryHistory.from_csv(path)
        with pytest.raises(ConfigError):
            TrajectoryHistory.from_csv(tmp_path / "absent.csv")
