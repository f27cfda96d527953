import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zitterdyn.models.params import make_params
from zitterdyn.solvers.spectrum import (
    DEFAULT_BOX, RootSet, SearchBox, char_fn, char_fn_derivative, count_roots,
    eigenfrequencies, exceptional_root, find_roots,
)
from zitterdyn.utils.errors import ContourError, ModelViolationError


class TestCharFn:
    def test_origin_is_always_a_root(self):
        for beta in (0.0, 0.3, 0.9):
            assert char_fn(0.0, beta) == 0.0

    def test_quadratic_factor_in_the_luminal_limit(self):
        assert char_fn(-1.0, 1.0) == 0.0

    def test_value(self):
        assert char_fn(1.0, 0.0) == pytest.approx(3.0 - math.e)
        assert char_fn(1.0, 0.0) == pytest.approx(0.28172, abs=1e-5)

    def test_derivative_matches_difference_quotient(self):
        z, h = 1.3 + 2.1j, 1e-6
        numeric = (char_fn(z + h, 0.4) - char_fn(z - h, 0.4)) / (2.0 * h)
        assert char_fn_derivative(z, 0.4) == pytest.approx(numeric, rel=1e-8)

    def test_vectorized(self):
        z = np.linspace(-1.0, 1.0, 5) + 1j
        assert char_fn(z, 0.2).shape == (5,)


@settings(max_examples=100, deadline=None)
@given(re=st.floats(min_value=-5.0, max_value=5.0), im=st.floats(min_value=-30.0, max_value=30.0),
       beta=st.floats(min_value=0.0, max_value=0.99))
def test_conjugate_symmetry(re, im, beta):
    z = complex(re, im)
    value = char_fn(z, beta)
    assert abs(char_fn(z.conjugate(), beta) - value.conjugate()) <= 1e-14 * max(1.0, abs(value))


class TestSearchBox:
    def test_parse(self):
        assert SearchBox.parse("0,12,-60,60") == DEFAULT_BOX
        assert DEFAULT_BOX.is_symmetric

    @pytest.mark.parametrize("text", ["0,12,-60", "a,b,c,d", "1,1,0,1", "0,60,-1,1"])
    def test_rejects_bad_boxes(self, text):
        with pytest.raises(ModelViolationError):
            SearchBox.parse(text)

    def test_corners_counter_clockwise(self):
        corners = SearchBox(0.0, 1.0, 0.0, 1.0).corners()
        area = sum((a.conjugate() * b).imag for a, b in zip(corners, corners[1:] + corners[:1]))
        assert area > 0


class TestCountRoots:
    def test_double_root_at_origin(self):
        assert count_roots(0.0, SearchBox(-0.5, 0.5, -0.5, 0.5)) == 2

    def test_simple_root_at_origin_when_moving(self):
        assert count_roots(0.5, SearchBox(-0.1, 0.1, -0.1, 0.1)) == 1

    def test_real_root(self):
        assert count_roots(0.0, SearchBox(1.0, 3.0, -0.5, 0.5)) == 1

    def test_left_half_plane_is_empty(self):
        assert count_roots(0.0, SearchBox(-3.0, -0.1, 0.1, 3.0)) == 0

    @pytest.mark.parametrize("beta", [0.0, 0.3, 0.6, 0.9])
    def test_left_half_plane_is_empty_for_moving_frames(self, beta):
        assert count_roots(beta, SearchBox(-10.0, -0.1, 0.1, 10.0)) == 0

    def test_contour_through_a_root(self):
        with pytest.raises(ContourError):
            count_roots(0.0, SearchBox(0.0, 1.0, -1.0, 1.0))

    def test_accepts_text_box(self):
        assert count_roots(0.0, "1,3,-0.5,0.5") == 1


class TestFindRoots:
    def test_near_origin(self):
        roots = find_roots(0.0, SearchBox(-1.0, 3.0, -1.0, 1.0))
        zero = [root for root in roots.roots if root.mu == 0]
        assert len(zero) == 1 and zero[0].multiplicity == 2
        real = [root.mu.real for root in roots.roots if root.mu != 0]
        assert real == [pytest.approx(1.7932, abs=1e-4)]
        assert char_fn(1.79, 0.0) > 0 > char_fn(1.80, 0.0)
        assert roots.total_multiplicity == roots.certified_count == 3

    @pytest.mark.parametrize("box", [
        SearchBox(-1.0, 3.0, -1.0, 1.0), SearchBox(0.0, 6.0, -10.0, 10.0), DEFAULT_BOX,
    ])
    def test_double_root_is_one_entry(self, box):
        roots = find_roots(0.0, box)
        near_origin = [root for root in roots.roots if abs(root.mu) < 1e-2]
        assert [(root.mu, root.multiplicity) for root in near_origin] == [(0j, 2)]
        assert roots.total_multiplicity == roots.certified_count

    def test_small_velocity_splits_the_double_root(self):
        beta = 0.01
        roots = find_roots(beta, SearchBox(-0.01, 0.5, -0.5, 0.5))
        assert sorted(root.mu.real for root in roots.roots) == [exceptional_root(beta), 0.0]
        assert all(root.mu.imag == 0.0 and root.multiplicity == 1 for root in roots.roots)
        assert roots.certified_count == 2

    def test_first_complex_root(self):
        roots = find_roots(0.0, SearchBox(0.0, 8.0, 2.0, 14.0))
        assert roots.certified_count == 1
        mu = roots.roots[0].mu
        assert mu.real == pytest.approx(4.55, abs=0.05)
        assert mu.imag == pytest.approx(8.33, abs=0.05)

    def test_default_box_is_certified(self, rest_roots):
        assert rest_roots.total_multiplicity == rest_roots.certified_count
        assert all(root.residual < 1e-12 * max(1.0, abs(root.mu) ** 2) for root in rest_roots.roots)

    def test_conjugate_pairs(self, rest_roots):
        values = rest_roots.values()
        for root in rest_roots.roots:
            if root.mu.imag != 0:
                assert root.is_conjugate_partner
                assert np.min(np.abs(values - root.mu.conjugate())) <= 1e-9

    def test_nonzero_roots_in_right_half_plane(self, rest_roots):
        assert all(root.mu.real > 0 for root in rest_roots.nonzero())

    def test_ladder_spacing(self, rest_roots):
        eta = sorted(root.mu.imag for root in rest_roots.roots if root.mu.imag > 0)
        gaps = np.diff(eta)[2:]
        assert gaps.size > 0
        assert np.all(np.abs(gaps / (2.0 * math.pi) - 1.0) <= 0.05)

    def test_ordering(self, rest_roots):
        keys = [(abs(r.mu.imag), r.mu.imag, r.mu.real) for r in rest_roots.roots]
        assert keys == sorted(keys)

    def test_moving_frame_has_a_simple_zero(self):
        roots = find_roots(0.6, SearchBox(-0.05, 4.0, -1.0, 1.0))
        zero = [root for root in roots.roots if root.mu == 0]
        assert len(zero) == 1 and zero[0].multiplicity == 1

    def test_json_round_trip(self, rest_roots):
        assert RootSet.from_dict(rest_roots.to_dict()) == rest_roots

    def test_rejects_luminal_beta(self):
        with pytest.raises(ModelViolationError):
            find_roots(1.0, DEFAULT_BOX)


class TestExceptionalRoot:
    def test_rest(self):
        assert exceptional_root(0.0) == 0.0

    @pytest.mark.parametrize("beta", [0.05, 0.3, 0.6, 0.9])
    def test_is_a_negative_real_root(self, beta):
        mu = exceptional_root(beta)
        assert -1.0 < mu < 0.0
        assert abs(char_fn(mu, beta)) < 1e-12

    def test_small_velocity_asymptote(self):
        beta = 0.01
        assert exceptional_root(beta) == pytest.approx(-2.0 * beta ** 2 / (1.0 + beta ** 2), rel=1e-2)

    def test_luminal_limit(self):
        assert exceptional_root(0.99) < -0.95


class TestEigenfrequencies:
    def test_rest_ladder(self, rest_roots, params):
        ladder = eigenfrequencies(rest_roots, 0.0, params)
        assert ladder.omega[0] == pytest.approx(8.33, abs=0.05)
        assert 0.0 not in ladder.omega
        assert list(ladder.omega) == sorted(ladder.omega)
        assert ladder.asymptotic_spacing == pytest.approx(2.0 * math.pi, rel=0.05)

    def test_scaling_with_gamma(self, params):
        roots = find_roots(0.6, SearchBox(0.0, 12.0, 0.5, 60.0))
        ladder = eigenfrequencies(roots, 0.6, params)
        assert ladder.omega
        # omega gamma d / c is eta itself
        assert np.allclose(np.array(ladder.omega) * 1.25, ladder.eta)

    def test_si_units(self, rest_roots, si_params):
        ladder = eigenfrequencies(rest_roots, 0.0, si_params)
        assert ladder.omega[0] == pytest.approx(ladder.eta[0] * si_params.c / si_params.d)

    def test_empty_ladder(self):
        roots = find_roots(0.0, SearchBox(-0.5, 0.5, -0.5, 0.5))
        ladder = eigenfrequencies(roots, 0.0, make_params())
        assert ladder.omega == () and ladder.asymptotic_spacing is None
