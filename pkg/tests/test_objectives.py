"""Pure objective functions: FRF mismatch terms and the L1 material penalty."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from platedamage import (
    DesignField,
    FrfDataset,
    ObjectiveConfig,
    error_vector,
    lasso_gradient,
    lasso_penalty,
    mac_mismatch,
    mac_sum_objective,
    mse_objective,
    total_objective,
)

complex_entries = st.complex_numbers(
    min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False, allow_infinity=False
)


def complex_vectors(n=4):
    return st.lists(complex_entries, min_size=n, max_size=n).map(np.array)


class TestErrorAndMse:
    def test_error_vector_is_plain_difference(self):
        e = error_vector(np.array([1 + 1j, 2.0]), np.array([1.0, 1 - 1j]))
        assert np.array_equal(e, np.array([1j, 1 + 1j]))

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(ValueError):
            error_vector(np.ones(3), np.ones(4))

    def test_known_value(self):
        # single frequency, error (3, 4j): J = 9 + 16 = 25
        h = np.array([[3.0 + 0j, 4j]])
        assert mse_objective(h, np.zeros((1, 2))) == 25.0

    def test_zero_iff_exact_match(self):
        h = np.array([[1 + 2j, -0.5j, 3.0]])
        assert mse_objective(h, h) == 0.0
        assert mse_objective(h, h + 1e-8) > 0.0

    def test_mean_over_frequencies(self):
        h = np.array([[1.0 + 0j], [1.0 + 0j]])
        ref = np.array([[0.0 + 0j], [0.0 + 0j]])
        assert mse_objective(h, ref) == pytest.approx(1.0)
        # duplicating a frequency row leaves the mean unchanged
        assert mse_objective(np.vstack([h, h]), np.vstack([ref, ref])) == pytest.approx(1.0)


class TestMac:
    def test_colinear_vectors_give_zero(self):
        h = np.array([1 + 2j, 3 - 1j, 0.5j])
        assert mac_mismatch(h, h) == 0.0
        assert mac_mismatch(h, (2 - 3j) * h) < 1e-14

    def test_orthogonal_vectors_give_one(self):
        assert mac_mismatch(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 1.0

    def test_known_half_value(self):
        h = np.array([1.0 + 0j, 1.0 + 0j])
        href = np.array([1.0 + 0j, 0.0 + 0j])
        assert mac_mismatch(h, href) == pytest.approx(0.5)

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError, match="degenerate"):
            mac_mismatch(np.zeros(3), np.ones(3))

    def test_magnitude_mode_ignores_phase(self):
        h = np.array([1.0, 2.0, 3.0]) * np.exp(1j * np.array([0.3, -1.2, 2.0]))
        href = np.array([1.0 + 0j, 2.0, 3.0])
        assert mac_mismatch(h, href, mode="magnitude") < 1e-14
        assert mac_mismatch(h, href, mode="complex") > 1e-3

    def test_sum_over_frequencies(self):
        h = np.array([[1.0 + 0j, 1.0], [1.0, 0.0]])
        href = np.array([[1.0 + 0j, 0.0], [1.0, 0.0]])
        assert mac_sum_objective(h, href) == pytest.approx(0.5)

    @settings(deadline=None, max_examples=50)
    @given(complex_vectors(), complex_entries)
    def test_invariant_under_complex_scaling(self, h, scale):
        href = np.array([1 + 1j, 2 - 1j, -3j, 0.5])
        base = mac_mismatch(h, href)
        scaled = mac_mismatch(scale * h, href)
        assert 0.0 <= base <= 1.0
        assert abs(base - scaled) < 1e-9

    @settings(deadline=None, max_examples=50)
    @given(complex_vectors(), complex_vectors())
    def test_bounded_and_symmetric(self, h1, h2):
        m12 = mac_mismatch(h1, h2)
        m21 = mac_mismatch(h2, h1)
        assert 0.0 <= m12 <= 1.0
        assert abs(m12 - m21) < 1e-10


class TestLasso:
    def field(self, values, volumes=None):
        values = np.asarray(values, dtype=float)
        if volumes is None:
            volumes = np.ones_like(values)
        return DesignField(values, np.asarray(volumes, dtype=float))

    def test_solid_plate_gives_zero(self):
        assert lasso_penalty(self.field([1.0, 1.0, 1.0])) == 0.0

    def test_uniform_half_material(self):
        assert lasso_penalty(self.field([0.5, 0.5])) == pytest.approx(0.5)

    def test_volume_weighting(self):
        # one big solid element, one small removed element
        f = self.field([1.0, 0.5], volumes=[3.0, 1.0])
        assert lasso_penalty(f) == pytest.approx(0.5 / 4.0)

    def test_gradient_constant_negative(self):
        f = self.field([0.3, 0.9, 1.0], volumes=[1.0, 2.0, 1.0])
        g = lasso_gradient(f)
        assert np.allclose(g, [-0.25, -0.5, -0.25])
        assert np.all(g < 0.0)

    @settings(deadline=None, max_examples=50)
    @given(
        st.lists(st.floats(0.001, 1.0), min_size=2, max_size=8),
        st.floats(0.0, 1.0),
    )
    def test_affine_in_chi(self, values, a):
        values = np.array(values)
        other = np.clip(1.0 - values + 0.001, 0.001, 1.0)
        mix = a * values + (1 - a) * other
        lhs = lasso_penalty(self.field(mix))
        rhs = a * lasso_penalty(self.field(values)) + (1 - a) * lasso_penalty(
            self.field(other)
        )
        assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_bounds_validation(self):
        with pytest.raises(ValueError):
            DesignField(np.array([1.2]), np.array([1.0]))
        with pytest.raises(ValueError):
            DesignField(np.array([0.5]), np.array([-1.0]))


class TestTotalsAndTypes:
    def test_total_is_weighted_sum(self):
        assert total_objective(2.0, 0.5, 0.1) == pytest.approx(2.05)

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            total_objective(1.0, 1.0, -0.1)

    def test_dataset_validation(self):
        with pytest.raises(ValueError):
            FrfDataset(np.array([2.0, 1.0]), np.ones((2, 3), dtype=complex))
        with pytest.raises(ValueError):
            FrfDataset(np.array([1.0, 1.0]), np.ones((2, 3), dtype=complex))
        with pytest.raises(ValueError):
            FrfDataset(np.array([]), np.ones((0, 3), dtype=complex))
        with pytest.raises(ValueError):
            FrfDataset(np.array([1.0]), np.ones((2, 3), dtype=complex))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            ObjectiveConfig(kind="l2")
        with pytest.raises(ValueError):
            ObjectiveConfig(mac_mode="phase")
        with pytest.raises(ValueError):
            ObjectiveConfig(lasso_weight=-1.0)
