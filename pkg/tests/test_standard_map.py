"""Tests for the classical map, its tangent dynamics and the closed-form estimates."""

from __future__ import annotations

import math

import numpy as np
import pytest

from qsmap.classical import (
    FIXED_POINT,
    LiftedOrbit,
    MapParams,
    PhasePoint,
    advance,
    chaotic_layer,
    eigendirections,
    generating_function,
    k_break,
    lift_step,
    lobe_area_estimate,
    monodromy,
    n_break,
    reversal,
    stability_exponent,
    tangent_map,
)


class TestStandardMap:
    """Test suite for map iteration on the torus and its lift."""

    def test_params_reject_negative_k(self):
        with pytest.raises(ValueError, match="non-negative"):
            MapParams(-0.1)

    def test_kick_amplitude(self):
        assert MapParams(0.5).kick == pytest.approx(0.5 / (2 * math.pi))

    def test_fixed_point_is_fixed(self):
        assert advance(FIXED_POINT, MapParams(1.3), 7) == PhasePoint(0.0, 0.0)

    def test_period_two_orbit(self):
        params = MapParams(0.9)

        once = advance(PhasePoint(0.5, 0.5), params)
        twice = advance(PhasePoint(0.5, 0.5), params, 2)

        assert once.q == pytest.approx(0.0, abs=1e-12) or once.q == pytest.approx(1.0, abs=1e-12)
        assert once.p == pytest.approx(0.5, abs=1e-12)
        assert twice.q == pytest.approx(0.5, abs=1e-12)
        assert twice.p == pytest.approx(0.5, abs=1e-12)

    def test_reduced_handles_tiny_negative(self):
        z = PhasePoint(-1e-18, 2.25).reduced()

        assert z.q == 0.0
        assert z.p == pytest.approx(0.25)

    @pytest.mark.parametrize("k", [0.2, 0.5])
    @pytest.mark.parametrize("z", [PhasePoint(0.45, 0.02), PhasePoint(0.5, 0.48)])
    def test_reversed_iteration(self, k, z):
        params = MapParams(k)

        for n in (1, 10, 50):
            back = advance(advance(z, params, n), params, -n)
            assert back.q == pytest.approx(z.q, abs=1e-10)
            assert back.p == pytest.approx(z.p, abs=1e-10)

    def test_lift_step_vectorized(self):
        q, p = lift_step(np.array([0.1, 0.2]), np.array([0.0, 0.3]), MapParams(0.5), 3)

        assert q.shape == (2,)
        for i, (q0, p0) in enumerate([(0.1, 0.0), (0.2, 0.3)]):
            qs, ps = lift_step(q0, p0, MapParams(0.5), 3)
            assert q[i] == pytest.approx(float(qs))
            assert p[i] == pytest.approx(float(ps))

    def test_lifted_orbit_from_positions(self):
        orbit = LiftedOrbit.from_positions(np.array([0.0, 0.1, 0.3, 0.6]), p_first=0.05)

        np.testing.assert_allclose(orbit.p, [0.05, 0.1, 0.2, 0.3])
        assert len(orbit) == 4
        assert orbit.points[2].q == 0.3
        assert orbit.points[2].p == pytest.approx(0.2)


class TestTangentDynamics:
    """Test suite for symplecticity and the hyperbolic fixed point."""

    def test_determinant_is_one(self):
        rng = np.random.default_rng(7)
        for q, p, k in rng.uniform(0.0, 2.0, size=(50, 3)):
            matrix = tangent_map(PhasePoint(q, p), MapParams(k))
            assert np.linalg.det(matrix) == pytest.approx(1.0, abs=1e-14)

    def test_trace_at_fixed_point(self):
        assert np.trace(tangent_map(FIXED_POINT, MapParams(0.5))) == pytest.approx(2.5)

    def test_monodromy_of_period_two_orbit(self):
        params = MapParams(0.5)

        matrix = monodromy(PhasePoint(0.5, 0.5), params, 2)

        assert np.linalg.det(matrix) == pytest.approx(1.0, abs=1e-12)
        assert np.trace(matrix) == pytest.approx(2.0 - 0.5**2)

    def test_monodromy_along_orbit_segment(self):
        matrix = monodromy(PhasePoint(0.123, 0.456), MapParams(1.4), 25)

        assert np.linalg.det(matrix) == pytest.approx(1.0, abs=1e-12 * np.abs(matrix).max() ** 2)

    def test_stability_exponent_closed_form(self):
        assert stability_exponent(0.0) == 0.0
        assert stability_exponent(0.5) == pytest.approx(math.log(2.0), abs=1e-15)

    @pytest.mark.parametrize("k", [0.2, 1.0, 1.8])
    def test_stability_exponent_matches_eigenvalue(self, k):
        eigenvalues = np.linalg.eigvals(tangent_map(FIXED_POINT, MapParams(k)))

        assert math.exp(stability_exponent(k)) == pytest.approx(
            float(np.max(np.abs(eigenvalues))), abs=1e-12
        )

    def test_eigendirections_at_half(self):
        unstable, stable = eigendirections(MapParams(0.5))

        np.testing.assert_allclose(unstable, np.array([1.0, 0.5]) / math.hypot(1.0, 0.5))
        assert stable[0] < 0 < stable[1]
        matrix = tangent_map(FIXED_POINT, MapParams(0.5))
        np.testing.assert_allclose(matrix @ stable, 0.5 * stable, atol=1e-14)

    def test_eigendirections_require_hyperbolic_point(self):
        with pytest.raises(ValueError, match="not hyperbolic"):
            eigendirections(MapParams(0.0))


class TestGeneratingFunction:
    """Test suite for the action generating function and the time reversal."""

    @pytest.mark.parametrize("q,p,k", [(0.1, 0.2, 0.5), (0.37, -0.4, 1.3), (0.8, 0.05, 1.9)])
    def test_generates_the_map(self, q, p, k):
        q1, p1 = (float(v) for v in lift_step(q, p, MapParams(k)))
        h = 1e-6

        dF_dq = (generating_function(q + h, q1, k) - generating_function(q - h, q1, k)) / (2 * h)
        dF_dq1 = (generating_function(q, q1 + h, k) - generating_function(q, q1 - h, k)) / (2 * h)

        assert -dF_dq == pytest.approx(p, abs=1e-8)
        assert dF_dq1 == pytest.approx(p1, abs=1e-8)

    def test_fixed_point_value(self):
        assert generating_function(0.0, 0.0, 0.5) == pytest.approx(-0.5 / (4 * math.pi**2))

    def test_reversal_conjugates_the_map(self):
        params = MapParams(0.7)
        z = PhasePoint(0.31, 0.12)

        image = advance(reversal(z, params), params)
        conjugated = reversal(image, params).reduced()
        expected = advance(z, params, -1)

        # R T R = T^-1, compared on the torus
        assert conjugated.q == pytest.approx(expected.q, abs=1e-12)
        assert conjugated.p == pytest.approx(expected.p, abs=1e-12)


class TestChaoticLayer:
    def test_shape_and_range(self):
        points = chaotic_layer(MapParams(0.5), seeds=4, steps=100)

        assert points.shape == (400, 2)
        assert np.all((points >= 0.0) & (points < 1.0))

    def test_deterministic(self):
        first = chaotic_layer(MapParams(0.5), seeds=3, steps=50)
        second = chaotic_layer(MapParams(0.5), seeds=3, steps=50)

        np.testing.assert_array_equal(first, second)


class TestEstimates:
    """Test suite for the lobe-area estimate and the thresholds derived from it."""

    def test_lobe_area_estimate_values(self):
        assert lobe_area_estimate(0.5) == pytest.approx(1.19e-5, rel=0.01)
        assert lobe_area_estimate(1.62) == pytest.approx(4.85e-3, rel=0.02)

    def test_lobe_area_estimate_increasing_small_k(self):
        values = [lobe_area_estimate(k) for k in np.linspace(0.05, 0.5, 20)]

        assert np.all(np.diff(values) > 0)
        assert values[0] < 1e-17

    def test_lobe_area_estimate_requires_positive_k(self):
        with pytest.raises(ValueError, match="positive"):
            lobe_area_estimate(0.0)

    def test_k_break_at_158(self):
        assert k_break(158) == pytest.approx(1.62, abs=0.02)

    def test_k_break_solves_threshold(self):
        assert lobe_area_estimate(k_break(400)) == pytest.approx(3.0 / (4.0 * 400), rel=1e-5)

    def test_n_break_at_half(self):
        assert n_break(0.5) == pytest.approx(62900, rel=0.02)
        assert k_break(62900) == pytest.approx(0.5, abs=0.02)

    def test_k_break_strictly_decreasing(self):
        values = [k_break(N) for N in (100, 158, 400, 1000, 3000, 10000, 62900)]

        assert np.all(np.diff(values) < 0)

    def test_k_break_small_n(self):
        with pytest.raises(ValueError, match="N must be >= 2"):
            k_break(1)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
