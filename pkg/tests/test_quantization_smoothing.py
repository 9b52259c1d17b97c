"""Tests for the quantization condition, smoothing and the invariant fixtures."""

from __future__ import annotations

import math

import numpy as np
import pytest

from qsmap.classical.estimates import k_break, lobe_area_estimate
from qsmap.classical.standard_map import stability_exponent
from qsmap.core.utils.config import ConfigError
from qsmap.quantum import (
    TorusHilbert,
    build_propagator,
    diagonalize,
    resonance_state,
    spectral_decomposition,
)
from qsmap.semiclassics import (
    HomoclinicFixture,
    HomoclinicInvariants,
    InvalidRelevanceError,
    MissingInvariantsError,
    MissingRelevanceError,
    NoRootsInWindowError,
    SmoothingConfig,
    autocorrelation_estimate,
    bohr_sommerfeld_phase,
    eta,
    fixture_for,
    homoclinic_phase,
    interference_diagnostics,
    interference_factor,
    load_fixtures,
    mean_spacing_estimate,
    proxy_peaks,
    quantization_frame,
    quantum_smoothed_spectrum,
    scaled_coordinate,
    smoothed_spectral_function,
    smoothing_kernel,
    solve_quantization,
    two_ho_proxy,
)

TWO_PI = 2 * math.pi
S_MEAN = 0.142258
A_MEAN = 0.53998


@pytest.fixture
def mean_invariants():
    return HomoclinicInvariants(S=S_MEAN, mu=0.5, A=A_MEAN)


@pytest.fixture
def orbit_pair(reference_fixtures):
    return reference_fixtures["k0.5"].invariants()


def resonant_phases(N: int, k: float, m: int = 12) -> np.ndarray:
    """Eigenphases of the m states carrying the most resonance intensity."""
    space = TorusHilbert(N)
    eigendata = diagonalize(build_propagator(space, k), N, k)
    decomp = spectral_decomposition(eigendata, resonance_state(space, k))
    return decomp.eigenphases[decomp.top(m)]


def circular_distance(a: np.ndarray, b: float) -> np.ndarray:
    d = np.remainder(np.asarray(a) - b, TWO_PI)
    return np.minimum(d, TWO_PI - d)


class TestBohrSommerfeldPhase:
    def test_value_at_reference(self):
        expected = TWO_PI - (0.5 * 158 / TWO_PI - 2 * TWO_PI)

        assert bohr_sommerfeld_phase(158, 0.5) == pytest.approx(expected, abs=1e-12)
        assert bohr_sommerfeld_phase(158, 0.5) == pytest.approx(6.2763, abs=1e-4)

    def test_full_turn_maps_to_zero(self):
        k = 4 * math.pi**2 / 158

        assert bohr_sommerfeld_phase(158, k) == pytest.approx(0.0, abs=1e-12)

    def test_range(self):
        phases = [bohr_sommerfeld_phase(N, k) for N in (10, 158, 1026) for k in (0.1, 0.9, 1.7)]

        assert all(0.0 <= phi < TWO_PI for phi in phases)

    def test_small_n(self):
        with pytest.raises(ValueError, match="N must be >= 2"):
            bohr_sommerfeld_phase(1, 0.5)


class TestHomoclinicPhase:
    """Test suite for ψ(φ) and the scaled coordinate."""

    def test_scaled_coordinate(self):
        phi_bs = bohr_sommerfeld_phase(158, 0.5)
        lam = stability_exponent(0.5)

        assert scaled_coordinate(phi_bs, 158, 0.5) == pytest.approx(0.0, abs=1e-12)
        assert scaled_coordinate(phi_bs - lam, 158, 0.5) == pytest.approx(1.0)
        # wraps across 2π
        assert scaled_coordinate(np.mod(phi_bs + 0.2, TWO_PI), 158, 0.5) == pytest.approx(
            -0.2 / lam
        )

    def test_value_at_bohr_sommerfeld_phase(self, mean_invariants):
        phi_bs = bohr_sommerfeld_phase(158, 0.5)
        hbar = 1 / (TWO_PI * 158)

        psi = homoclinic_phase(phi_bs, mean_invariants, 158, 0.5)

        assert psi == pytest.approx(S_MEAN / hbar - 0.5 * math.pi / 2, abs=1e-9)

    def test_general_value(self, mean_invariants):
        phi_bs = bohr_sommerfeld_phase(158, 0.5)
        lam = stability_exponent(0.5)
        hbar = 1 / (TWO_PI * 158)
        x = 0.4

        psi = homoclinic_phase(phi_bs - lam * x, mean_invariants, 158, 0.5)

        expected = S_MEAN / hbar - math.pi / 4 + x * eta(x) + x * math.log(A_MEAN / hbar)
        assert psi == pytest.approx(expected, abs=1e-9)

    def test_requires_relevance(self):
        with pytest.raises(MissingRelevanceError):
            homoclinic_phase(1.0, HomoclinicInvariants(S=S_MEAN, mu=0.5), 158, 0.5)

    def test_invariant_validation(self):
        with pytest.raises(InvalidRelevanceError):
            HomoclinicInvariants(S=0.1, mu=0, A=0.0)
        with pytest.raises(ValueError, match="finite"):
            HomoclinicInvariants(S=math.nan, mu=0)

    def test_mean_of_pair(self, orbit_pair):
        first, second = orbit_pair

        mean = HomoclinicInvariants.mean(first, second)

        assert mean.S == pytest.approx(S_MEAN)
        assert mean.mu == 0.5
        assert mean.A == pytest.approx(A_MEAN)
        assert HomoclinicInvariants.mean(first, HomoclinicInvariants(S=0.1, mu=1)).A is None


class TestSolveQuantization:
    """Test suite for roots of the two-orbit quantization condition."""

    @pytest.fixture
    def solutions(self, mean_invariants):
        return solve_quantization(158, 0.5, mean_invariants)

    def test_central_root(self, solutions):
        central = next(s for s in solutions if s.label == 0)

        assert central.n == 22
        assert central.x == pytest.approx(-0.23, abs=0.02)

    def test_residuals(self, solutions, mean_invariants):
        for s in solutions:
            assert s.residual <= 1e-9
            psi = homoclinic_phase(s.phi, mean_invariants, 158, 0.5)
            assert abs(psi - TWO_PI * s.n) <= 1e-8

    def test_consecutive_integers(self, solutions):
        ns = [s.n for s in solutions]

        assert len(ns) >= 5
        assert ns == list(range(ns[0], ns[0] + len(ns)))
        assert [s.label for s in solutions] == [22 - n for n in ns]

    def test_phases_follow_scaled_coordinate(self, solutions):
        for s in solutions:
            assert scaled_coordinate(s.phi, 158, 0.5) == pytest.approx(s.x, abs=1e-12)

    def test_matches_quantum_eigenphases(self, solutions):
        phases = resonant_phases(158, 0.5)

        for s in solutions:
            if -3 <= s.label <= 3:
                assert circular_distance(phases, s.phi).min() <= 5 / 158

    @pytest.mark.slow
    def test_error_shrinks_with_n(self, mean_invariants):
        errors = []
        for N in (158, 1026):
            phases = resonant_phases(N, 0.5)
            solutions = solve_quantization(N, 0.5, mean_invariants)
            errors.append(
                max(
                    circular_distance(phases, s.phi).min()
                    for s in solutions
                    if -3 <= s.label <= 3
                )
            )

        assert errors[0] / errors[1] >= 2.8

    def test_no_roots(self, mean_invariants):
        with pytest.raises(NoRootsInWindowError, match="No quantization roots"):
            solve_quantization(158, 0.5, mean_invariants, x_window=(0.0, 0.01))

    def test_missing_relevance(self):
        with pytest.raises(MissingRelevanceError):
            solve_quantization(158, 0.5, HomoclinicInvariants(S=S_MEAN, mu=0.5))

    def test_frame(self, solutions):
        frame = quantization_frame(solutions)

        assert frame.columns == ["n", "label", "x", "phi"]
        assert len(frame) == len(solutions)


class TestInterference:
    """Test suite for the interference criterion and spacing estimates."""

    def test_destructive_at_three_half_pi(self):
        hbar = 1 / (TWO_PI * 158)

        assert interference_factor(158, 0.5, 1.5 * math.pi * hbar) == pytest.approx(0.0, abs=1e-12)

    def test_zero_action_difference(self):
        assert interference_factor(158, 0.5, 0.0) == pytest.approx(math.sqrt(2) / 2)

    def test_lobe_area_estimate_by_default(self):
        assert interference_factor(158, k_break(158)) == pytest.approx(0.0, abs=1e-4)
        assert abs(interference_factor(158, 1.62)) <= 0.06
        assert interference_factor(158, 0.5) == pytest.approx(
            interference_factor(158, 0.5, lobe_area_estimate(0.5))
        )
        assert not interference_diagnostics(158, 1.8).survives

    def test_diagnostics(self):
        diagnostics = interference_diagnostics(158, 0.5, 1.2e-5)

        assert diagnostics.survives
        assert diagnostics.delta_psi == pytest.approx(1.2e-5 * TWO_PI * 158 - math.pi / 2)
        assert diagnostics.factor == pytest.approx(math.cos(diagnostics.delta_psi / 2))

    def test_mean_spacing(self):
        spacing, count = mean_spacing_estimate(158, 0.5, A_MEAN)

        assert spacing == pytest.approx(0.1103, abs=2e-4)
        assert count == pytest.approx(math.sqrt(2) * math.log(A_MEAN * TWO_PI * 158))

    def test_mean_spacing_needs_relevance_above_hbar(self):
        with pytest.raises(InvalidRelevanceError, match="must exceed"):
            mean_spacing_estimate(158, 0.5, 1e-4)

    def test_autocorrelation_estimate(self):
        value = autocorrelation_estimate(158, 0.5)

        assert abs(value) == pytest.approx(1 / math.sqrt(1.25))
        assert np.angle(value) % TWO_PI == pytest.approx(bohr_sommerfeld_phase(158, 0.5))


class TestSmoothing:
    """Test suite for the smoothing kernel and the smoothed spectral function."""

    @pytest.fixture
    def config(self):
        return SmoothingConfig(A_max=0.6, N=158)

    def test_kernel_at_zero_and_even(self):
        y = np.linspace(-20, 20, 81)

        assert smoothing_kernel(0.0, 0.3) == pytest.approx(1.0)
        np.testing.assert_allclose(smoothing_kernel(y, 0.3), smoothing_kernel(-y, 0.3))

    def test_config_derived_values(self, config):
        beta = 2 / math.log(TWO_PI * 158 * 0.6)

        assert config.beta == pytest.approx(beta)
        assert config.K == pytest.approx(math.sqrt(math.pi / 8) * beta / (1 + beta))

    def test_config_validation(self):
        with pytest.raises(ValueError, match="A_max must be positive"):
            SmoothingConfig(A_max=0.0, N=158)
        with pytest.raises(ValueError, match="β undefined"):
            SmoothingConfig(A_max=1e-4, N=158)

    def test_proxy_factorizes(self, orbit_pair):
        first, second = orbit_pair
        mean = HomoclinicInvariants.mean(first, second)
        grid = np.linspace(5.5, 7.0, 50)
        delta_psi = 1.2e-5 * TWO_PI * 158 - math.pi / 2

        proxy = two_ho_proxy(grid, first, second, 158, 0.5)

        np.testing.assert_allclose(
            proxy,
            2 * np.cos(homoclinic_phase(grid, mean, 158, 0.5)) * math.cos(delta_psi / 2),
            atol=1e-8,
        )

    def test_proxy_only_without_lazutkin(self, orbit_pair, config, caplog):
        grid = np.linspace(5.5, 7.0, 50)

        smoothed = smoothed_spectral_function(grid, orbit_pair, 158, 0.5, config)

        assert smoothed.full is None
        np.testing.assert_allclose(smoothed.proxy, two_ho_proxy(grid, *orbit_pair, 158, 0.5))
        assert "Lazutkin invariants missing" in caplog.text

    def test_full_function_with_lazutkin(self, config):
        orbits = [
            HomoclinicInvariants(S=S_MEAN - 6e-6, mu=0, A=A_MEAN, L=2.0),
            HomoclinicInvariants(S=S_MEAN + 6e-6, mu=1, A=A_MEAN, L=-2.0),
        ]
        grid = np.linspace(5.5, 7.0, 50)

        smoothed = smoothed_spectral_function(grid, orbits, 158, 0.5, config)

        assert smoothed.full is not None
        assert smoothed.full.shape == grid.shape
        assert np.all(np.isfinite(smoothed.full))

    def test_missing_relevance(self, config):
        with pytest.raises(MissingInvariantsError, match="orbit 1 has no relevance"):
            smoothed_spectral_function(
                np.array([1.0]), [HomoclinicInvariants(S=0.1, mu=0)], 158, 0.5, config
            )
        with pytest.raises(MissingInvariantsError):
            smoothed_spectral_function(np.array([1.0]), [], 158, 0.5, config)

    def test_quantum_side_single_state(self):
        value = quantum_smoothed_spectrum(
            np.array([1.0]), np.array([1.0 + TWO_PI]), np.array([1.0]), 1.0, 0.7, 0.3
        )

        assert value[0] == pytest.approx(1.0)

    def test_proxy_peaks(self, orbit_pair):
        peaks = proxy_peaks(158, 0.5, *orbit_pair)

        assert len(peaks) >= 3
        assert np.all(np.diff(peaks) > 0)
        assert np.all((peaks >= 0) & (peaks < TWO_PI))


class TestFixtures:
    """Test suite for loading invariant fixtures and the relevance fallback."""

    def test_default_fixtures(self):
        fixtures = load_fixtures()

        assert fixtures["k0.5"].A_mean == pytest.approx(A_MEAN)
        assert fixtures["k0.5"].L is None
        assert fixtures["k1.447"].reference_labels == {"N": 158, "1": 37, "2": 38}

    def test_json_fixtures(self, fixture_file):
        fixtures = load_fixtures(fixture_file)

        assert list(fixtures) == ["k0.5"]
        assert fixtures["k0.5"].mu == (0, 1)
        assert fixtures["k0.5"].delta_A is None

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_fixtures(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")

        with pytest.raises(ConfigError, match="not valid JSON"):
            load_fixtures(path)

    def test_entry_without_k(self):
        with pytest.raises(ConfigError, match="has no 'k'"):
            HomoclinicFixture.from_dict("bad", {"A_mean": 0.5})

    def test_exact_lookup(self, reference_fixtures):
        lookup = fixture_for(0.5, reference_fixtures)

        assert lookup.provenance == "fixture"
        assert lookup.fixture.label == "k0.5"

    def test_fallback_lookup(self, reference_fixtures, caplog):
        lookup = fixture_for(1.447, reference_fixtures)

        assert lookup.provenance == "fallback"
        assert lookup.fixture.label == "k1.447"
        assert lookup.fixture.A_mean == pytest.approx(A_MEAN)
        assert "No relevance fixture for k=1.447" in caplog.text

    def test_no_reference(self):
        with pytest.raises(ConfigError, match="none for reference"):
            fixture_for(1.0, {})

    def test_invariants_split(self, reference_fixtures):
        fixture = reference_fixtures["k0.5"]

        first, second = fixture.invariants()
        unequal = fixture.invariants(equal_relevance=False)

        assert second.S - first.S == pytest.approx(1.2e-5)
        assert (first.mu, second.mu) == (0, 1)
        assert first.A == second.A == pytest.approx(A_MEAN)
        assert unequal[1].A - unequal[0].A == pytest.approx(5.8e-4)

    def test_invariants_override_action(self, reference_fixtures):
        first, second = reference_fixtures["k1.447"].invariants(S_mean=0.2, delta_S=0.01)

        assert (first.S, second.S) == pytest.approx((0.195, 0.205))
        assert first.A is None

    def test_invariants_without_action(self, reference_fixtures):
        with pytest.raises(ConfigError, match="has no action"):
            reference_fixtures["k1.447"].invariants()


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
