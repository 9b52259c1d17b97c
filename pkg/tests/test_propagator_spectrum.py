"""Tests for the Floquet propagator, its eigensystem and the resonance state."""

from __future__ import annotations

import math

import numpy as np
import pytest

from qsmap.classical.standard_map import stability_exponent
from qsmap.quantum import (
    DegeneratePacketError,
    DimensionMismatchError,
    QuantumError,
    TorusHilbert,
    apply_propagator,
    autocorrelation,
    build_propagator,
    diagonalize,
    effective_dimension,
    ipr,
    participation_ratio,
    phase_moments,
    resonance_state,
    spectral_decomposition,
    unitarity_defect,
    unwrap_phases,
    xi_n,
)
from qsmap.semiclassics.quantization import bohr_sommerfeld_phase

N_REF = 158


@pytest.fixture(scope="module")
def reference_space():
    return TorusHilbert(N_REF)


@pytest.fixture(scope="module")
def decomposed(reference_space):
    """Eigensystems with resonance intensities at N = 158, keyed by k."""
    cache = {}

    def build(k):
        if k not in cache:
            U = build_propagator(reference_space, k)
            eigendata = diagonalize(U, N_REF, k)
            cache[k] = spectral_decomposition(eigendata, resonance_state(reference_space, k))
        return cache[k]

    return build


class TestTorusHilbert:
    def test_hbar(self):
        assert TorusHilbert(158).hbar == pytest.approx(1.0 / (2 * math.pi * 158))

    def test_symmetric_momentum_window(self):
        assert sorted(TorusHilbert(4).momentum_indices.tolist()) == [-2, -1, 0, 1]
        assert sorted(TorusHilbert(5).momentum_indices.tolist()) == [-2, -1, 0, 1, 2]

    @pytest.mark.parametrize("N", [1, 0, 2.5])
    def test_invalid_dimension(self, N):
        with pytest.raises(DimensionMismatchError):
            TorusHilbert(N)

    def test_rejects_bloch_angles(self):
        with pytest.raises(ValueError, match="periodic boundary"):
            TorusHilbert(10, bloch_angles=(0.1, 0.0))

    def test_check_state_shape(self, small_space):
        with pytest.raises(DimensionMismatchError, match="expected \\(32,\\)"):
            small_space.check_state(np.ones(31))


class TestPropagator:
    """Test suite for the Floquet matrix assembly."""

    @pytest.mark.parametrize("N,k", [(2, 0.0), (31, 0.4), (158, 0.5), (200, 1.8)])
    def test_unitarity(self, N, k):
        assert unitarity_defect(build_propagator(TorusHilbert(N), k)) <= 1e-12

    def test_free_rotation_keeps_zero_momentum(self):
        space = TorusHilbert(4)
        U = build_propagator(space, 0.0)
        flat = np.full(4, 0.5, dtype=complex)

        np.testing.assert_allclose(U @ flat, flat, atol=1e-14)

    def test_free_rotation_is_diagonal_in_momentum(self):
        space = TorusHilbert(4)
        U = build_propagator(space, 0.0)
        F = np.fft.fft(np.eye(4), axis=0, norm="ortho")

        in_momentum = F @ U @ F.conj().T
        expected = np.exp(-1j * math.pi * space.momentum_indices.astype(float) ** 2 / 4)

        np.testing.assert_allclose(in_momentum, np.diag(expected), atol=1e-14)
        assert in_momentum[0, 0] == pytest.approx(1.0)

    def test_apply_matches_matrix(self, small_space):
        rng = np.random.default_rng(3)
        state = rng.normal(size=32) + 1j * rng.normal(size=32)

        np.testing.assert_allclose(
            apply_propagator(state, small_space, 0.9),
            build_propagator(small_space, 0.9) @ state,
            atol=1e-12,
        )

    def test_negative_k(self, small_space):
        with pytest.raises(ValueError, match="non-negative"):
            build_propagator(small_space, -0.5)


class TestDiagonalize:
    """Test suite for the Schur-based eigensolver."""

    def test_diagonal_input(self):
        angles = np.array([0.3, 2.0, 5.0, 1.0])

        eigendata = diagonalize(np.diag(np.exp(1j * angles)))

        np.testing.assert_allclose(eigendata.eigenphases, [0.3, 1.0, 2.0, 5.0], atol=1e-14)
        np.testing.assert_allclose(
            np.abs(eigendata.eigenvectors), np.eye(4)[:, [0, 3, 1, 2]], atol=1e-14
        )

    def test_random_unitary_residuals(self):
        rng = np.random.default_rng(11)
        Q, _ = np.linalg.qr(rng.normal(size=(60, 60)) + 1j * rng.normal(size=(60, 60)))

        eigendata = diagonalize(Q)
        residuals = np.linalg.norm(
            Q @ eigendata.eigenvectors
            - eigendata.eigenvectors * np.exp(1j * eigendata.eigenphases)[None, :],
            axis=0,
        )

        assert residuals.max() <= 1e-10
        assert np.all(np.diff(eigendata.eigenphases) >= 0)
        assert np.all((eigendata.eigenphases >= 0) & (eigendata.eigenphases < 2 * math.pi))

    def test_trace_identity(self, reference_space):
        U = build_propagator(reference_space, 0.5)

        eigendata = diagonalize(U, N_REF, 0.5)

        assert abs(np.exp(1j * eigendata.eigenphases).sum() - np.trace(U)) <= 1e-8

    def test_gauge_is_deterministic(self, small_space):
        first = diagonalize(build_propagator(small_space, 0.7))
        second = diagonalize(build_propagator(small_space, 0.7))

        np.testing.assert_allclose(first.eigenvectors, second.eigenvectors, atol=1e-12)
        pivots = first.eigenvectors[np.argmax(np.abs(first.eigenvectors), axis=0), np.arange(32)]
        np.testing.assert_allclose(pivots.imag, 0.0, atol=1e-15)
        assert np.all(pivots.real > 0)

    def test_non_square(self):
        with pytest.raises(DimensionMismatchError, match="square"):
            diagonalize(np.ones((3, 4)))

    def test_non_unitary(self):
        with pytest.raises(ValueError, match="not unitary"):
            diagonalize(np.diag([1.0, 2.0]))


class TestSpectralDecomposition:
    """Test suite for resonance intensities and their moments."""

    def test_eigenvector_reference(self, small_space):
        eigendata = diagonalize(build_propagator(small_space, 0.5))

        decomp = spectral_decomposition(eigendata, eigendata.eigenvectors[:, 5])

        assert decomp.intensities[5] == pytest.approx(1.0, abs=1e-12)
        assert np.delete(decomp.intensities, 5).max() <= 1e-20

    @pytest.mark.parametrize("k", [0.2, 0.5, 1.0])
    def test_completeness(self, decomposed, k):
        assert decomposed(k).intensities.sum() == pytest.approx(1.0, abs=1e-10)

    def test_reference_shape(self, small_space):
        eigendata = diagonalize(build_propagator(small_space, 0.5))

        with pytest.raises(DimensionMismatchError):
            spectral_decomposition(eigendata, np.ones(10))

    def test_top_and_frame(self, decomposed):
        decomp = decomposed(0.5)

        top = decomp.top(3)
        frame = decomp.to_frame()

        assert decomp.intensities[top[0]] == decomp.intensities.max()
        values = decomp.intensities[top]
        assert values[0] >= values[1] >= values[2]
        assert frame.columns == ["k", "N", "index", "eigenphase", "intensity"]
        assert len(frame) == N_REF

    def test_top_requires_intensities(self, small_space):
        eigendata = diagonalize(build_propagator(small_space, 0.5))

        with pytest.raises(QuantumError, match="Intensities not computed"):
            eigendata.top(3)

    def test_unwrap_phases(self):
        unwrapped = unwrap_phases(np.array([0.1, 6.2, 3.0]), 0.0)

        np.testing.assert_allclose(unwrapped, [0.1, 6.2 - 2 * math.pi, 3.0])

    @pytest.mark.parametrize("k", [0.2, 0.5, 1.0])
    def test_bohr_sommerfeld_phase_law(self, decomposed, k):
        moments = phase_moments(decomposed(k), N_REF, k)
        lam = stability_exponent(k)

        assert moments.phi_bs == pytest.approx(bohr_sommerfeld_phase(N_REF, k))
        assert abs(moments.mean_offset) <= lam / (10 * math.sqrt(2))
        assert moments.dispersion == pytest.approx(lam / math.sqrt(2), rel=0.15)
        assert moments.dispersion_target == pytest.approx(lam / math.sqrt(2))

    def test_dispersion_at_half(self, decomposed):
        moments = phase_moments(decomposed(0.5), N_REF, 0.5)

        assert moments.dispersion == pytest.approx(math.log(2) / math.sqrt(2), rel=0.15)

    def test_moments_require_intensities(self, small_space):
        eigendata = diagonalize(build_propagator(small_space, 0.5))

        with pytest.raises(QuantumError):
            phase_moments(eigendata, 32, 0.5)


class TestResonanceState:
    """Test suite for the Gaussian packet on the fixed point."""

    @pytest.mark.parametrize("N,k", [(32, 0.3), (158, 0.5), (401, 1.2)])
    def test_normalized(self, N, k):
        state = resonance_state(TorusHilbert(N), k)

        assert np.linalg.norm(state) == pytest.approx(1.0, abs=1e-12)

    def test_symmetric_and_peaked_at_origin(self, reference_space):
        amplitudes = np.abs(resonance_state(reference_space, 0.5))
        j = np.arange(1, N_REF)

        np.testing.assert_allclose(amplitudes[j], amplitudes[N_REF - j], atol=1e-10)
        assert int(np.argmax(amplitudes)) == 0

    def test_zero_kick(self, small_space):
        with pytest.raises(DegeneratePacketError, match="k > 0"):
            resonance_state(small_space, 0.0)

    @pytest.mark.parametrize("k", [0.2, 0.5, 1.0])
    def test_autocorrelation_semiclassical(self, reference_space, k):
        expected = 1.0 / math.sqrt(math.cosh(stability_exponent(k)))

        assert abs(abs(autocorrelation(reference_space, k)) - expected) <= 0.05

    def test_autocorrelation_at_half(self, reference_space):
        assert abs(autocorrelation(reference_space, 0.5)) == pytest.approx(
            1 / math.sqrt(1.25), rel=0.05
        )

    def test_strongest_state_carries_bohr_sommerfeld_phase(self, decomposed):
        decomp = decomposed(0.5)
        strongest = decomp.top(1)[0]
        phi_bs = bohr_sommerfeld_phase(N_REF, 0.5)

        offset = unwrap_phases(decomp.eigenphases[strongest : strongest + 1], phi_bs)[0] - phi_bs

        assert abs(offset) <= stability_exponent(0.5)


class TestLocalization:
    """Test suite for inverse participation ratios."""

    def test_single_state(self):
        assert ipr(np.array([0.0, 1.0, 0.0])) == 1.0

    def test_uniform(self):
        intensities = np.full(8, 1 / 8)

        assert ipr(intensities) == pytest.approx(1 / 8)
        assert participation_ratio(intensities) == pytest.approx(8.0)

    def test_unnormalized(self):
        with pytest.raises(ValueError, match="sum to 1"):
            ipr(np.array([0.5, 0.2]))

    @pytest.mark.parametrize("k", [0.2, 0.5, 1.0])
    def test_bounds(self, decomposed, k):
        xi = ipr(decomposed(k).intensities)

        assert 1 / N_REF <= xi <= 1.0

    @pytest.mark.parametrize("k", [0.1, 0.3])
    def test_small_k_plateau(self, k):
        space = TorusHilbert(200)
        decomp = spectral_decomposition(
            diagonalize(build_propagator(space, k), 200, k), resonance_state(space, k)
        )

        ratio = ipr(decomp.intensities) / xi_n(200)

        # the empirical ξ_N sits about 10-15% below the measured plateau at N = 200
        assert 1.0 <= ratio <= 1.2

    def test_effective_dimension(self):
        assert effective_dimension(200, 0.05) == pytest.approx(10.0)
        assert effective_dimension(200, 1.0) == 200
        with pytest.raises(ValueError, match="chaotic_fraction"):
            effective_dimension(200, 1.5)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
