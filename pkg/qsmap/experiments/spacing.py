"""Nearest-neighbour spacing singularity at φ_BS and the single-(N, k) spectrum report."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
import polars as pl

from qsmap.classical.standard_map import stability_exponent
from qsmap.core.storage import ArtifactStore
from qsmap.experiments import plotting
from qsmap.experiments.config import ScanConfig
from qsmap.experiments.inputs import ResolvedInvariants, resolve_invariants, resonance_spectrum
from qsmap.experiments.manifest import RunManifest
from qsmap.experiments.runner import ExperimentError
from qsmap.quantum.hilbert import TorusHilbert
from qsmap.quantum.resonance import autocorrelation
from qsmap.quantum.spectrum import SpectralDecomposition, phase_moments, unwrap_phases
from qsmap.semiclassics.fixtures import HomoclinicFixture
from qsmap.semiclassics.quantization import (
    QuantizationSolution,
    autocorrelation_estimate,
    bohr_sommerfeld_phase,
    interference_diagnostics,
    mean_spacing_estimate,
    quantization_frame,
    solve_quantization,
)
from qsmap.semiclassics.smoothing import (
    SmoothingConfig,
    quantum_smoothed_spectrum,
    smoothed_spectral_function,
)

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
MIN_STATES = 5
LABEL_RANGE = 3
SMOOTHING_POINTS = 601


class TooFewStatesError(ExperimentError):
    """Raised when fewer than five states exceed the intensity floor."""

    pass


@dataclass(frozen=True)
class SpacingAnalysis:
    """Unfolded spacings of the selected states and their semiclassical counterpart."""

    N: int
    k: float
    phi_bs: float
    quantum: pl.DataFrame
    semiclassical: pl.DataFrame
    labels: pl.DataFrame
    minimum_phi: float
    mean_spacing: float

    @property
    def minimum_offset(self) -> float:
        return abs(self.minimum_phi - self.phi_bs)

    @property
    def minimum_at_phi_bs(self) -> bool:
        return self.minimum_offset <= 0.5 * self.mean_spacing

    @property
    def max_label_deviation(self) -> float | None:
        if self.labels.is_empty():
            return None
        return float(self.labels["deviation"].max())


def _spacing_frame(unfolded: np.ndarray) -> pl.DataFrame:
    """Rows (φ_i, φ_{i+1} − φ_i) of sorted phases."""
    phases = np.sort(unfolded)
    return pl.DataFrame(
        {"phi": phases[:-1], "spacing": np.diff(phases)},
        schema={"phi": pl.Float64, "spacing": pl.Float64},
    )


def locate_minimum(frame: pl.DataFrame) -> float:
    """Phase of the smallest spacing, refined by the vertex of a parabola through its neighbours.

    Spacings are placed at the midpoints of their two phases.
    """
    mid = (frame["phi"] + 0.5 * frame["spacing"]).to_numpy()
    spacing = frame["spacing"].to_numpy()
    i = int(np.argmin(spacing))
    if 0 < i < len(spacing) - 1:
        a, b, _ = np.polyfit(mid[i - 1 : i + 2], spacing[i - 1 : i + 2], 2)
        if a > 0:
            vertex = -b / (2.0 * a)
            if mid[i - 1] <= vertex <= mid[i + 1]:
                return float(vertex)
    return float(mid[i])


def _label_frame(
    solutions: list[QuantizationSolution], quantum_phases: np.ndarray, phi_bs: float
) -> pl.DataFrame:
    rows = []
    for s in solutions:
        if abs(s.label) > LABEL_RANGE:
            continue
        semi = float(unwrap_phases(np.array([s.phi]), phi_bs)[0])
        nearest = int(np.argmin(np.abs(quantum_phases - semi)))
        rows.append(
            {
                "label": s.label,
                "n": s.n,
                "phi_semiclassical": semi,
                "phi_quantum": float(quantum_phases[nearest]),
                "deviation": abs(float(quantum_phases[nearest]) - semi),
            }
        )
    return pl.DataFrame(
        rows,
        schema={
            "label": pl.Int64,
            "n": pl.Int64,
            "phi_semiclassical": pl.Float64,
            "phi_quantum": pl.Float64,
            "deviation": pl.Float64,
        },
    )


def spacing_analysis(
    decomp: SpectralDecomposition,
    invariants: ResolvedInvariants,
    intensity_floor: float = 5e-6,
    x_window: tuple[float, float] = (-3.0, 3.0),
) -> SpacingAnalysis:
    """Select states above the floor, unfold them around φ_BS and compare spacings.

    A state whose phase lies more than π from φ_BS belongs to the previous or
    next structure and is moved by ∓2π before sorting.

    Raises:
        TooFewStatesError: If fewer than 5 states exceed ``intensity_floor``
    """
    N, k = decomp.N, decomp.k
    phi_bs = bohr_sommerfeld_phase(N, k)
    selected = np.nonzero(decomp.intensities > intensity_floor)[0]
    if len(selected) < MIN_STATES:
        raise TooFewStatesError(
            f"Only {len(selected)} states above |c|²={intensity_floor:g} at N={N}, k={k}"
        )

    unfolded = np.sort(unwrap_phases(decomp.eigenphases[selected], phi_bs))
    quantum = _spacing_frame(unfolded)

    solutions = solve_quantization(N, k, invariants.mean, tuple(x_window))
    semi_phases = unwrap_phases(np.array([s.phi for s in solutions]), phi_bs)
    semiclassical = (
        _spacing_frame(semi_phases)
        if len(solutions) > 1
        else pl.DataFrame(schema={"phi": pl.Float64, "spacing": pl.Float64})
    )

    mean_spacing, _ = mean_spacing_estimate(N, k, invariants.mean.A)
    analysis = SpacingAnalysis(
        N=N,
        k=k,
        phi_bs=phi_bs,
        quantum=quantum,
        semiclassical=semiclassical,
        labels=_label_frame(solutions, unfolded, phi_bs),
        minimum_phi=locate_minimum(quantum),
        mean_spacing=mean_spacing,
    )
    logger.info(
        f"Spacing analysis N={N}, k={k}: {len(selected)} states, minimum "
        f"{analysis.minimum_offset:.3g} from φ_BS (Δφ/2 = {0.5 * mean_spacing:.3g})"
    )
    return analysis


def spacing_singularity(
    config: ScanConfig,
    store: ArtifactStore,
    manifest: RunManifest,
    fixtures: dict[str, HomoclinicFixture],
) -> dict[str, Any]:
    """Spacing singularity at (config.N, config.k) as datasets, summary and figure."""
    N, k = config.N, config.k
    with manifest.task(f"spacing N={N},k={k:g}"):
        invariants = resolve_invariants(k, fixtures, config.tol)
        for name, source in invariants.provenance.items():
            manifest.set_provenance(name, source)
        analysis = spacing_analysis(
            resonance_spectrum(N, k), invariants, config.intensity_floor, config.x_window
        )

        store.put_table("spacings.csv", analysis.quantum)
        store.put_table("semiclassical_spacings.csv", analysis.semiclassical)
        store.put_table("labels.csv", analysis.labels)
        fig = plotting.spacing_figure(
            analysis.quantum, analysis.semiclassical, analysis.phi_bs, N, k
        )
        plotting.save_figure(store, "spacing", fig, config.fmt)

    stats = {
        "N": N,
        "k": k,
        "phi_bs": analysis.phi_bs,
        "states": len(analysis.quantum) + 1,
        "minimum_phi": analysis.minimum_phi,
        "mean_spacing_estimate": analysis.mean_spacing,
        "minimum_at_phi_bs": analysis.minimum_at_phi_bs,
        "max_label_deviation": analysis.max_label_deviation,
        "provenance": invariants.provenance,
    }
    store.put_json("summary.json", stats)
    return stats


def smoothed_frame(
    decomp: SpectralDecomposition,
    invariants: ResolvedInvariants,
    A_max: float,
    x_window: tuple[float, float],
) -> pl.DataFrame:
    """Smoothed resonance spectrum on x ∈ window: quantum side, proxy and full formula."""
    N, k = decomp.N, decomp.k
    lam = stability_exponent(k)
    phi_bs = bohr_sommerfeld_phase(N, k)
    smoothing = SmoothingConfig(A_max=A_max, N=N)
    phi_grid = phi_bs - lam * np.linspace(x_window[1], x_window[0], SMOOTHING_POINTS)

    quantum = quantum_smoothed_spectrum(
        phi_grid, decomp.eigenphases, decomp.intensities, phi_bs, lam, smoothing.beta
    )
    semi = smoothed_spectral_function(
        phi_grid, [invariants.first, invariants.second], N, k, smoothing
    )
    return pl.DataFrame(
        {
            "phi": phi_grid,
            "x": semi.x,
            "quantum": quantum,
            "proxy": semi.proxy,
            "semiclassical": semi.full if semi.full is not None else [None] * len(phi_grid),
        },
        schema={
            "phi": pl.Float64,
            "x": pl.Float64,
            "quantum": pl.Float64,
            "proxy": pl.Float64,
            "semiclassical": pl.Float64,
        },
    )


def spectrum_report(
    config: ScanConfig,
    store: ArtifactStore,
    manifest: RunManifest,
    fixtures: dict[str, HomoclinicFixture],
) -> dict[str, Any]:
    """Spectrum, phase moments, autocorrelation check and quantization at one (N, k)."""
    N, k = config.N, config.k
    with manifest.task(f"spectrum N={N},k={k:g}"):
        decomp = resonance_spectrum(N, k)
        moments = phase_moments(decomp, N, k)
        overlap = autocorrelation(TorusHilbert(N), k)
        estimate = autocorrelation_estimate(N, k)

        invariants = resolve_invariants(k, fixtures, config.tol)
        for name, source in invariants.provenance.items():
            manifest.set_provenance(name, source)
        solutions = solve_quantization(N, k, invariants.mean, tuple(config.x_window))
        smoothed = smoothed_frame(decomp, invariants, config.A_max, tuple(config.x_window))
        interference = interference_diagnostics(N, k, invariants.delta_S)

        spectrum = decomp.to_frame()
        store.put_table("spectrum.csv", spectrum)
        store.put_table("quantization.csv", quantization_frame(solutions))
        store.put_table("smoothed.csv", smoothed)
        fig = plotting.spectrum_figure(spectrum, smoothed, moments.phi_bs, N, k)
        plotting.save_figure(store, "spectrum", fig, config.fmt)

    stats = {
        "N": N,
        "k": k,
        "phi_bs": moments.phi_bs,
        "mean_phase": moments.mean,
        "mean_offset": moments.mean_offset,
        "dispersion": moments.dispersion,
        "dispersion_target": moments.dispersion_target,
        "autocorrelation": {"re": overlap.real, "im": overlap.imag, "abs": abs(overlap)},
        "autocorrelation_estimate": {
            "re": estimate.real,
            "im": estimate.imag,
            "abs": abs(estimate),
        },
        "n0": next(s.n for s in solutions if s.label == 0),
        "interference": {
            "delta_psi": interference.delta_psi,
            "factor": interference.factor,
            "survives": interference.survives,
        },
        "provenance": invariants.provenance,
    }
    store.put_json("summary.json", stats)
    logger.info(
        f"Spectrum N={N}, k={k}: mean offset {moments.mean_offset:.3g}, "
        f"dispersion {moments.dispersion:.4f} (target {moments.dispersion_target:.4f})"
    )
    return stats
