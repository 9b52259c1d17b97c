"""Parameter scans: eigenphase correlation diagram, IPR collapse, k_break(N), state tracking."""

from __future__ import annotations

import logging
import math
from functools import partial
from typing import Any

import numpy as np
import polars as pl
from scipy.ndimage import uniform_filter1d

from qsmap.classical.estimates import k_break, lobe_area_estimate
from qsmap.classical.standard_map import stability_exponent
from qsmap.core.storage import ArtifactStore
from qsmap.experiments import plotting
from qsmap.experiments.config import ScanConfig
from qsmap.experiments.inputs import resonance_spectrum
from qsmap.experiments.manifest import RunManifest
from qsmap.experiments.runner import ScanTaskError, run_tasks
from qsmap.quantum.hilbert import TorusHilbert
from qsmap.quantum.husimi import husimi, motion_fractions
from qsmap.quantum.localization import effective_dimension, ipr, xi_n
from qsmap.quantum.propagator import build_propagator
from qsmap.quantum.spectrum import SpectralDecomposition, diagonalize
from qsmap.quantum.tracking import track_eigenstate
from qsmap.semiclassics.quantization import bohr_sommerfeld_phase

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
PLATEAU_RATIO = 0.2
REFERENCE_BAND = (0.4, 0.6)
FRAGMENTED_FROM = 1.4

CORRELATION_SCHEMA = {
    "k": pl.Float64,
    "index": pl.Int64,
    "eigenphase": pl.Float64,
    "intensity": pl.Float64,
}


def circular_distance(a: np.ndarray | float, b: float) -> np.ndarray | float:
    return np.abs(np.remainder(np.asarray(a) - b + math.pi, TWO_PI) - math.pi)


def _task_name(N: int, k: float) -> str:
    return f"N={N},k={k:.6f}"


def _ridge_row(decomp: SpectralDecomposition, threshold: float) -> dict[str, Any]:
    phi_bs = bohr_sommerfeld_phase(decomp.N, decomp.k)
    top = int(decomp.top(1)[0])
    top_phase = float(decomp.eigenphases[top])
    return {
        "k": decomp.k,
        "phi_bs": phi_bs,
        "top_index": top,
        "top_phase": top_phase,
        "top_intensity": float(decomp.intensities[top]),
        "above_threshold": int(np.count_nonzero(decomp.intensities > threshold)),
        "ridge_hit": bool(circular_distance(top_phase, phi_bs) <= TWO_PI / decomp.N),
    }


def correlation_scan(
    config: ScanConfig, store: ArtifactStore, manifest: RunManifest
) -> dict[str, Any]:
    """Eigenphases and resonance intensities over the k grid at fixed N.

    Writes ``intensities.csv`` (k, index, eigenphase, intensity), ``ridge.csv``
    with the per-k summary, ``summary.json`` and the correlation figure.
    Failed k values are left out of the datasets and flagged in the manifest.

    Raises:
        ScanTaskError: If no k value could be diagonalized
    """
    N = config.N
    tasks = [
        (_task_name(N, k), partial(resonance_spectrum, N, float(k))) for k in config.k_values()
    ]
    batch = run_tasks(tasks, config.worker_count)
    manifest.record_batch(batch)
    decomps: list[SpectralDecomposition] = batch.values
    if not decomps:
        raise ScanTaskError(f"Correlation scan at N={N}: no k value succeeded")

    frame = pl.concat(
        [d.to_frame().select(list(CORRELATION_SCHEMA)).cast(CORRELATION_SCHEMA) for d in decomps]
    )
    ridge = pl.DataFrame([_ridge_row(d, config.intensity_threshold) for d in decomps])

    def band_mean(mask: pl.Expr, column: str = "above_threshold") -> float | None:
        values = ridge.filter(mask)[column]
        return float(values.mean()) if len(values) else None

    stats = {
        "N": N,
        "k_values": len(tasks),
        "k_succeeded": len(decomps),
        "rows": len(frame),
        "ridge_hit_fraction": float(ridge["ridge_hit"].mean()),
        "above_threshold_reference_band": band_mean(pl.col("k").is_between(*REFERENCE_BAND)),
        "above_threshold_fragmented": band_mean(pl.col("k") >= FRAGMENTED_FROM),
        "top_intensity_reference_band": band_mean(
            pl.col("k").is_between(*REFERENCE_BAND), "top_intensity"
        ),
        "top_intensity_fragmented": band_mean(pl.col("k") >= FRAGMENTED_FROM, "top_intensity"),
        "intensity_threshold": config.intensity_threshold,
    }

    store.put_table("intensities.csv", frame)
    store.put_table("ridge.csv", ridge)
    store.put_json("summary.json", stats)
    fig = plotting.correlation_figure(frame, config.intensity_threshold, N)
    plotting.save_figure(store, "correlation", fig, config.fmt)
    logger.info(
        f"Correlation scan N={N}: {len(decomps)}/{len(tasks)} k values, "
        f"ridge hit fraction {stats['ridge_hit_fraction']:.2f}"
    )
    return stats


def _ipr_task(N: int, k: float) -> tuple[int, float, float]:
    return N, k, ipr(resonance_spectrum(N, k).intensities)


def running_average(values: np.ndarray, window: int) -> np.ndarray:
    """Centered moving mean over ``window`` points, edges padded with the end values."""
    if window < 1 or window % 2 == 0:
        raise ValueError(f"Running-average window must be odd and >= 1, got {window}")
    return uniform_filter1d(np.asarray(values, dtype=float), size=window, mode="nearest")


def ipr_frame(raw: pl.DataFrame, window: int, alpha: float) -> pl.DataFrame:
    """Running-averaged and normalized IPR curves from rows (N, k, xi).

    PR is reported against N and against N_eff = N·A_chaotic, with the chaotic
    fraction estimated as α·ΔS/λ.
    """
    parts = []
    for (N,), group in raw.sort(["N", "k"]).group_by(["N"], maintain_order=True):
        k = group["k"].to_numpy()
        xi_avg = running_average(group["xi"].to_numpy(), window)
        lam = np.array([stability_exponent(kk) for kk in k])
        delta_s = np.array([lobe_area_estimate(kk) for kk in k])
        # N_eff never drops below one state
        chaotic = np.clip(alpha * delta_s / lam, 1.0 / N, 1.0)
        n_eff = np.array([effective_dimension(N, a) for a in chaotic])
        parts.append(
            group.with_columns(
                pl.Series("ratio", k / k_break(N)),
                pl.Series("xi_avg", xi_avg),
                pl.Series("xi_norm", xi_avg / xi_n(N)),
                pl.Series("pr_over_n", 1.0 / (xi_avg * N)),
                pl.Series("overlay", alpha * delta_s / lam),
                pl.Series("n_eff", n_eff),
                pl.Series("pr_over_n_eff", 1.0 / (xi_avg * n_eff)),
            )
        )
    return pl.concat(parts)


def ipr_summary(frame: pl.DataFrame) -> pl.DataFrame:
    """Per N: small-k plateau of ξ/ξ_N and the k/k_break where it halves."""
    rows = []
    for (N,), group in frame.group_by(["N"], maintain_order=True):
        ratio = group["ratio"].to_numpy()
        norm = group["xi_norm"].to_numpy()
        small = ratio <= PLATEAU_RATIO
        plateau = float(norm[small].mean()) if small.any() else None
        drop = None
        if plateau is not None:
            below = np.nonzero(norm < 0.5 * plateau)[0]
            drop = float(ratio[below[0]]) if len(below) else None
        rows.append({"N": N, "k_break": k_break(N), "plateau": plateau, "half_drop_ratio": drop})
    return pl.DataFrame(
        rows,
        schema={
            "N": pl.Int64,
            "k_break": pl.Float64,
            "plateau": pl.Float64,
            "half_drop_ratio": pl.Float64,
        },
    )


def ipr_scan(config: ScanConfig, store: ArtifactStore, manifest: RunManifest) -> dict[str, Any]:
    """ξ(k) of the resonance state for every N, normalized by ξ_N against k/k_break(N).

    Raises:
        ScanTaskError: If every (N, k) task failed
    """
    tasks = [
        (_task_name(N, k), partial(_ipr_task, N, float(k)))
        for N in config.N_list
        for k in config.k_values(N)
    ]
    batch = run_tasks(tasks, config.worker_count)
    manifest.record_batch(batch)
    if not batch.values:
        raise ScanTaskError("IPR scan: no (N, k) task succeeded")

    raw = pl.DataFrame(
        batch.values, schema={"N": pl.Int64, "k": pl.Float64, "xi": pl.Float64}, orient="row"
    )
    frame = ipr_frame(raw, config.window, config.alpha)
    summary = ipr_summary(frame)

    store.put_table("ipr.csv", frame)
    store.put_table("ipr_summary.csv", summary)
    plotting.save_figure(store, "ipr", plotting.ipr_figure(frame, config.alpha), config.fmt)

    stats = {
        "tasks": len(tasks),
        "succeeded": len(batch.values),
        "window": config.window,
        "N_list": list(config.N_list),
        "per_N": summary.to_dicts(),
    }
    store.put_json("summary.json", stats)
    logger.info(f"IPR scan: {len(batch.values)}/{len(tasks)} tasks over N={list(config.N_list)}")
    return stats


def phase_diagram(
    config: ScanConfig, store: ArtifactStore, manifest: RunManifest
) -> dict[str, Any]:
    """Table (N, k_break(N)) with the lobe-area threshold 3/(4N)."""
    with manifest.task("phase_diagram"):
        N_values = sorted(set(config.N_list))
        frame = pl.DataFrame(
            {
                "N": N_values,
                "k_break": [k_break(N) for N in N_values],
                "delta_s_threshold": [3.0 / (4.0 * N) for N in N_values],
            },
            schema={"N": pl.Int64, "k_break": pl.Float64, "delta_s_threshold": pl.Float64},
        )
        monotone = bool(np.all(np.diff(frame["k_break"].to_numpy()) < 0))
        if not monotone:
            logger.warning("k_break(N) is not strictly decreasing over the N list")

        store.put_table("phase_diagram.csv", frame)
        plotting.save_figure(
            store, "phase_diagram", plotting.phase_diagram_figure(frame), config.fmt
        )

    stats = {"N_list": N_values, "monotone": monotone, "k_break": frame["k_break"].to_list()}
    store.put_json("summary.json", stats)
    return stats


def _eigensystem_task(N: int, k: float) -> SpectralDecomposition:
    return diagonalize(build_propagator(TorusHilbert(N), k), N, k)


def track_scan(config: ScanConfig, store: ArtifactStore, manifest: RunManifest) -> dict[str, Any]:
    """Follow the strongest resonance state at the first k through the k grid.

    Rows carry the eigenphase, the overlap with the previous step and the
    Husimi mass inside the pendulum separatrix.

    Raises:
        ScanTaskError: If a diagonalization on the grid failed
        ContinuationLostError: If the state cannot be followed
    """
    N = config.N
    ks = [float(k) for k in config.k_values()]
    batch = run_tasks(
        [(_task_name(N, k), partial(_eigensystem_task, N, k)) for k in ks], config.worker_count
    )
    manifest.record_batch(batch)
    if len(batch.values) != len(ks):
        raise ScanTaskError(f"Tracking needs every k on the grid; {len(batch.failed)} failed")

    with manifest.task("track"):
        start = int(resonance_spectrum(N, ks[0]).top(1)[0])
        space = TorusHilbert(N)
        branch = track_eigenstate(space, ks, start, eigensystems=batch.values)
        libration = [
            motion_fractions(husimi(s.state, space, config.grid_size), s.k)[0] for s in branch
        ]
        frame = pl.DataFrame(
            {
                "k": [s.k for s in branch],
                "index": [s.index for s in branch],
                "eigenphase": [s.phase for s in branch],
                "overlap": [s.overlap for s in branch],
                "libration": libration,
            },
            schema={
                "k": pl.Float64,
                "index": pl.Int64,
                "eigenphase": pl.Float64,
                "overlap": pl.Float64,
                "libration": pl.Float64,
            },
        )
        store.put_table("track.csv", frame)
        plotting.save_figure(store, "track", plotting.track_figure(frame), config.fmt)

    stats = {
        "N": N,
        "start_index": start,
        "steps": len(branch),
        "min_overlap": float(frame["overlap"].min()),
    }
    store.put_json("summary.json", stats)
    return stats
