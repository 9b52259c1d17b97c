"""Phase-space outputs: Husimi gallery, manifolds, homoclinic orbits, special-function tables."""

from __future__ import annotations

import logging
import math
from dataclasses import asdict
from typing import Any

import numpy as np
import polars as pl

from qsmap.classical.estimates import lobe_area_estimate
from qsmap.classical.export import homoclinic_orbit_frame, homoclinic_payload, manifold_frame
from qsmap.classical.homoclinic import lobe_area_between, locate_primary_pair
from qsmap.classical.manifolds import ManifoldCurve, trace_manifold
from qsmap.classical.standard_map import ClassicalError, MapParams, chaotic_layer
from qsmap.core.storage import ArtifactStore
from qsmap.core.utils.config import ConfigError
from qsmap.experiments import plotting
from qsmap.experiments.config import ScanConfig
from qsmap.experiments.inputs import resolve_invariants, resonance_spectrum
from qsmap.experiments.manifest import RunManifest
from qsmap.quantum.hilbert import TorusHilbert
from qsmap.quantum.husimi import husimi, motion_fractions
from qsmap.semiclassics.fixtures import HomoclinicFixture, fixture_for
from qsmap.semiclassics.quantization import QuantizationSolution, solve_quantization
from qsmap.semiclassics.special import (
    eta_constants,
    eta_exact,
    ftilde_constants,
    ftilde_exact,
    special_function_table,
)

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
SPECIAL_RANGE = 8.0
BRANCHES = (("unstable", "upper"), ("stable", "upper"), ("unstable", "lower"), ("stable", "lower"))


def trace_separatrix(params: MapParams, length: float, tol: float) -> list[ManifoldCurve]:
    """Both branches of both separatrix sheets of z₀."""
    return [
        trace_manifold(params, branch, length, tol, sheet=sheet) for branch, sheet in BRANCHES
    ]


def state_labels(phases: np.ndarray, solutions: list[QuantizationSolution]) -> list[int]:
    """Quantization label of the solution nearest (on the circle) to each phase."""
    semi = np.array([s.phi for s in solutions])
    labels = []
    for phase in phases:
        distance = np.abs(np.remainder(semi - phase + math.pi, TWO_PI) - math.pi)
        labels.append(solutions[int(np.argmin(distance))].label)
    return labels


def husimi_gallery(
    config: ScanConfig,
    store: ArtifactStore,
    manifest: RunManifest,
    fixtures: dict[str, HomoclinicFixture],
) -> dict[str, Any]:
    """Husimi maps of the ``top_m`` strongest resonance states with classical overlays.

    File names carry the quantization label and the eigenvector index,
    e.g. ``husimi_label+1_state042.svg``; grids are also stored as arrays.
    """
    N, k = config.N, config.k
    params = MapParams(k)
    with manifest.task(f"husimi N={N},k={k:g}"):
        decomp = resonance_spectrum(N, k)
        top = decomp.top(config.top_m)

        invariants = resolve_invariants(k, fixtures, config.tol)
        for name, source in invariants.provenance.items():
            manifest.set_provenance(name, source)
        solutions = solve_quantization(N, k, invariants.mean, tuple(config.x_window))
        labels = state_labels(decomp.eigenphases[top], solutions)

        try:
            overlays = [
                c.points for c in trace_separatrix(params, config.manifold_length, config.tol)
            ]
        except ClassicalError as e:
            logger.warning(f"No manifold overlay at k={k}: {e}")
            overlays = []
        layer = chaotic_layer(
            params, config.chaotic_seeds, config.chaotic_steps, config.chaotic_spread
        )

        space = TorusHilbert(N)
        rows = []
        for index, label in zip(top, labels):
            index = int(index)
            grid = husimi(decomp.eigenvectors[:, index], space, config.grid_size)
            libration, rotation = motion_fractions(grid, k)
            name = f"husimi_label{label:+d}_state{index:03d}"
            title = f"label {label:+d}, φ={decomp.eigenphases[index]:.4f}"
            store.put_array(f"{name}.bin", grid.values, description=f"Husimi map, {title}")
            fig = plotting.husimi_figure(grid, title, overlays, layer)
            plotting.save_figure(store, name, fig, config.fmt)
            peak_q, peak_p = grid.peak()
            rows.append(
                {
                    "label": label,
                    "index": index,
                    "eigenphase": float(decomp.eigenphases[index]),
                    "intensity": float(decomp.intensities[index]),
                    "peak_q": peak_q,
                    "peak_p": peak_p,
                    "libration": libration,
                    "rotation": rotation,
                }
            )
        gallery = pl.DataFrame(rows)
        store.put_table("gallery.csv", gallery)

    stats = {"N": N, "k": k, "images": len(rows), "labels": labels}
    store.put_json("summary.json", stats)
    logger.info(f"Husimi gallery N={N}, k={k}: {len(rows)} states, labels {labels}")
    return stats


def manifolds_export(
    config: ScanConfig, store: ArtifactStore, manifest: RunManifest
) -> dict[str, Any]:
    """Polylines of the four separatrix branches at ``config.k``."""
    k = config.k
    with manifest.task(f"manifolds k={k:g}"):
        curves = trace_separatrix(MapParams(k), config.manifold_length, config.tol)
        frame = manifold_frame(curves)
        store.put_table("manifolds.csv", frame)
        plotting.save_figure(store, "manifolds", plotting.manifold_figure(frame, k), config.fmt)

    stats = {
        "k": k,
        "points": len(frame),
        "curves": [
            {"branch": c.branch, "sheet": c.sheet, "points": len(c), "arc_length": c.arc_length}
            for c in curves
        ],
    }
    store.put_json("summary.json", stats)
    return stats


def homoclinic_export(
    config: ScanConfig,
    store: ArtifactStore,
    manifest: RunManifest,
    fixtures: dict[str, HomoclinicFixture],
) -> dict[str, Any]:
    """Primary homoclinic orbits, their actions and the lobe area at ``config.k``.

    Relevances are attached from fixtures when available; the record
    provenance tells computed, fixture and fallback values apart.
    """
    k = config.k
    params = MapParams(k)
    with manifest.task(f"homoclinic k={k:g}"):
        pair = locate_primary_pair(params, config.tol)
        records = list(pair.records)
        manifest.set_provenance("S", "computed")
        try:
            lookup = fixture_for(k, fixtures)
        except ConfigError as e:
            logger.warning(f"No relevance fixture usable at k={k}: {e}")
        else:
            fixture = lookup.fixture
            L = fixture.L or (None, None)
            records = [
                record.with_invariants(A=fixture.A_mean, L=L[i], source=lookup.provenance)
                for i, record in enumerate(records)
            ]
            manifest.set_provenance("A", lookup.provenance)

        payload = homoclinic_payload(records, k)
        area = lobe_area_between(pair)
        estimate = lobe_area_estimate(k)
        payload["lobe_area"] = area
        payload["lobe_area_estimate"] = estimate
        payload["action_vs_lobe"] = abs(payload["delta_S"] - area) / area

        store.put_json("homoclinic.json", payload)
        store.put_table(
            "orbits.csv", pl.concat([homoclinic_orbit_frame(r) for r in records], how="vertical")
        )

    logger.info(
        f"Homoclinic orbits at k={k}: S={payload['S_mean']:.6f}, "
        f"ΔS={payload['delta_S']:.4g}, lobe area {area:.4g} (estimate {estimate:.4g})"
    )
    return {
        key: payload[key]
        for key in ("k", "S_mean", "delta_S", "lobe_area", "lobe_area_estimate", "action_vs_lobe")
    }


def special_functions_export(
    config: ScanConfig, store: ArtifactStore, manifest: RunManifest
) -> dict[str, Any]:
    """Interpolation formulas against quadrature on x ∈ [−8, 8], plus the constants."""
    with manifest.task("special_functions"):
        xs = np.linspace(-SPECIAL_RANGE, SPECIAL_RANGE, config.special_points)
        table = pl.DataFrame(special_function_table(xs)).with_columns(
            pl.Series("eta_exact", np.asarray(eta_exact(xs))),
            pl.Series("ftilde_exact", np.asarray(ftilde_exact(xs))),
        )
        store.put_table("special_functions.csv", table)
        fig = plotting.special_functions_figure(table)
        plotting.save_figure(store, "special_functions", fig, config.fmt)

    stats = {
        "points": len(table),
        "eta_max_error": float((table["eta_interp"] - table["eta_oracle"]).abs().max()),
        "ftilde_max_error": float((table["ftilde_interp"] - table["ftilde_oracle"]).abs().max()),
        "eta_constants": asdict(eta_constants()),
        "ftilde_constants": asdict(ftilde_constants()),
    }
    store.put_json("constants.json", stats)
    logger.info(
        f"Special functions: max |η − oracle| = {stats['eta_max_error']:.2g}, "
        f"max |F̃ − oracle| = {stats['ftilde_max_error']:.2g}"
    )
    return stats
