"""Figures of the experiment outputs.

Figures are built on ``matplotlib.figure.Figure`` directly (no pyplot state)
and saved through the artifact store with a fixed SVG hash salt.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import matplotlib
import numpy as np
import polars as pl
from matplotlib.colors import LogNorm
from matplotlib.figure import Figure

from qsmap.core.storage import ArtifactMetadata, ArtifactStore
from qsmap.quantum.husimi import HusimiGrid

TWO_PI = 2.0 * math.pi
SVG_HASH_SALT = "qsmap"


def save_figure(store: ArtifactStore, key: str, fig: Figure, fmt: str = "svg") -> ArtifactMetadata:
    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT}):
        return store.put_figure(f"{key}.{fmt}", fig, fmt=fmt)


def _break_wraps(points: np.ndarray) -> np.ndarray:
    """Insert NaN rows where a torus polyline jumps across the unit cell."""
    if len(points) < 2:
        return points
    jumps = np.nonzero(np.any(np.abs(np.diff(points, axis=0)) > 0.5, axis=1))[0] + 1
    return np.insert(points.astype(float), jumps, np.nan, axis=0)


def correlation_figure(frame: pl.DataFrame, threshold: float, N: int) -> Figure:
    """Eigenphases vs k in gray with intensities above ``threshold`` in color."""
    fig = Figure(figsize=(7.0, 5.0))
    ax = fig.add_subplot()
    ax.scatter(frame["k"], frame["eigenphase"], s=0.2, c="0.7", linewidths=0, rasterized=True)
    strong = frame.filter(pl.col("intensity") > threshold)
    if len(strong):
        points = ax.scatter(
            strong["k"],
            strong["eigenphase"],
            s=2.0,
            c=strong["intensity"],
            cmap="viridis",
            norm=LogNorm(vmin=threshold, vmax=1.0),
            linewidths=0,
        )
        fig.colorbar(points, ax=ax, label=r"$|c_i|^2$")
    ax.set_xlabel("k")
    ax.set_ylabel(r"$\phi$")
    ax.set_ylim(0.0, TWO_PI)
    ax.set_title(f"Eigenphases, N={N}")
    return fig


def spacing_figure(
    quantum: pl.DataFrame, semiclassical: pl.DataFrame, phi_bs: float, N: int, k: float
) -> Figure:
    fig = Figure(figsize=(6.0, 4.0))
    ax = fig.add_subplot()
    ax.plot(quantum["phi"], quantum["spacing"], "o", ms=3, label="quantum")
    if len(semiclassical):
        ax.plot(semiclassical["phi"], semiclassical["spacing"], "x", ms=4, label="semiclassical")
    ax.axvline(phi_bs, color="k", ls="--", lw=0.8)
    ax.set_xlabel(r"$\phi_i$")
    ax.set_ylabel(r"$\phi_{i+1} - \phi_i$")
    ax.set_yscale("log")
    ax.set_title(f"Nearest-neighbour spacings, N={N}, k={k}")
    ax.legend()
    return fig


def ipr_figure(frame: pl.DataFrame, alpha: float) -> Figure:
    fig = Figure(figsize=(10.0, 4.0))
    left, right = fig.subplots(1, 2)
    for (N,), group in frame.group_by(["N"], maintain_order=True):
        left.plot(group["ratio"], group["xi_norm"], label=f"N={N}")
        right.plot(group["k"], group["pr_over_n"], label=f"N={N}")
    overlay = frame.unique(subset=["k"], maintain_order=True).sort("k")
    label = rf"{alpha:g}$\Delta S/\lambda$"
    right.plot(overlay["k"], overlay["overlay"], "k--", lw=0.8, label=label)
    left.set_xlabel(r"$k/k_{break}$")
    left.set_ylabel(r"$\xi/\xi_N$")
    right.set_xlabel("k")
    right.set_ylabel("PR/N")
    right.set_yscale("log")
    left.legend()
    right.legend()
    return fig


def phase_diagram_figure(frame: pl.DataFrame) -> Figure:
    fig = Figure(figsize=(5.0, 4.0))
    ax = fig.add_subplot()
    ax.plot(frame["N"], frame["k_break"], "o-")
    ax.set_xscale("log")
    ax.set_xlabel("N")
    ax.set_ylabel(r"$k_{break}$")
    return fig


def husimi_figure(
    grid: HusimiGrid,
    title: str,
    manifolds: Sequence[np.ndarray] = (),
    layer: np.ndarray | None = None,
) -> Figure:
    fig = Figure(figsize=(5.0, 5.0))
    ax = fig.add_subplot()
    ax.imshow(
        grid.values.T,
        origin="lower",
        extent=(0.0, 1.0, 0.0, 1.0),
        cmap="magma",
        interpolation="nearest",
    )
    if layer is not None and len(layer):
        ax.scatter(
            layer[:, 0], layer[:, 1], s=0.05, c="w", alpha=0.3, linewidths=0, rasterized=True
        )
    for curve in manifolds:
        broken = _break_wraps(curve)
        ax.plot(broken[:, 0], broken[:, 1], lw=0.5, c="c")
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(0.0, 1.0)
    ax.set_xlabel("q")
    ax.set_ylabel("p")
    ax.set_title(title)
    return fig


def manifold_figure(frame: pl.DataFrame, k: float) -> Figure:
    fig = Figure(figsize=(5.0, 5.0))
    ax = fig.add_subplot()
    colors = {"unstable": "tab:red", "stable": "tab:blue"}
    for (branch, sheet), group in frame.group_by(["branch", "sheet"], maintain_order=True):
        broken = _break_wraps(group.select("q", "p").to_numpy())
        ls = "-" if sheet == "upper" else ":"
        ax.plot(broken[:, 0], broken[:, 1], ls, lw=0.6, c=colors[branch], label=f"{branch}/{sheet}")
    ax.set_xlim(0.0, 1.0)
    ax.set_ylim(0.0, 1.0)
    ax.set_xlabel("q")
    ax.set_ylabel("p")
    ax.set_title(f"Manifolds of the unstable fixed point, k={k}")
    ax.legend(fontsize="small")
    return fig


def special_functions_figure(table: pl.DataFrame) -> Figure:
    fig = Figure(figsize=(10.0, 4.0))
    left, right = fig.subplots(1, 2)
    left.plot(table["x"], table["eta_oracle"], label="quadrature")
    left.plot(table["x"], table["eta_interp"], "--", label="interpolation")
    right.plot(table["x"], table["ftilde_oracle"], label="quadrature")
    right.plot(table["x"], table["ftilde_interp"], "--", label="interpolation")
    left.set_ylabel(r"$\eta(x)$")
    right.set_ylabel(r"$\tilde F(x)$")
    for ax in (left, right):
        ax.set_xlabel("x")
        ax.legend()
    return fig


def spectrum_figure(
    spectrum: pl.DataFrame, smoothed: pl.DataFrame, phi_bs: float, N: int, k: float
) -> Figure:
    """Resonance intensities as sticks with the smoothed quantum and semiclassical curves."""
    fig = Figure(figsize=(7.0, 4.0))
    ax = fig.add_subplot()
    ax.vlines(spectrum["eigenphase"], 0.0, spectrum["intensity"], lw=0.8, color="0.4")
    ax.plot(smoothed["phi"], smoothed["quantum"], label="quantum, smoothed")
    if smoothed["semiclassical"].null_count() < len(smoothed):
        ax.plot(smoothed["phi"], smoothed["semiclassical"], "--", label="semiclassical")
    ax.axvline(phi_bs, color="k", ls="--", lw=0.8)
    ax.set_xlabel(r"$\phi$")
    ax.set_ylabel(r"$|c_i|^2$")
    ax.set_title(f"Resonance spectrum, N={N}, k={k}")
    ax.legend()
    return fig


def track_figure(frame: pl.DataFrame) -> Figure:
    fig = Figure(figsize=(7.0, 4.0))
    left, right = fig.subplots(1, 2)
    left.plot(frame["k"], frame["eigenphase"], ".-", ms=2)
    left.set_ylabel(r"$\phi$")
    right.plot(frame["k"], frame["libration"], ".-", ms=2)
    right.set_ylabel("libration mass")
    for ax in (left, right):
        ax.set_xlabel("k")
    return fig
