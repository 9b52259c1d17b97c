"""Husimi phase-space distributions on the torus."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from qsmap.quantum.hilbert import StateVector, TorusHilbert

logger = logging.getLogger(__name__)

MIN_GRID = 16
IMAGES = 3


@dataclass(frozen=True)
class HusimiGrid:
    """H(q, p) on a uniform torus grid; ``values[i, j]`` sits at (q[i], p[j])."""

    q: np.ndarray
    p: np.ndarray
    values: np.ndarray
    N: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def peak(self) -> tuple[float, float]:
        i, j = np.unravel_index(np.argmax(self.values), self.values.shape)
        return float(self.q[i]), float(self.p[j])


def coherent_states(space: TorusHilbert, q0: float, p: np.ndarray) -> np.ndarray:
    """Normalized torus coherent states |q0, p_b⟩ as rows, width √(ħ/2).

    ⟨j|q0, p0⟩ ∝ Σ_ν exp[−πN x² + 2πiN p0 x], x = j/N − q0 + ν, |ν| ≤ 3.
    """
    N = space.N
    x = space.positions[None, :] - q0 + np.arange(-IMAGES, IMAGES + 1)[:, None]
    envelope = np.exp(-math.pi * N * x * x)
    phase = np.exp(2j * math.pi * N * p[:, None, None] * x[None, :, :])
    states = np.sum(envelope[None, :, :] * phase, axis=1)
    return states / np.linalg.norm(states, axis=1, keepdims=True)


def husimi(state: StateVector, space: TorusHilbert, grid_size: int = 128) -> HusimiGrid:
    """|⟨q0, p0|ψ⟩|² on a grid_size × grid_size grid, scaled to max 1.

    Raises:
        ValueError: If grid_size < 16
        DimensionMismatchError: If the state length differs from N
    """
    if grid_size < MIN_GRID:
        raise ValueError(f"grid_size must be >= {MIN_GRID}, got {grid_size}")
    state = space.check_state(state)
    axis = np.arange(grid_size) / grid_size

    values = np.empty((grid_size, grid_size))
    for i, q0 in enumerate(axis):
        overlaps = coherent_states(space, q0, axis).conj() @ state
        values[i] = np.abs(overlaps) ** 2

    peak = values.max()
    if peak > 0:
        values /= peak
    return HusimiGrid(q=axis, p=axis.copy(), values=values, N=space.N)


def motion_fractions(grid: HusimiGrid, k: float) -> tuple[float, float]:
    """Husimi mass (libration, rotation) inside/outside the pendulum separatrix.

    The separatrix is p²/2 + (k/4π²) cos 2πq = k/4π² with p in [−1/2, 1/2).
    """
    q, p = np.meshgrid(grid.q, np.where(grid.p >= 0.5, grid.p - 1.0, grid.p), indexing="ij")
    level = k / (4.0 * math.pi**2)
    energy = 0.5 * p * p + level * np.cos(2.0 * math.pi * q)
    total = float(grid.values.sum())
    if total <= 0:
        return 0.0, 0.0
    libration = float(grid.values[energy < level].sum()) / total
    return libration, 1.0 - libration
