"""Adiabatic continuation of one eigenstate along a grid of k values."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from qsmap.quantum.hilbert import QuantumError, StateVector, TorusHilbert
from qsmap.quantum.propagator import build_propagator
from qsmap.quantum.spectrum import SpectralDecomposition, diagonalize

logger = logging.getLogger(__name__)

MIN_OVERLAP = 0.5


class ContinuationLostError(QuantumError):
    """Raised when no eigenvector at the next k overlaps the tracked one above 0.5."""

    def __init__(self, k: float, overlap: float):
        self.k = k
        self.overlap = overlap
        super().__init__(f"Lost the tracked state at k={k}: best overlap {overlap:.3f}")


@dataclass(frozen=True)
class TrackedState:
    k: float
    index: int
    phase: float
    state: StateVector
    overlap: float


def track_eigenstate(
    space: TorusHilbert,
    k_grid: Sequence[float],
    start_index: int,
    min_overlap: float = MIN_OVERLAP,
    eigensystems: Sequence[SpectralDecomposition] | None = None,
) -> list[TrackedState]:
    """Follow eigenvector ``start_index`` of the first k through the grid.

    At each step the eigenvector with the largest |⟨v_prev|v_new⟩| is taken.
    Precomputed ``eigensystems`` (one per k) skip the diagonalizations.

    Raises:
        ContinuationLostError: When the best overlap is at or below ``min_overlap``
    """
    k_grid = [float(k) for k in k_grid]
    if not k_grid:
        return []
    if eigensystems is not None and len(eigensystems) != len(k_grid):
        raise ValueError(f"Got {len(eigensystems)} eigensystems for {len(k_grid)} k values")

    def eigensystem(i: int) -> SpectralDecomposition:
        if eigensystems is not None:
            return eigensystems[i]
        return diagonalize(build_propagator(space, k_grid[i]), space.N, k_grid[i])

    first = eigensystem(0)
    if not 0 <= start_index < space.N:
        raise IndexError(f"start_index {start_index} outside 0..{space.N - 1}")
    current = first.eigenvectors[:, start_index]
    branch = [
        TrackedState(
            k=k_grid[0],
            index=start_index,
            phase=float(first.eigenphases[start_index]),
            state=current,
            overlap=1.0,
        )
    ]

    for i in range(1, len(k_grid)):
        decomp = eigensystem(i)
        overlaps = np.abs(decomp.eigenvectors.conj().T @ current)
        best = int(np.argmax(overlaps))
        if overlaps[best] <= min_overlap:
            logger.error(f"Continuation lost at k={k_grid[i]} (overlap {overlaps[best]:.3f})")
            raise ContinuationLostError(k_grid[i], float(overlaps[best]))
        current = decomp.eigenvectors[:, best]
        branch.append(
            TrackedState(
                k=k_grid[i],
                index=best,
                phase=float(decomp.eigenphases[best]),
                state=current,
                overlap=float(overlaps[best]),
            )
        )

    logger.info(
        f"Tracked state {start_index} over {len(k_grid)} k values "
        f"(min overlap {min(s.overlap for s in branch):.3f})"
    )
    return branch
