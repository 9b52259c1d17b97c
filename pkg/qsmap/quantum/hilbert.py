"""N-dimensional Hilbert space of the quantized torus."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy import fft

StateVector = npt.NDArray[np.complex128]


class QuantumError(Exception):
    """Base exception for quantum map errors."""

    pass


class DimensionMismatchError(QuantumError, ValueError):
    """Raised when a dimension is invalid or arrays disagree with the Hilbert space."""

    pass


@dataclass(frozen=True)
class TorusHilbert:
    """Torus Hilbert space with ħ = 1/(2πN).

    Positions are q_j = j/N; momenta p_m = m/N on the symmetric window
    m ∈ {−⌊N/2⌋, …, ⌈N/2⌉−1}. Boundary (Bloch) angles are zero.
    """

    N: int
    bloch_angles: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 2:
            raise DimensionMismatchError(f"N must be an integer >= 2, got {self.N}")
        object.__setattr__(self, "N", int(self.N))
        if any(angle != 0.0 for angle in self.bloch_angles):
            raise ValueError(
                "Only periodic boundary conditions are supported, "
                f"got Bloch angles {self.bloch_angles}"
            )

    @property
    def hbar(self) -> float:
        return 1.0 / (2.0 * math.pi * self.N)

    @property
    def positions(self) -> np.ndarray:
        return np.arange(self.N) / self.N

    @property
    def momentum_indices(self) -> np.ndarray:
        """Symmetric-window momentum integers in FFT output order."""
        return np.rint(fft.fftfreq(self.N, d=1.0 / self.N)).astype(int)

    @property
    def momenta(self) -> np.ndarray:
        return self.momentum_indices / self.N

    def check_state(self, state: np.ndarray, name: str = "state") -> StateVector:
        """Return ``state`` as a complex vector of length N.

        Raises:
            DimensionMismatchError: If the length differs from N
        """
        state = np.asarray(state, dtype=complex)
        if state.shape != (self.N,):
            raise DimensionMismatchError(f"{name} has shape {state.shape}, expected ({self.N},)")
        return state


def normalize(state: np.ndarray) -> StateVector:
    """Scale a state vector to unit Euclidean norm.

    Raises:
        QuantumError: If the norm is zero or not finite
    """
    state = np.asarray(state, dtype=complex)
    norm = np.linalg.norm(state)
    if not np.isfinite(norm) or norm == 0.0:
        raise QuantumError(f"Cannot normalize a state with norm {norm}")
    return state / norm
