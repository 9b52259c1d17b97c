"""Floquet propagator of the kicked quantum standard map.

    U = F⁻¹ · D_kin · F · D_pot

D_pot = exp(−i(kN/2π) cos 2πq_j) is the potential kick V/ħ with
V(q) = (k/4π²) cos 2πq, D_kin = exp(−iπm²/N) = exp(−ip_m²/2ħ) the free
rotation on the symmetric momentum window, and F the unitary DFT.
"""

from __future__ import annotations

import logging
import math

import numpy as np
from scipy import fft

from qsmap.quantum.hilbert import StateVector, TorusHilbert

logger = logging.getLogger(__name__)


def potential_phases(space: TorusHilbert, k: float) -> np.ndarray:
    """Diagonal of D_pot in the position basis."""
    return np.exp(-1j * (k * space.N / (2.0 * math.pi)) * np.cos(2.0 * math.pi * space.positions))


def kinetic_phases(space: TorusHilbert) -> np.ndarray:
    """Diagonal of D_kin in FFT order."""
    m = space.momentum_indices.astype(float)
    return np.exp(-1j * math.pi * m * m / space.N)


def build_propagator(space: TorusHilbert, k: float) -> np.ndarray:
    """Dense N×N Floquet matrix in the position basis.

    Raises:
        ValueError: If k is negative or not finite
    """
    if not math.isfinite(k) or k < 0:
        raise ValueError(f"k must be finite and non-negative, got {k}")
    kicked = np.diag(potential_phases(space, k))
    momentum = fft.fft(kicked, axis=0, norm="ortho")
    momentum *= kinetic_phases(space)[:, None]
    return fft.ifft(momentum, axis=0, norm="ortho")


def apply_propagator(state: StateVector, space: TorusHilbert, k: float) -> StateVector:
    """U|ψ⟩ by two FFTs, without assembling the matrix."""
    state = space.check_state(state)
    momentum = fft.fft(potential_phases(space, k) * state, norm="ortho")
    return fft.ifft(kinetic_phases(space) * momentum, norm="ortho")


def unitarity_defect(U: np.ndarray) -> float:
    """max |U†U − I|."""
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))
