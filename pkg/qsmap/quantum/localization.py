"""Localization measures of the resonance state in the eigenbasis."""

from __future__ import annotations

import math

import numpy as np

NORM_TOL = 1e-6


def _checked(intensities: np.ndarray) -> np.ndarray:
    intensities = np.asarray(intensities, dtype=float)
    total = float(intensities.sum())
    if intensities.size == 0 or abs(total - 1.0) > NORM_TOL:
        raise ValueError(f"Intensities must sum to 1, got {total:.8g}")
    return intensities


def ipr(intensities: np.ndarray) -> float:
    """Inverse participation ratio ξ = Σ|c_i|⁴."""
    intensities = _checked(intensities)
    return float(np.sum(intensities**2))


def participation_ratio(intensities: np.ndarray) -> float:
    """1/ξ, the number of eigenstates the resonance effectively spreads over."""
    return 1.0 / ipr(intensities)


def xi_n(N: int) -> float:
    """Small-k reference ξ_N = 3/(3.75 + ln N)."""
    return 3.0 / (3.75 + math.log(N))


def effective_dimension(N: int, chaotic_fraction: float) -> float:
    """N_eff ≈ N·A, with A the phase-space fraction of the chaotic component."""
    if not 0.0 <= chaotic_fraction <= 1.0:
        raise ValueError(f"chaotic_fraction must lie in [0, 1], got {chaotic_fraction}")
    return N * chaotic_fraction
