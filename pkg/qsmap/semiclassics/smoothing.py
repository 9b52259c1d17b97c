"""Smoothed spectral function of the resonance state.

The quantum side Σ|c_i|² g(2(φ − φ̃_i)/λβ) is compared with

    K·F̃(x)·(1 + (1/(λ√N)) Σ_j cos ψ_j / √(A_j |L_j|))

where the sum runs over homoclinic orbits with A_j < A_max. Without the
Lazutkin invariants only the two-orbit proxy cos ψ₁ + cos ψ₂ is available.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from qsmap.classical.standard_map import stability_exponent
from qsmap.semiclassics.quantization import (
    HomoclinicInvariants,
    bohr_sommerfeld_phase,
    hbar_of,
    homoclinic_phase,
    scaled_coordinate,
)
from qsmap.semiclassics.special import SemiclassicalError, ftilde

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


class MissingInvariantsError(SemiclassicalError):
    """Raised when an orbit in the smoothing sum lacks S, μ or A."""

    pass


@dataclass(frozen=True)
class SmoothingConfig:
    """Relevance cutoff A_max for dimension N, with β and K derived from it."""

    A_max: float
    N: int

    def __post_init__(self) -> None:
        if not self.A_max > 0:
            raise ValueError(f"A_max must be positive, got {self.A_max}")
        if not 2.0 * math.pi * self.N * self.A_max > 1.0:
            raise ValueError(
                f"β undefined: 2πN·A_max must exceed 1 (N={self.N}, A_max={self.A_max})"
            )

    @property
    def beta(self) -> float:
        return 2.0 / math.log(2.0 * math.pi * self.N * self.A_max)

    @property
    def K(self) -> float:
        return math.sqrt(math.pi / 8.0) * self.beta / (1.0 + self.beta)


def smoothing_kernel(y: np.ndarray | float, beta: float) -> np.ndarray | float:
    """g(y) = [sin(y)/y + β cos y]/[(1 + β²y²)(1 + β)], g(0) = 1."""
    y = np.asarray(y, dtype=float)
    value = (np.sinc(y / math.pi) + beta * np.cos(y)) / ((1.0 + beta**2 * y * y) * (1.0 + beta))
    return float(value) if np.ndim(value) == 0 else value


@dataclass(frozen=True)
class SmoothedSpectrum:
    """Semiclassical side on a phase grid; ``full`` is None without Lazutkin invariants."""

    phi: np.ndarray
    x: np.ndarray
    proxy: np.ndarray
    full: np.ndarray | None


def _validate(ho_set: Sequence[HomoclinicInvariants]) -> None:
    if not ho_set:
        raise MissingInvariantsError("Smoothing needs at least one homoclinic orbit")
    for i, inv in enumerate(ho_set):
        if inv.A is None:
            raise MissingInvariantsError(f"Homoclinic orbit {i + 1} has no relevance A")


def two_ho_proxy(
    phi_grid: np.ndarray,
    first: HomoclinicInvariants,
    second: HomoclinicInvariants,
    N: int,
    k: float,
) -> np.ndarray:
    """cos ψ₁ + cos ψ₂ = 2 cos ψ̄ · cos(Δψ/2)."""
    return np.cos(homoclinic_phase(phi_grid, first, N, k)) + np.cos(
        homoclinic_phase(phi_grid, second, N, k)
    )


def smoothed_spectral_function(
    phi_grid: np.ndarray,
    ho_set: Sequence[HomoclinicInvariants],
    N: int,
    k: float,
    config: SmoothingConfig,
) -> SmoothedSpectrum:
    """Semiclassical smoothed spectral function on ``phi_grid``.

    Orbits with A ≥ A_max are left out of the sum. If any retained orbit has
    no Lazutkin invariant, ``full`` is None and a warning is logged.

    Raises:
        MissingInvariantsError: If an orbit lacks A
    """
    _validate(ho_set)
    phi_grid = np.asarray(phi_grid, dtype=float)
    x = np.asarray(scaled_coordinate(phi_grid, N, k), dtype=float)
    proxy = np.sum([np.cos(homoclinic_phase(phi_grid, inv, N, k)) for inv in ho_set], axis=0)

    retained = [inv for inv in ho_set if inv.A < config.A_max]
    if len(retained) < len(ho_set):
        logger.debug(f"{len(ho_set) - len(retained)} orbits above A_max={config.A_max} dropped")

    full = None
    if any(inv.L is None for inv in retained):
        logger.warning(
            f"Lazutkin invariants missing at N={N}, k={k}; returning the two-orbit proxy only"
        )
    else:
        lam = stability_exponent(k)
        correction = np.zeros_like(phi_grid)
        for inv in retained:
            correction += np.cos(homoclinic_phase(phi_grid, inv, N, k)) / math.sqrt(
                inv.A * abs(inv.L)
            )
        full = config.K * np.asarray(ftilde(x)) * (1.0 + correction / (lam * math.sqrt(N)))

    return SmoothedSpectrum(phi=phi_grid, x=x, proxy=proxy, full=full)


def quantum_smoothed_spectrum(
    phi_grid: np.ndarray,
    eigenphases: np.ndarray,
    intensities: np.ndarray,
    phi_bs: float,
    lam: float,
    beta: float,
) -> np.ndarray:
    """Σ|c_i|² g(2(φ − φ̃_i)/λβ) with φ̃_i the representative nearest φ_BS."""
    phi_grid = np.asarray(phi_grid, dtype=float)
    unwrapped = phi_bs + np.remainder(np.asarray(eigenphases) - phi_bs + math.pi, TWO_PI) - math.pi
    y = 2.0 * (phi_grid[:, None] - unwrapped[None, :]) / (lam * beta)
    return np.asarray(smoothing_kernel(y, beta)) @ np.asarray(intensities, dtype=float)


def proxy_peaks(
    N: int,
    k: float,
    first: HomoclinicInvariants,
    second: HomoclinicInvariants,
    x_window: tuple[float, float] = (-3.0, 3.0),
    samples: int = 2000,
) -> np.ndarray:
    """Phases of the local maxima of the two-orbit proxy, refined to ~1e-10 in x."""
    lam = stability_exponent(k)
    phi_bs = bohr_sommerfeld_phase(N, k)
    xs = np.linspace(x_window[0], x_window[1], samples)

    def proxy_at(x: float | np.ndarray):
        return two_ho_proxy(np.asarray(phi_bs - lam * np.asarray(x)), first, second, N, k)

    values = proxy_at(xs)
    peaks = []
    for i in np.nonzero((values[1:-1] > values[:-2]) & (values[1:-1] >= values[2:]))[0] + 1:
        result = optimize.minimize_scalar(
            lambda x: -float(proxy_at(x)),
            bounds=(xs[i - 1], xs[i + 1]),
            method="bounded",
            options={"xatol": 1e-12},
        )
        peaks.append(np.mod(phi_bs - lam * result.x, TWO_PI))
    logger.debug(f"Proxy maxima at N={N}, k={k}: {len(peaks)} (ħ={hbar_of(N):.3g})")
    return np.array(sorted(peaks))
