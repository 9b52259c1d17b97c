"""Gaussian resonance state centred on the unstable fixed point."""

from __future__ import annotations

import logging
import math

import numpy as np

from qsmap.classical.standard_map import stability_exponent
from qsmap.quantum.hilbert import QuantumError, StateVector, TorusHilbert, normalize
from qsmap.quantum.propagator import apply_propagator

logger = logging.getLogger(__name__)


class DegeneratePacketError(QuantumError):
    """Raised when the packet width degenerates (k too small)."""

    pass


def _packet(q: np.ndarray, space: TorusHilbert, k: float, sinh_lam: float) -> np.ndarray:
    prefactor = (sinh_lam / (math.pi * space.hbar)) ** 0.25
    return prefactor * np.exp(-(q * q / (2.0 * space.hbar)) * (sinh_lam + 0.5j * k))


def resonance_state(space: TorusHilbert, k: float) -> StateVector:
    """|z₀⟩ with ⟨j|z₀⟩ = W(j/N) + W(j/N − 1), normalized.

    W(q) = (sinh λ/πħ)^{1/4} exp[−(q²/2ħ)(sinh λ + ik/2)]

    Raises:
        DegeneratePacketError: If sinh λ/(πħ) underflows
    """
    if k <= 0:
        raise DegeneratePacketError(f"Resonance state needs k > 0, got {k}")
    sinh_lam = math.sinh(stability_exponent(k))
    width = sinh_lam / (math.pi * space.hbar)
    if not math.isfinite(width) or width <= np.finfo(float).tiny:
        raise DegeneratePacketError(
            f"Packet width parameter sinh(λ)/(πħ)={width:.3g} underflows at N={space.N}, k={k}"
        )

    q = space.positions
    amplitudes = _packet(q, space, k, sinh_lam) + _packet(q - 1.0, space, k, sinh_lam)
    try:
        return normalize(amplitudes)
    except QuantumError as e:
        raise DegeneratePacketError(f"Resonance state vanished at N={space.N}, k={k}: {e}")


def autocorrelation(space: TorusHilbert, k: float) -> complex:
    """One-step return amplitude ⟨z₀|U|z₀⟩."""
    z0 = resonance_state(space, k)
    value = complex(np.vdot(z0, apply_propagator(z0, space, k)))
    logger.debug(f"<z0|U|z0> at N={space.N}, k={k}: |.|={abs(value):.6f}")
    return value
