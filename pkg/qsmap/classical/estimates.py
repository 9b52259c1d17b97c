"""Closed-form lobe-area estimate and the strong-perturbation threshold derived from it."""

from __future__ import annotations

import logging
import math

from scipy import optimize

logger = logging.getLogger(__name__)

K_BRACKET_LOW = 1e-3


def lobe_area_estimate(k: float) -> float:
    """ΔS(k) ≈ 6π(1 − 0.341·k^{1/3})·exp(−π²/√k)."""
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    return 6.0 * math.pi * (1.0 - 0.341 * k ** (1.0 / 3.0)) * math.exp(-(math.pi**2) / math.sqrt(k))


def _estimate_peak() -> tuple[float, float]:
    result = optimize.minimize_scalar(
        lambda k: -lobe_area_estimate(k), bounds=(1.0, 25.0), method="bounded"
    )
    return float(result.x), -float(result.fun)


def k_break(N: int, rtol: float = 1e-6) -> float:
    """k at which the lobe area reaches 3/(4N), i.e. ΔS/ħ = 3π/2.

    The estimate increases on (0, k_peak] with k_peak ≈ 10; the root is
    bracketed on [1e-3, k_peak].

    Raises:
        ValueError: If N < 2 or 3/(4N) exceeds the estimate's maximum
    """
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    threshold = 3.0 / (4.0 * N)
    k_peak, peak = _estimate_peak()
    if threshold >= peak:
        raise ValueError(
            f"No strong-perturbation threshold for N={N}: 3/(4N)={threshold:.4g} "
            f"exceeds the maximal lobe area {peak:.4g}"
        )
    root = optimize.brentq(
        lambda k: lobe_area_estimate(k) - threshold, K_BRACKET_LOW, k_peak, rtol=rtol
    )
    logger.debug(f"k_break({N}) = {root:.6f}")
    return float(root)


def n_break(k: float) -> float:
    """N = 3/(4ΔS(k)) at which structure at perturbation k breaks."""
    return 3.0 / (4.0 * lobe_area_estimate(k))
