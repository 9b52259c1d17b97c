"""Bohr–Sommerfeld phase, homoclinic phases and the two-orbit quantization condition.

Eigenphases near φ_BS are labelled by the scaled coordinate
x = (φ_BS − φ)/λ and solve

    ψ(φ) = S/ħ − μπ/2 + x·η(x) + x·ln(A/ħ) = 2πn

with the mean invariants of the two primary homoclinic orbits.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import polars as pl
from scipy import optimize

from qsmap.classical.estimates import lobe_area_estimate
from qsmap.classical.homoclinic import HomoclinicRecord
from qsmap.classical.standard_map import stability_exponent
from qsmap.semiclassics.special import SemiclassicalError, eta

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
DEFAULT_X_WINDOW = (-3.0, 3.0)
ROOT_SAMPLES = 200
RESIDUAL_TOL = 1e-9


class MissingRelevanceError(SemiclassicalError):
    """Raised when a homoclinic phase needs a relevance A that is absent."""

    pass


class InvalidRelevanceError(SemiclassicalError, ValueError):
    """Raised when a relevance is non-positive or does not exceed ħ."""

    pass


class NoRootsInWindowError(SemiclassicalError):
    """Raised when the quantization condition has no root in the x window."""

    pass


def hbar_of(N: int) -> float:
    return 1.0 / (2.0 * math.pi * N)


@dataclass(frozen=True)
class HomoclinicInvariants:
    """Canonical invariants (S, μ, A, L) of one homoclinic orbit.

    ``mu`` is an integer for a single orbit and 1/2 for the mean of the two
    primary orbits.
    """

    S: float
    mu: float
    A: float | None = None
    L: float | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.S):
            raise ValueError(f"Homoclinic action must be finite, got {self.S}")
        if self.A is not None and not self.A > 0:
            raise InvalidRelevanceError(f"Relevance must be positive, got {self.A}")

    @classmethod
    def from_record(cls, record: HomoclinicRecord) -> HomoclinicInvariants:
        return cls(S=record.S, mu=record.mu, A=record.A, L=record.L)

    @classmethod
    def mean(
        cls, first: HomoclinicInvariants, second: HomoclinicInvariants
    ) -> HomoclinicInvariants:
        """Averaged invariants; A is None unless both orbits carry one."""
        A = None
        if first.A is not None and second.A is not None:
            A = 0.5 * (first.A + second.A)
        return cls(S=0.5 * (first.S + second.S), mu=0.5 * (first.mu + second.mu), A=A)


@dataclass(frozen=True)
class QuantizationSolution:
    """Root of the quantization condition; ``label`` is n₀ − n."""

    n: int
    x: float
    phi: float
    label: int = 0
    residual: float = 0.0


def bohr_sommerfeld_phase(N: int, k: float) -> float:
    """φ_BS = (−kN/2π) mod 2π in [0, 2π)."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    phase = math.fmod(-k * N / TWO_PI, TWO_PI)
    if phase < 0:
        phase += TWO_PI
    # a multiple of 2π can land one ulp below 2π
    if phase >= TWO_PI - 1e-12:
        phase = 0.0
    return phase


def scaled_coordinate(phi: np.ndarray | float, N: int, k: float) -> np.ndarray | float:
    """x = (φ_BS − φ̃)/λ with φ̃ the representative of φ closest to φ_BS."""
    phi_bs = bohr_sommerfeld_phase(N, k)
    offset = np.remainder(np.asarray(phi, dtype=float) - phi_bs + math.pi, TWO_PI) - math.pi
    x = -offset / stability_exponent(k)
    return float(x) if np.ndim(x) == 0 else x


def _psi_of_x(x: np.ndarray | float, inv: HomoclinicInvariants, hbar: float):
    if inv.A is None:
        raise MissingRelevanceError("Homoclinic phase requires the relevance A")
    x = np.asarray(x, dtype=float)
    return inv.S / hbar - inv.mu * math.pi / 2.0 + x * eta(x) + x * math.log(inv.A / hbar)


def homoclinic_phase(
    phi: np.ndarray | float, inv: HomoclinicInvariants, N: int, k: float
) -> np.ndarray | float:
    """ψ(φ) = S/ħ − μπ/2 + x·η(x) + x·ln(A/ħ), x = (φ_BS − φ)/λ.

    Raises:
        MissingRelevanceError: If ``inv.A`` is None
    """
    value = _psi_of_x(scaled_coordinate(phi, N, k), inv, hbar_of(N))
    return float(value) if np.ndim(value) == 0 else value


def solve_quantization(
    N: int,
    k: float,
    inv_mean: HomoclinicInvariants,
    x_window: tuple[float, float] = DEFAULT_X_WINDOW,
    samples: int = ROOT_SAMPLES,
) -> list[QuantizationSolution]:
    """All roots of ψ = 2πn with x in the window, ordered by n.

    ψ is sampled on ``samples`` points, sign changes of ψ − 2πn are bracketed
    for every integer n in range and refined with Brent's method.

    Raises:
        MissingRelevanceError: If ``inv_mean.A`` is None
        NoRootsInWindowError: If no integer n is reached inside the window
    """
    hbar = hbar_of(N)
    lam = stability_exponent(k)
    phi_bs = bohr_sommerfeld_phase(N, k)

    xs = np.linspace(x_window[0], x_window[1], samples)
    psi = _psi_of_x(xs, inv_mean, hbar)
    if not np.all(np.diff(psi) > 0):
        logger.warning(f"ψ is not monotone on x in {x_window} (N={N}, k={k})")

    n_values = range(
        int(math.ceil(psi.min() / TWO_PI)), int(math.floor(psi.max() / TWO_PI)) + 1
    )
    roots: list[tuple[int, float, float]] = []
    for n in n_values:
        shifted = psi - TWO_PI * n
        for i in np.nonzero(np.sign(shifted[:-1]) * np.sign(shifted[1:]) <= 0)[0]:
            if shifted[i] == 0.0 and i > 0:
                continue
            x_root = optimize.brentq(
                lambda x: float(_psi_of_x(x, inv_mean, hbar)) - TWO_PI * n,
                xs[i],
                xs[i + 1],
                xtol=1e-15,
            )
            residual = abs(float(_psi_of_x(x_root, inv_mean, hbar)) - TWO_PI * n)
            if residual > RESIDUAL_TOL:
                raise SemiclassicalError(
                    f"Quantization residual {residual:.3g} for n={n} exceeds {RESIDUAL_TOL}"
                )
            roots.append((n, x_root, residual))

    if not roots:
        raise NoRootsInWindowError(
            f"No quantization roots for x in {x_window} (N={N}, k={k}, ψ in "
            f"[{psi.min():.3f}, {psi.max():.3f}])"
        )

    n0 = min(roots, key=lambda r: abs(r[1]))[0]
    solutions = [
        QuantizationSolution(
            n=n,
            x=x,
            phi=float(np.mod(phi_bs - lam * x, TWO_PI)),
            label=n0 - n,
            residual=residual,
        )
        for n, x, residual in sorted(roots)
    ]
    logger.debug(f"Quantization N={N}, k={k}: {len(solutions)} roots, n0={n0}")
    return solutions


def interference_factor(N: int, k: float, delta_S: float | None = None) -> float:
    """cos(Δψ/2) with Δψ = ΔS/ħ − π/2; vanishes at ΔS/ħ = 3π/2.

    Without ``delta_S`` the lobe-area estimate at ``k`` is used.
    """
    if delta_S is None:
        delta_S = lobe_area_estimate(k)
    delta_psi = delta_S / hbar_of(N) - math.pi / 2.0
    return math.cos(delta_psi / 2.0)


@dataclass(frozen=True)
class InterferenceDiagnostics:
    delta_psi: float
    factor: float
    survives: bool


def interference_diagnostics(
    N: int, k: float, delta_S: float | None = None
) -> InterferenceDiagnostics:
    """Δψ, the interference factor and whether the precursor survives (factor > 0)."""
    if delta_S is None:
        delta_S = lobe_area_estimate(k)
    factor = interference_factor(N, k, delta_S)
    return InterferenceDiagnostics(
        delta_psi=delta_S / hbar_of(N) - math.pi / 2.0, factor=factor, survives=factor > 0
    )


def mean_spacing_estimate(N: int, k: float, A: float) -> tuple[float, float]:
    """(Δφ, count) with Δφ = λ/ln(A/ħ) and count = 2σ_φ/Δφ = √2·ln(A/ħ).

    Raises:
        InvalidRelevanceError: If A <= ħ
    """
    hbar = hbar_of(N)
    if A <= hbar:
        raise InvalidRelevanceError(f"Relevance A={A} must exceed ħ={hbar:.4g}")
    log_ratio = math.log(A / hbar)
    return stability_exponent(k) / log_ratio, math.sqrt(2.0) * log_ratio


def autocorrelation_estimate(N: int, k: float) -> complex:
    """⟨z₀|U|z₀⟩ ≈ e^{iφ_BS}/√cosh λ."""
    return complex(
        np.exp(1j * bohr_sommerfeld_phase(N, k)) / math.sqrt(math.cosh(stability_exponent(k)))
    )


def quantization_frame(solutions: Sequence[QuantizationSolution]) -> pl.DataFrame:
    """Rows ``n,label,x,phi``."""
    return pl.DataFrame(
        {
            "n": [s.n for s in solutions],
            "label": [s.label for s in solutions],
            "x": [s.x for s in solutions],
            "phi": [s.phi for s in solutions],
        },
        schema={"n": pl.Int64, "label": pl.Int64, "x": pl.Float64, "phi": pl.Float64},
    )
