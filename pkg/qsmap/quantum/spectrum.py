"""Eigenphases, eigenvectors and resonance intensities of the Floquet operator."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np
import polars as pl
from scipy import linalg

from qsmap.classical.standard_map import stability_exponent
from qsmap.quantum.hilbert import DimensionMismatchError, QuantumError, StateVector
from qsmap.semiclassics.quantization import bohr_sommerfeld_phase

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
RESIDUAL_TOL = 1e-10
UNITARITY_TOL = 1e-8


class EigensolverError(QuantumError):
    """Raised when diagonalization fails or misses the residual bound."""

    def __init__(self, message: str, N: int | None = None, k: float | None = None):
        self.N = N
        self.k = k
        super().__init__(f"{message} (N={N}, k={k})")


@dataclass(frozen=True)
class SpectralDecomposition:
    """Full eigensystem of a unitary matrix.

    ``eigenvectors[:, i]`` belongs to ``eigenphases[i]``; phases ascend in
    [0, 2π). ``coefficients``/``intensities`` are None until a reference
    state is attached with ``spectral_decomposition``.
    """

    eigenphases: np.ndarray
    eigenvectors: np.ndarray
    N: int
    k: float | None = None
    coefficients: np.ndarray | None = None
    intensities: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.eigenphases)

    def top(self, m: int) -> np.ndarray:
        """Indices of the ``m`` largest intensities, strongest first."""
        if self.intensities is None:
            raise QuantumError("Intensities not computed; call spectral_decomposition first")
        order = np.argsort(-self.intensities, kind="stable")
        return order[:m]

    def to_frame(self) -> pl.DataFrame:
        """Rows ``k,N,index,eigenphase,intensity``."""
        n = len(self)
        intensities = self.intensities if self.intensities is not None else np.full(n, np.nan)
        return pl.DataFrame(
            {
                "k": [self.k] * n,
                "N": [self.N] * n,
                "index": list(range(n)),
                "eigenphase": self.eigenphases.tolist(),
                "intensity": intensities.tolist(),
            },
            schema={
                "k": pl.Float64,
                "N": pl.Int64,
                "index": pl.Int64,
                "eigenphase": pl.Float64,
                "intensity": pl.Float64,
            },
        )


def _fix_gauge(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component of each column real and positive."""
    cols = np.arange(vectors.shape[1])
    pivots = vectors[np.argmax(np.abs(vectors), axis=0), cols]
    return vectors * (np.abs(pivots) / pivots)[None, :]


def diagonalize(
    U: np.ndarray, N: int | None = None, k: float | None = None
) -> SpectralDecomposition:
    """Dense eigensystem of a unitary matrix via complex Schur reduction.

    For a normal matrix the Schur factor is diagonal, so the columns of Z are
    the eigenvectors.

    Raises:
        DimensionMismatchError: If U is not square
        ValueError: If U is not unitary within 1e-8
        EigensolverError: On LAPACK failure or residuals above 1e-10
    """
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise DimensionMismatchError(f"Propagator must be square, got shape {U.shape}")
    n = U.shape[0]
    N = N or n

    defect = float(np.max(np.abs(U.conj().T @ U - np.eye(n))))
    if defect > UNITARITY_TOL:
        raise ValueError(f"Matrix is not unitary: max|U†U − I| = {defect:.3g}")

    try:
        T, Z = linalg.schur(U, output="complex")
    except (linalg.LinAlgError, ValueError) as e:
        logger.error(f"Schur reduction failed for N={N}, k={k}: {e}")
        raise EigensolverError(f"Schur reduction failed: {e}", N, k)

    values = np.diag(T)
    phases = np.mod(np.angle(values), TWO_PI)
    phases[phases >= TWO_PI] = 0.0
    order = np.argsort(phases, kind="stable")
    phases = phases[order]
    vectors = _fix_gauge(Z[:, order])

    residuals = np.linalg.norm(U @ vectors - vectors * np.exp(1j * phases)[None, :], axis=0)
    worst = float(residuals.max())
    if worst > RESIDUAL_TOL:
        raise EigensolverError(f"Eigenvector residual {worst:.3g} exceeds {RESIDUAL_TOL}", N, k)

    logger.debug(f"Diagonalized N={N}, k={k}: max residual {worst:.2g}")
    return SpectralDecomposition(eigenphases=phases, eigenvectors=vectors, N=N, k=k)


def spectral_decomposition(
    eigendata: SpectralDecomposition, reference: StateVector
) -> SpectralDecomposition:
    """Attach c_i = ⟨φ_i|ref⟩ and |c_i|² to the eigensystem.

    Raises:
        DimensionMismatchError: If the reference length differs from N
    """
    reference = np.asarray(reference, dtype=complex)
    n = eigendata.eigenvectors.shape[0]
    if reference.shape != (n,):
        raise DimensionMismatchError(
            f"Reference state has shape {reference.shape}, expected ({n},)"
        )
    coefficients = eigendata.eigenvectors.conj().T @ reference
    intensities = np.abs(coefficients) ** 2
    return replace(eigendata, coefficients=coefficients, intensities=intensities)


def unwrap_phases(phases: np.ndarray, center: float) -> np.ndarray:
    """φ̃ ∈ {φ, φ ± 2π} closest to ``center``."""
    phases = np.asarray(phases, dtype=float)
    candidates = phases[..., None] + np.array([-TWO_PI, 0.0, TWO_PI])
    pick = np.argmin(np.abs(candidates - center), axis=-1)
    return np.take_along_axis(candidates, pick[..., None], axis=-1)[..., 0]


@dataclass(frozen=True)
class PhaseMoments:
    """Intensity-weighted phase moments and their semiclassical targets."""

    mean: float
    dispersion: float
    phi_bs: float
    dispersion_target: float

    @property
    def mean_offset(self) -> float:
        return self.mean - self.phi_bs


def phase_moments(decomp: SpectralDecomposition, N: int, k: float) -> PhaseMoments:
    """Mean Σ|c|²φ̃ and dispersion [Σ|c|²(φ̃ − φ_BS)²]^{1/2}, with φ_BS and λ/√2."""
    if decomp.intensities is None:
        raise QuantumError("Intensities not computed; call spectral_decomposition first")
    phi_bs = bohr_sommerfeld_phase(N, k)
    weights = decomp.intensities
    unwrapped = unwrap_phases(decomp.eigenphases, phi_bs)
    mean = float(np.sum(weights * unwrapped))
    dispersion = float(np.sqrt(np.sum(weights * (unwrapped - phi_bs) ** 2)))
    return PhaseMoments(
        mean=mean,
        dispersion=dispersion,
        phi_bs=phi_bs,
        dispersion_target=stability_exponent(k) / math.sqrt(2.0),
    )
