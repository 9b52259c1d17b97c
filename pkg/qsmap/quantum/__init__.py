"""Quantum standard map on the N-dimensional torus Hilbert space."""

from qsmap.quantum.hilbert import (
    DimensionMismatchError,
    QuantumError,
    StateVector,
    TorusHilbert,
    normalize,
)
from qsmap.quantum.husimi import HusimiGrid, coherent_states, husimi, motion_fractions
from qsmap.quantum.localization import effective_dimension, ipr, participation_ratio, xi_n
from qsmap.quantum.propagator import apply_propagator, build_propagator, unitarity_defect
from qsmap.quantum.resonance import DegeneratePacketError, autocorrelation, resonance_state
from qsmap.quantum.spectrum import (
    EigensolverError,
    PhaseMoments,
    SpectralDecomposition,
    diagonalize,
    phase_moments,
    spectral_decomposition,
    unwrap_phases,
)
from qsmap.quantum.tracking import ContinuationLostError, TrackedState, track_eigenstate

__all__ = [
    "TorusHilbert",
    "StateVector",
    "normalize",
    "build_propagator",
    "apply_propagator",
    "unitarity_defect",
    "resonance_state",
    "autocorrelation",
    "SpectralDecomposition",
    "PhaseMoments",
    "diagonalize",
    "spectral_decomposition",
    "unwrap_phases",
    "phase_moments",
    "ipr",
    "participation_ratio",
    "xi_n",
    "effective_dimension",
    "HusimiGrid",
    "coherent_states",
    "husimi",
    "motion_fractions",
    "TrackedState",
    "track_eigenstate",
    # Errors
    "QuantumError",
    "DimensionMismatchError",
    "EigensolverError",
    "DegeneratePacketError",
    "ContinuationLostError",
]
