"""Semiclassical quantization of the fixed-point resonance."""

from qsmap.semiclassics.fixtures import (
    FixtureLookup,
    HomoclinicFixture,
    fixture_for,
    load_fixtures,
)
from qsmap.semiclassics.quantization import (
    HomoclinicInvariants,
    InterferenceDiagnostics,
    InvalidRelevanceError,
    MissingRelevanceError,
    NoRootsInWindowError,
    QuantizationSolution,
    autocorrelation_estimate,
    bohr_sommerfeld_phase,
    homoclinic_phase,
    interference_diagnostics,
    interference_factor,
    mean_spacing_estimate,
    quantization_frame,
    scaled_coordinate,
    solve_quantization,
)
from qsmap.semiclassics.smoothing import (
    MissingInvariantsError,
    SmoothedSpectrum,
    SmoothingConfig,
    proxy_peaks,
    quantum_smoothed_spectrum,
    smoothed_spectral_function,
    smoothing_kernel,
    two_ho_proxy,
)
from qsmap.semiclassics.special import (
    QuadratureError,
    SemiclassicalError,
    eta,
    eta_constants,
    eta_exact,
    eta_oracle,
    eta_oracle_grid,
    ftilde,
    ftilde_constants,
    ftilde_exact,
    ftilde_oracle,
    special_function_table,
)

__all__ = [
    # Special functions
    "eta",
    "eta_oracle",
    "eta_oracle_grid",
    "eta_exact",
    "eta_constants",
    "ftilde",
    "ftilde_oracle",
    "ftilde_exact",
    "ftilde_constants",
    "special_function_table",
    # Quantization
    "HomoclinicInvariants",
    "QuantizationSolution",
    "InterferenceDiagnostics",
    "bohr_sommerfeld_phase",
    "scaled_coordinate",
    "homoclinic_phase",
    "solve_quantization",
    "interference_factor",
    "interference_diagnostics",
    "mean_spacing_estimate",
    "autocorrelation_estimate",
    "quantization_frame",
    # Smoothing
    "SmoothingConfig",
    "SmoothedSpectrum",
    "smoothing_kernel",
    "smoothed_spectral_function",
    "two_ho_proxy",
    "proxy_peaks",
    "quantum_smoothed_spectrum",
    # Fixtures
    "HomoclinicFixture",
    "FixtureLookup",
    "load_fixtures",
    "fixture_for",
    # Errors
    "SemiclassicalError",
    "QuadratureError",
    "MissingRelevanceError",
    "MissingInvariantsError",
    "NoRootsInWindowError",
    "InvalidRelevanceError",
]
