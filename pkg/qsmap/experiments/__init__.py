"""Experiment runner: scans, datasets, figures and run manifests."""

from qsmap.experiments.config import ScanConfig, resolve_config
from qsmap.experiments.gallery import (
    homoclinic_export,
    husimi_gallery,
    manifolds_export,
    special_functions_export,
)
from qsmap.experiments.inputs import ResolvedInvariants, resolve_invariants, resonance_spectrum
from qsmap.experiments.manifest import RunManifest
from qsmap.experiments.runner import (
    ExperimentError,
    ScanTaskError,
    TaskBatch,
    TaskResult,
    run_tasks,
)
from qsmap.experiments.scans import correlation_scan, ipr_scan, phase_diagram, track_scan
from qsmap.experiments.spacing import (
    SpacingAnalysis,
    TooFewStatesError,
    spacing_analysis,
    spacing_singularity,
    spectrum_report,
)

__all__ = [
    # Configuration and bookkeeping
    "ScanConfig",
    "resolve_config",
    "RunManifest",
    "TaskBatch",
    "TaskResult",
    "run_tasks",
    # Shared inputs
    "ResolvedInvariants",
    "resolve_invariants",
    "resonance_spectrum",
    # Experiments
    "correlation_scan",
    "ipr_scan",
    "phase_diagram",
    "track_scan",
    "spacing_analysis",
    "spacing_singularity",
    "spectrum_report",
    "SpacingAnalysis",
    "husimi_gallery",
    "manifolds_export",
    "homoclinic_export",
    "special_functions_export",
    # Errors
    "ExperimentError",
    "ScanTaskError",
    "TooFewStatesError",
]
