"""Experiment presets, one per CLI subcommand.

Every preset inherits from ``base``; a ``key = value`` file passed with
``--config`` and explicit flags override individual fields:

    qsmap --config scan.cfg correlation-scan --threads 8

Keys are the fields of ``qsmap.experiments.config.ScanConfig``.
"""

CONFIGURATION = {
    "base": {
        "N": 158,
        "k": 0.5,
        "N_list": [200, 400, 1000, 3000],
        "k_min": 0.0,
        "k_max": 1.8,
        "k_steps": 300,
        "k_scale": "absolute",
        # running average over k-grid points
        "window": 11,
        "intensity_threshold": 5e-3,
        "intensity_floor": 5e-6,
        # manifold point spacing
        "tol": 1e-3,
        "top_m": 7,
        "alpha": 14.0,
        "chaotic_seeds": 20,
        "chaotic_steps": 10_000,
        "chaotic_spread": 1e-3,
        "grid_size": 128,
        "manifold_length": 3.0,
        "A_max": 1.0,
        "x_window": [-3.0, 3.0],
        "special_points": 161,
        "fmt": "svg",
        "threads": 0,
        "out": "",
    },
    "correlation_scan": {
        "__inherits__": "base",
    },
    "spectrum": {
        "__inherits__": "base",
    },
    "spacing": {
        "__inherits__": "base",
    },
    # k in units of k_break(N), dense around the break
    "ipr_scan": {
        "__inherits__": "base",
        "k_scale": "k_break",
        "k_min": 0.02,
        "k_max": 1.6,
        "k_steps": 160,
    },
    "phase_diagram": {
        "__inherits__": "base",
        "N_list": [100, 158, 400, 1000, 3000, 10000, 62900],
    },
    "husimi": {
        "__inherits__": "base",
    },
    "manifolds": {
        "__inherits__": "base",
    },
    "homoclinic": {
        "__inherits__": "base",
    },
    "special_functions": {
        "__inherits__": "base",
    },
    # follows the strongest resonance state from k_min to k_max
    "track": {
        "__inherits__": "base",
        "k_min": 0.3,
        "k_max": 0.7,
        "k_steps": 81,
    },
}
