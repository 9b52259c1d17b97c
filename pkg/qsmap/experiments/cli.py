#!/usr/bin/env python
"""Command-line runner for the standard map experiments.

Each subcommand resolves its configuration (preset < ``--config`` file <
flags), writes its datasets and figures through an artifact store rooted at
``--out`` and finishes with ``manifest.json`` listing every file with its
SHA-256.

Exit codes: 0 success, 2 failed or cancelled tasks (see the manifest),
1 configuration error.
"""

from __future__ import annotations

import argparse
import logging
from collections.abc import Callable, Sequence
from typing import Any

from qsmap.core.storage import ArtifactStore, BackendConfigError, BackendNotFoundError
from qsmap.core.storage.backends import FilesystemBackend, PrefixedBackend
from qsmap.core.utils.config import ConfigError
from qsmap.experiments.config import ScanConfig, resolve_config
from qsmap.experiments.gallery import (
    homoclinic_export,
    husimi_gallery,
    manifolds_export,
    special_functions_export,
)
from qsmap.experiments.manifest import RunManifest
from qsmap.experiments.runner import TaskResult
from qsmap.experiments.scans import correlation_scan, ipr_scan, phase_diagram, track_scan
from qsmap.experiments.spacing import spacing_singularity, spectrum_report
from qsmap.semiclassics.fixtures import HomoclinicFixture, load_fixtures

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PARTIAL = 2

Experiment = Callable[..., dict[str, Any]]


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def open_store(config: ScanConfig) -> ArtifactStore:
    """Store under ``<out>/<experiment>/``, or the named ``runs`` store without ``--out``."""
    if config.out:
        return ArtifactStore(PrefixedBackend(FilesystemBackend(config.out), config.experiment))
    return ArtifactStore.from_name(f"runs.{config.experiment}")


def _run(
    args: argparse.Namespace,
    experiment: Experiment,
    overrides: dict[str, Any],
    needs_fixtures: bool = False,
) -> int:
    try:
        config = resolve_config(
            args.command,
            args.config,
            {"out": args.out, "threads": args.threads, **overrides},
        )
        fixtures: dict[str, HomoclinicFixture] = (
            load_fixtures(args.seed_fixtures) if needs_fixtures else {}
        )
        store = open_store(config)
    except (ConfigError, BackendConfigError, BackendNotFoundError) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG

    manifest = RunManifest(config=config)
    logger.info(f"Running {config.experiment} with {config.worker_count} threads")
    try:
        if needs_fixtures:
            manifest.summary = experiment(config, store, manifest, fixtures)
        else:
            manifest.summary = experiment(config, store, manifest)
    except KeyboardInterrupt:
        logger.warning(f"{config.experiment} interrupted")
        manifest.interrupted = True
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        manifest.write(store)
        return EXIT_CONFIG
    except Exception as e:
        logger.error(f"{config.experiment} failed: {e}")
        if not manifest.tasks or all(t.ok for t in manifest.tasks):
            manifest.tasks.append(_failure(config.experiment, e))

    manifest.write(store)
    if manifest.partial:
        logger.warning(f"{config.experiment} finished with failures; see manifest.json")
        return EXIT_PARTIAL
    return EXIT_OK


def _failure(name: str, error: Exception) -> TaskResult:
    return TaskResult(name, "failed", error=f"{type(error).__name__}: {error}")


def cmd_correlation_scan(args: argparse.Namespace) -> int:
    return _run(
        args,
        correlation_scan,
        {"N": args.N, "k_min": args.k_min, "k_max": args.k_max, "k_steps": args.k_steps},
    )


def cmd_spectrum(args: argparse.Namespace) -> int:
    return _run(args, spectrum_report, {"N": args.N, "k": args.k}, needs_fixtures=True)


def cmd_spacing(args: argparse.Namespace) -> int:
    return _run(
        args,
        spacing_singularity,
        {"N": args.N, "k": args.k, "intensity_floor": args.floor},
        needs_fixtures=True,
    )


def cmd_ipr_scan(args: argparse.Namespace) -> int:
    return _run(
        args,
        ipr_scan,
        {"N_list": args.N_list, "window": args.window, "k_steps": args.k_steps},
    )


def cmd_phase_diagram(args: argparse.Namespace) -> int:
    return _run(args, phase_diagram, {"N_list": args.N_list})


def cmd_husimi(args: argparse.Namespace) -> int:
    return _run(
        args,
        husimi_gallery,
        {"N": args.N, "k": args.k, "top_m": args.top_m},
        needs_fixtures=True,
    )


def cmd_manifolds(args: argparse.Namespace) -> int:
    return _run(args, manifolds_export, {"k": args.k, "manifold_length": args.length})


def cmd_homoclinic(args: argparse.Namespace) -> int:
    return _run(args, homoclinic_export, {"k": args.k}, needs_fixtures=True)


def cmd_special_functions(args: argparse.Namespace) -> int:
    return _run(args, special_functions_export, {"special_points": args.points})


def cmd_track(args: argparse.Namespace) -> int:
    return _run(
        args,
        track_scan,
        {"N": args.N, "k_min": args.k_min, "k_max": args.k_max, "k_steps": args.k_steps},
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsmap",
        description="Kicked quantum standard map laboratory: scans, spectra and phase-space maps",
    )
    parser.add_argument("--config", help="key = value file overriding the experiment preset")
    parser.add_argument("--out", help="Output directory (default: QSMAP_OUTPUT_PATH or var/runs)")
    parser.add_argument("--threads", type=int, help="Worker threads (default: QSMAP_THREADS or 1)")
    parser.add_argument(
        "--seed-fixtures", help="JSON file with homoclinic invariant fixtures (A, L, S, ΔS)"
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Callable[[argparse.Namespace], int], help_text: str):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        return p

    def add_k_grid(p: argparse.ArgumentParser) -> None:
        p.add_argument("--k-min", type=float, help="First point of the k grid")
        p.add_argument("--k-max", type=float, help="Last point of the k grid")
        p.add_argument("--k-steps", type=int, help="Number of k values")

    p = add("correlation-scan", cmd_correlation_scan, "Eigenphases and intensities vs k")
    p.add_argument("--N", type=int, help="Hilbert space dimension")
    add_k_grid(p)

    p = add("spectrum", cmd_spectrum, "Spectrum, moments and quantization at one (N, k)")
    p.add_argument("--N", type=int)
    p.add_argument("--k", type=float)

    p = add("spacing", cmd_spacing, "Nearest-neighbour spacing singularity at φ_BS")
    p.add_argument("--N", type=int)
    p.add_argument("--k", type=float)
    p.add_argument("--floor", type=float, help="Intensity floor for state selection")

    p = add("ipr-scan", cmd_ipr_scan, "Normalized IPR against k/k_break for several N")
    p.add_argument("--N-list", dest="N_list", type=_int_list, help="Comma-separated N values")
    p.add_argument("--window", type=int, help="Running-average window (odd)")
    p.add_argument("--k-steps", type=int)

    p = add("phase-diagram", cmd_phase_diagram, "k_break as a function of N")
    p.add_argument("--N-list", dest="N_list", type=_int_list)

    p = add("husimi", cmd_husimi, "Husimi maps of the strongest resonance states")
    p.add_argument("--N", type=int)
    p.add_argument("--k", type=float)
    p.add_argument("--top-m", dest="top_m", type=int, help="Number of states (<= 12)")

    p = add("manifolds", cmd_manifolds, "Stable and unstable manifolds of z₀")
    p.add_argument("--k", type=float)
    p.add_argument("--length", type=float, help="Arc length per branch")

    p = add("homoclinic", cmd_homoclinic, "Primary homoclinic orbits and lobe area")
    p.add_argument("--k", type=float)

    p = add("special-functions", cmd_special_functions, "η and F̃: interpolation vs quadrature")
    p.add_argument("--points", type=int, help="Grid points on [-8, 8]")

    p = add("track", cmd_track, "Follow the strongest resonance state through k")
    p.add_argument("--N", type=int)
    add_k_grid(p)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    return args.handler(args)


if __name__ == "__main__":
    raise SystemExit(main())
