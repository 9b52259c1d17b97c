#!/usr/bin/env python
"""Run a sequence of qsmap experiments into one output directory.

Without arguments the quick experiments run in this order:

1. Special functions (interpolation vs quadrature).
2. Manifolds and primary homoclinic orbits at the preset k.
3. Spectrum, spacing singularity and Husimi gallery at the preset (N, k).
4. Phase diagram k_break(N).

``--full`` adds the correlation scan and the IPR scan, which take minutes to
hours depending on the N list. Each step writes its own manifest; the script
exits with the worst exit code of the steps.
"""

from __future__ import annotations

import argparse
import logging

from qsmap.experiments.cli import main as qsmap_main

logger = logging.getLogger(__name__)

QUICK_STEPS = [
    "special-functions",
    "manifolds",
    "homoclinic",
    "spectrum",
    "spacing",
    "husimi",
    "phase-diagram",
]
FULL_STEPS = ["correlation-scan", "ipr-scan"]


def main() -> int:
    """Run the selected experiments one after another."""

    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    parser = argparse.ArgumentParser(description="Run the qsmap experiments in sequence")
    parser.add_argument("--out", required=True, help="Output directory shared by all steps")
    parser.add_argument("--config", help="key = value file applied to every step")
    parser.add_argument("--threads", type=int, help="Worker threads for the scans")
    parser.add_argument("--seed-fixtures", help="JSON homoclinic fixtures")
    parser.add_argument("--full", action="store_true", help="Include the long scans")
    parser.add_argument(
        "--only", nargs="+", choices=QUICK_STEPS + FULL_STEPS, help="Run just these steps"
    )
    args = parser.parse_args()

    steps = args.only or (QUICK_STEPS + FULL_STEPS if args.full else QUICK_STEPS)
    common = ["--out", args.out]
    if args.config:
        common += ["--config", args.config]
    if args.threads:
        common += ["--threads", str(args.threads)]
    if args.seed_fixtures:
        common += ["--seed-fixtures", args.seed_fixtures]

    worst = 0
    for step in steps:
        logger.info(f"Running step {step}…")
        try:
            code = qsmap_main([*common, step])
        except Exception as exc:  # pragma: no cover - script level error handling
            logger.error(f"Step {step} crashed: {exc}")
            code = 1
        if code:
            logger.warning(f"Step {step} exited with {code}")
        worst = max(worst, code)

    logger.info(f"Finished {len(steps)} steps (worst exit code {worst})")
    return worst


if __name__ == "__main__":
    raise SystemExit(main())
