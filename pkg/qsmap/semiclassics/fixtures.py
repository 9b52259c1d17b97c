"""Homoclinic invariant fixtures (relevance and Lazutkin invariants) and their lookup."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Literal

from qsmap.core.utils.config import ConfigError, load_and_resolve_config, resolve_config_inheritance
from qsmap.semiclassics.quantization import HomoclinicInvariants

logger = logging.getLogger(__name__)

REFERENCE_K = 0.5
K_MATCH_TOL = 1e-9

Provenance = Literal["computed", "fixture", "fallback"]


@dataclass(frozen=True)
class HomoclinicFixture:
    """Invariants of the two primary orbits at one k; any value may be unknown."""

    label: str
    k: float
    S_mean: float | None = None
    delta_S: float | None = None
    A_mean: float | None = None
    delta_A: float | None = None
    L: tuple[float, float] | None = None
    mu: tuple[int, int] = (0, 1)
    notes: str = ""
    reference_labels: dict[str, int] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, label: str, entry: dict[str, Any]) -> HomoclinicFixture:
        if "k" not in entry:
            raise ConfigError(f"Fixture '{label}' has no 'k'")
        L = entry.get("L")
        try:
            return cls(
                label=label,
                k=float(entry["k"]),
                S_mean=_optional_float(entry.get("S_mean")),
                delta_S=_optional_float(entry.get("delta_S")),
                A_mean=_optional_float(entry.get("A_mean")),
                delta_A=_optional_float(entry.get("delta_A")),
                L=(float(L[0]), float(L[1])) if L else None,
                mu=tuple(int(m) for m in entry.get("mu", (0, 1))),
                notes=str(entry.get("notes", "")),
                reference_labels={
                    str(key): int(value)
                    for key, value in entry.get("reference_labels", {}).items()
                },
            )
        except (TypeError, ValueError, IndexError) as e:
            raise ConfigError(f"Invalid fixture '{label}': {e}")

    def invariants(
        self,
        S_mean: float | None = None,
        delta_S: float | None = None,
        equal_relevance: bool = True,
    ) -> tuple[HomoclinicInvariants, HomoclinicInvariants]:
        """Per-orbit invariants; explicit S values override the fixture's.

        With ``equal_relevance`` both orbits get A_mean (ΔA treated as zero).

        Raises:
            ConfigError: If no action is available
        """
        S = S_mean if S_mean is not None else self.S_mean
        dS = delta_S if delta_S is not None else self.delta_S
        if S is None or dS is None:
            raise ConfigError(f"Fixture '{self.label}' has no action and none was supplied")

        A1 = A2 = self.A_mean
        if self.A_mean is not None and not equal_relevance and self.delta_A is not None:
            A1 = self.A_mean - 0.5 * self.delta_A
            A2 = self.A_mean + 0.5 * self.delta_A
        L1, L2 = self.L if self.L else (None, None)
        return (
            HomoclinicInvariants(S=S - 0.5 * dS, mu=self.mu[0], A=A1, L=L1),
            HomoclinicInvariants(S=S + 0.5 * dS, mu=self.mu[1], A=A2, L=L2),
        )


def _optional_float(value: Any) -> float | None:
    if value is None:
        return None
    value = float(value)
    return None if math.isnan(value) else value


def load_fixtures(path: str | Path | None = None) -> dict[str, HomoclinicFixture]:
    """Load fixtures from ``configs/homoclinic_fixtures.py`` or a JSON file.

    Raises:
        ConfigError: If the file is missing or malformed
    """
    if path is None:
        raw = load_and_resolve_config("configs.homoclinic_fixtures", default={})
    else:
        fixture_path = Path(path)
        if not fixture_path.exists():
            raise ConfigError(f"Fixture file not found: {fixture_path}")
        try:
            raw = json.loads(fixture_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigError(f"Fixture file {fixture_path} is not valid JSON: {e}")
        if not isinstance(raw, dict):
            raise ConfigError(f"Fixture file {fixture_path} must contain an object")
        raw = resolve_config_inheritance(raw)

    fixtures = {label: HomoclinicFixture.from_dict(label, entry) for label, entry in raw.items()}
    logger.info(f"Loaded {len(fixtures)} homoclinic fixtures")
    return fixtures


@dataclass(frozen=True)
class FixtureLookup:
    fixture: HomoclinicFixture
    provenance: Provenance


def fixture_for(
    k: float,
    fixtures: dict[str, HomoclinicFixture],
    reference_k: float = REFERENCE_K,
) -> FixtureLookup:
    """Fixture for ``k``; missing relevances fall back to the reference k with a warning.

    Raises:
        ConfigError: If neither ``k`` nor the reference k carries a relevance
    """
    exact = next((f for f in fixtures.values() if abs(f.k - k) <= K_MATCH_TOL), None)
    if exact is not None and exact.A_mean is not None:
        return FixtureLookup(exact, "fixture")

    reference = next(
        (
            f
            for f in fixtures.values()
            if abs(f.k - reference_k) <= K_MATCH_TOL and f.A_mean is not None
        ),
        None,
    )
    if reference is None:
        raise ConfigError(f"No relevance fixture for k={k} and none for reference k={reference_k}")

    logger.warning(
        f"No relevance fixture for k={k}; using A={reference.A_mean} from k={reference.k}"
    )
    base = exact or HomoclinicFixture(label=f"k{k}", k=k)
    merged = replace(base, A_mean=reference.A_mean, delta_A=reference.delta_A)
    return FixtureLookup(merged, "fallback")
