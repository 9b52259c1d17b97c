"""Shared inputs of the experiments: resonance spectra and homoclinic invariants."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from qsmap.classical.homoclinic import find_primary_homoclinic
from qsmap.classical.standard_map import MapParams
from qsmap.quantum.hilbert import TorusHilbert
from qsmap.quantum.propagator import build_propagator
from qsmap.quantum.resonance import resonance_state
from qsmap.quantum.spectrum import SpectralDecomposition, diagonalize, spectral_decomposition
from qsmap.semiclassics.fixtures import HomoclinicFixture, fixture_for
from qsmap.semiclassics.quantization import HomoclinicInvariants

logger = logging.getLogger(__name__)


def resonance_spectrum(N: int, k: float) -> SpectralDecomposition:
    """Eigensystem of U(k) on C^N with the resonance-state intensities attached."""
    space = TorusHilbert(N)
    eigendata = diagonalize(build_propagator(space, k), N, k)
    return spectral_decomposition(eigendata, resonance_state(space, k))


@dataclass(frozen=True)
class ResolvedInvariants:
    """Invariants of the two primary orbits and where S and A came from."""

    k: float
    first: HomoclinicInvariants
    second: HomoclinicInvariants
    provenance: dict[str, str]

    @property
    def mean(self) -> HomoclinicInvariants:
        return HomoclinicInvariants.mean(self.first, self.second)

    @property
    def delta_S(self) -> float:
        return self.second.S - self.first.S


def resolve_invariants(
    k: float, fixtures: dict[str, HomoclinicFixture], tol: float = 1e-3
) -> ResolvedInvariants:
    """S from the fixture at ``k`` when present, else from the manifolds; A from fixtures.

    Raises:
        ConfigError: If no relevance is available at ``k`` or at the reference k
        ClassicalError: If the homoclinic search fails
    """
    lookup = fixture_for(k, fixtures)
    fixture = lookup.fixture
    provenance = {"A": lookup.provenance}

    if fixture.S_mean is not None and fixture.delta_S is not None:
        S_mean, delta_S = fixture.S_mean, fixture.delta_S
        provenance["S"] = "fixture"
    else:
        first, second = find_primary_homoclinic(MapParams(k), tol)
        S_mean, delta_S = 0.5 * (first.S + second.S), second.S - first.S
        provenance["S"] = "computed"
        logger.info(f"Computed homoclinic actions at k={k}: S={S_mean:.6f}, ΔS={delta_S:.3g}")

    first_inv, second_inv = fixture.invariants(S_mean, delta_S)
    return ResolvedInvariants(k=k, first=first_inv, second=second_inv, provenance=provenance)
