"""Primary homoclinic orbits of z₀, their actions and the lobe area between them.

Intersections of the upper unstable and stable branches are located as sign
changes of the signed distance from the unstable curve to the stable curve,
then refined with Brent's method on the unstable arc parameter. Distances are
measured against the exact parametrizations, so lobes much thinner than the
polyline tolerance are still resolved.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np
from scipy import optimize

from qsmap.classical.manifolds import (
    ManifoldCurve,
    ManifoldParametrization,
    nearest_segment,
    trace_manifold,
)
from qsmap.classical.standard_map import (
    ClassicalError,
    LiftedOrbit,
    MapParams,
    PhasePoint,
    generating_function,
    stability_exponent,
)

logger = logging.getLogger(__name__)

DEFAULT_MASLOV = (0, 1)
SEARCH_WINDOW = (0.15, 0.85)
APEX = 0.5
ENDPOINT_TOL = 1e-13
ACTION_ENDPOINT_TOL = 1e-12
MIN_TAIL_STEPS = 10
MIN_CROSSING_ANGLE = 1e-9
TAIL_INCREMENT = 1e-16
FOOT_NEIGHBOURS = 1
FOOT_XTOL = 1e-14
CONFIRM_SAMPLES = 3
ROOT_XTOL = 1e-13
LOBE_SAMPLES = 20_000
MAX_K = 2.0


class NoIntersectionFound(ClassicalError):
    """Raised when the manifolds show no transversal crossing in the search window."""

    pass


class TangencyDetected(ClassicalError):
    """Raised when the manifolds cross at an angle below the threshold."""

    pass


class NonConvergentActionSum(ClassicalError):
    """Raised when an orbit's endpoints do not approach lifts of z₀."""

    pass


@dataclass(frozen=True)
class HomoclinicRecord:
    """A primary homoclinic orbit with its canonical invariants.

    ``A`` and ``L`` are not computed here; they are attached from fixtures with
    ``with_invariants``. ``provenance`` maps invariant names to
    ``computed | fixture | fallback``.
    """

    index: int
    seed_point: PhasePoint
    orbit: LiftedOrbit
    S: float
    mu: int
    A: float | None = None
    L: float | None = None
    lifted_seed: PhasePoint | None = None
    arc_params: tuple[float, float] = (math.nan, math.nan)
    crossing_angle: float = math.nan
    provenance: dict[str, str] = field(default_factory=lambda: {"S": "computed", "mu": "computed"})

    def with_invariants(
        self, A: float | None = None, L: float | None = None, source: str = "fixture"
    ) -> HomoclinicRecord:
        provenance = dict(self.provenance)
        if A is not None:
            provenance["A"] = source
        if L is not None:
            provenance["L"] = source
        return replace(
            self,
            A=A if A is not None else self.A,
            L=L if L is not None else self.L,
            provenance=provenance,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "seed_point": {"q": self.seed_point.q, "p": self.seed_point.p},
            "lifted_seed": (
                {"q": self.lifted_seed.q, "p": self.lifted_seed.p} if self.lifted_seed else None
            ),
            "S": self.S,
            "mu": self.mu,
            "A": self.A,
            "L": self.L,
            "orbit_length": len(self.orbit),
            "arc_params": list(self.arc_params),
            "crossing_angle": self.crossing_angle,
            "provenance": dict(self.provenance),
        }


@dataclass(frozen=True)
class _Crossing:
    t_u: float
    t_s: float
    point: np.ndarray
    angle: float


@dataclass
class HomoclinicSearch:
    """Parametrized upper branches of z₀ and the crossings found between them.

    The stable polyline gives a coarse foot point for any point of the unstable
    branch; ``project`` refines it on the exact stable parametrization inside
    the neighbouring segments.
    """

    params: MapParams
    unstable: ManifoldParametrization
    stable: ManifoldParametrization
    unstable_curve: ManifoldCurve
    stable_curve: ManifoldCurve
    crossings: list[_Crossing] = field(default_factory=list)

    def coarse_distance(self, t_u: np.ndarray) -> np.ndarray:
        """Signed distance from W_u(t_u) to the stable polyline, vectorized."""
        return nearest_segment(self.unstable.evaluate(t_u), self.stable_curve.lifted).signed

    def project(self, t_u: float) -> tuple[float, float]:
        """Foot parameter on the exact stable branch and the signed distance of W_u(t_u).

        The signed distance is cross(Ŝ', U − S) at the foot point, positive
        when the unstable point lies to the left of the stable branch.
        """
        u = self.unstable.evaluate(float(t_u))
        arc = self.stable_curve.arc_params
        foot = nearest_segment(u[None, :], self.stable_curve.lifted)
        i = int(foot.index[0])
        lo = arc[max(i - FOOT_NEIGHBOURS, 0)]
        hi = arc[min(i + 1 + FOOT_NEIGHBOURS, len(arc) - 1)]

        # (U − S(t))·S'(t) is positive before the foot and negative after it
        def residual(t_s: float) -> float:
            return float((u - self.stable.evaluate(t_s)) @ self.stable.tangent(t_s))

        if residual(lo) * residual(hi) < 0:
            t_s = float(optimize.brentq(residual, lo, hi, xtol=FOOT_XTOL))
        else:
            logger.debug(f"No foot bracket at t_u={t_u}; using the polyline foot")
            t_s = float(arc[i] + foot.fraction[0] * (arc[i + 1] - arc[i]))

        tangent = self.stable.tangent(t_s)
        offset = u - self.stable.evaluate(t_s)
        cross = tangent[0] * offset[1] - tangent[1] * offset[0]
        return t_s, float(cross / np.linalg.norm(tangent))

    def crossing_at(self, t_u: float) -> _Crossing:
        t_s, _ = self.project(t_u)
        du = self.unstable.tangent(t_u)
        ds = self.stable.tangent(t_s)
        sine = abs(du[0] * ds[1] - du[1] * ds[0]) / (np.linalg.norm(du) * np.linalg.norm(ds))
        angle = float(math.asin(min(sine, 1.0)))
        return _Crossing(t_u=t_u, t_s=t_s, point=self.unstable.evaluate(t_u), angle=angle)


def _sign_changes(values: np.ndarray) -> np.ndarray:
    signs = np.sign(values)
    return np.nonzero(signs[:-1] * signs[1:] < 0)[0]


def locate_crossings(
    params: MapParams,
    tol: float = 1e-3,
    window: tuple[float, float] = SEARCH_WINDOW,
    min_angle: float = MIN_CROSSING_ANGLE,
) -> HomoclinicSearch:
    """Trace the upper branches and find every crossing with window[0] < q < window[1].

    Candidate brackets come from sign changes of the distance to the stable
    polyline; each is confirmed on the exact distance at the neighbouring
    samples before Brent's method refines it.

    Raises:
        NoIntersectionFound: If no sign change of the signed distance is found
        TangencyDetected: If a crossing angle is below ``min_angle``
    """
    unstable_curve = trace_manifold(
        params, "unstable", target_arc_length=10.0, tol=tol, position_limit=window[1] + 0.05
    )
    stable_curve = trace_manifold(
        params, "stable", target_arc_length=10.0, tol=tol, position_limit=window[0] - 0.05
    )
    search = HomoclinicSearch(
        params=params,
        unstable=ManifoldParametrization(params, "unstable"),
        stable=ManifoldParametrization(params, "stable"),
        unstable_curve=unstable_curve,
        stable_curve=stable_curve,
    )

    q = unstable_curve.lifted[:, 0]
    inside = (q > window[0]) & (q < window[1])
    t_grid = unstable_curve.arc_params[inside]
    if len(t_grid) < 2:
        raise NoIntersectionFound(
            f"Unstable branch does not reach the search window at k={params.k}"
        )

    coarse = search.coarse_distance(t_grid)
    # within tol² of the polyline the chord error can flip the coarse sign
    near = np.nonzero(np.abs(coarse) <= tol**2)[0]
    flagged = sorted(set(_sign_changes(coarse).tolist()) | set(near.tolist()))
    logger.debug(f"k={params.k}: {len(flagged)} candidate samples of {len(t_grid)}")

    exact: dict[int, float] = {}
    last = len(t_grid) - 1
    for i in flagged:
        for j in range(max(i - CONFIRM_SAMPLES, 0), min(i + 1 + CONFIRM_SAMPLES, last) + 1):
            if j not in exact:
                exact[j] = search.project(t_grid[j])[1]
    brackets = [j for j in sorted(exact) if j + 1 in exact and exact[j] * exact[j + 1] < 0]

    if not brackets:
        raise NoIntersectionFound(
            f"No crossing of the manifolds in {window} at k={params.k} (tol={tol})"
        )

    def signed_distance(t: float) -> float:
        return search.project(t)[1]

    for j in brackets:
        t_root = optimize.brentq(signed_distance, t_grid[j], t_grid[j + 1], xtol=ROOT_XTOL)
        crossing = search.crossing_at(t_root)
        if crossing.angle < min_angle:
            raise TangencyDetected(
                f"Manifolds cross at angle {crossing.angle:.3g} rad near "
                f"q={crossing.point[0]:.6f} (k={params.k})"
            )
        search.crossings.append(crossing)
    logger.debug(f"k={params.k}: {len(search.crossings)} crossings confirmed")
    return search


def _chain(
    parametrization: ManifoldParametrization, t_start: float, params: MapParams
) -> np.ndarray:
    """Points W(t_start − n), n = 1, 2, … until within the endpoint tolerance of the base."""
    rate = stability_exponent(params.k)
    needed = math.log(ENDPOINT_TOL / parametrization.delta) / rate
    steps = int(math.ceil(t_start - needed)) + MIN_TAIL_STEPS
    t = t_start - np.arange(1, steps + 1)
    return parametrization.evaluate(t)


def _orbit_through(search: HomoclinicSearch, crossing: _Crossing) -> LiftedOrbit:
    """Full lifted orbit from near (0, 0) to near (1, 0) through the crossing."""
    backward = _chain(search.unstable, crossing.t_u, search.params)[::-1]
    # stable parameter decreases under T
    forward = _chain(search.stable, crossing.t_s, search.params)
    positions = np.vstack([backward, crossing.point[None, :], forward])
    return LiftedOrbit.from_positions(
        positions[:, 0],
        p_first=float(positions[0, 1]),
        direction="forward",
        start_index=len(backward),
    )


def homoclinic_action(
    orbit: LiftedOrbit, params: MapParams, endpoint_tol: float = ACTION_ENDPOINT_TOL
) -> float:
    """S = Σ_t [F(q_t, q_{t+1}) − F(0, 0)] along a lifted orbit, tails below 1e-16 dropped.

    Raises:
        NonConvergentActionSum: If either endpoint is farther than
            ``endpoint_tol`` from a lift of z₀
    """
    for label, i in (("first", 0), ("last", -1)):
        q, p = float(orbit.q[i]), float(orbit.p[i])
        miss = max(abs(q - round(q)), abs(p - round(p)))
        if miss > endpoint_tol:
            raise NonConvergentActionSum(
                f"The {label} orbit point ({q:.3g}, {p:.3g}) is {miss:.3g} away from a lift of z₀"
            )

    if len(orbit) < 2:
        return 0.0
    terms = generating_function(orbit.q[:-1], orbit.q[1:], params.k) - generating_function(
        0.0, 0.0, params.k
    )
    significant = np.nonzero(np.abs(terms) >= TAIL_INCREMENT)[0]
    if significant.size == 0:
        return 0.0
    # both tails close on z₀ with zero increment
    return math.fsum(terms[significant[0] : significant[-1] + 1].tolist())


@dataclass(frozen=True)
class PrimaryPair:
    """The two primary homoclinic records and the crossings they were built from."""

    records: tuple[HomoclinicRecord, HomoclinicRecord]
    search: HomoclinicSearch
    crossings: tuple[_Crossing, _Crossing]


def _select_primary(search: HomoclinicSearch) -> tuple[_Crossing, _Crossing]:
    crossings = sorted(search.crossings, key=lambda c: c.t_u)
    a = min(range(len(crossings)), key=lambda i: abs(crossings[i].point[0] - APEX))

    def distinct(c: _Crossing) -> bool:
        gap = abs(c.t_u - crossings[a].t_u) % 1.0
        return 1e-6 < gap < 1.0 - 1e-6

    after = [c for c in crossings[a + 1 :] if distinct(c)]
    before = [c for c in crossings[:a][::-1] if distinct(c)]
    if after:
        return crossings[a], after[0]
    if before:
        return before[0], crossings[a]
    raise NoIntersectionFound(
        f"Only one primary orbit found at k={search.params.k}; refine tol or widen the window"
    )


def locate_primary_pair(
    params: MapParams,
    tol: float = 1e-3,
    maslov: tuple[int, int] = DEFAULT_MASLOV,
) -> PrimaryPair:
    """Locate both primary homoclinic orbits and keep the search state for lobe areas."""
    if not 0 < params.k <= MAX_K:
        raise NoIntersectionFound(f"k={params.k} outside the supported range (0, {MAX_K}]")

    search = locate_crossings(params, tol)
    first, second = _select_primary(search)

    built = []
    for crossing in (first, second):
        orbit = _orbit_through(search, crossing)
        built.append((homoclinic_action(orbit, params), crossing, orbit))
    built.sort(key=lambda item: item[0])

    records = tuple(
        HomoclinicRecord(
            index=i + 1,
            seed_point=PhasePoint(float(c.point[0]), float(c.point[1])).reduced(),
            orbit=orbit,
            S=action,
            mu=maslov[i],
            lifted_seed=PhasePoint(float(c.point[0]), float(c.point[1])),
            arc_params=(c.t_u, c.t_s),
            crossing_angle=c.angle,
        )
        for i, (action, c, orbit) in enumerate(built)
    )
    logger.info(
        f"Primary homoclinic orbits at k={params.k}: S1={records[0].S:.9f}, "
        f"S2={records[1].S:.9f}, dS={records[1].S - records[0].S:.4g}"
    )
    return PrimaryPair(records=records, search=search, crossings=(first, second))


def find_primary_homoclinic(
    params: MapParams,
    tol: float = 1e-3,
    maslov: tuple[int, int] = DEFAULT_MASLOV,
) -> tuple[HomoclinicRecord, HomoclinicRecord]:
    """The two primary homoclinic orbits of z₀, ordered by action (S₁ < S₂).

    Raises:
        NoIntersectionFound: If k is outside (0, 2] or no crossings are found
        TangencyDetected: If the manifolds cross too shallowly
    """
    return locate_primary_pair(params, tol, maslov).records


def lobe_area_between(pair: PrimaryPair, samples: int = LOBE_SAMPLES) -> float:
    """Shoelace area enclosed by the unstable and stable arcs between the two crossings."""
    first, second = sorted(pair.crossings, key=lambda c: c.t_u)
    search = pair.search
    upper = search.unstable.evaluate(np.linspace(first.t_u, second.t_u, samples))
    lower = search.stable.evaluate(np.linspace(second.t_s, first.t_s, samples))
    polygon = np.vstack([upper, lower[1:-1]]) - first.point
    x, y = polygon[:, 0], polygon[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)))


def lobe_area(params: MapParams, tol: float = 1e-3, samples: int = LOBE_SAMPLES) -> float:
    """ΔS as the area of the lobe between adjacent primary homoclinic points."""
    area = lobe_area_between(locate_primary_pair(params, tol), samples)
    logger.debug(f"Lobe area at k={params.k}: {area:.6g}")
    return area
