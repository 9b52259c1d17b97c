"""Stable and unstable manifolds of the hyperbolic fixed point z₀ = (0, 0).

A branch is parametrized on the lift by a continuous parameter t ≥ 0:

    W(t) = T^{±⌊t⌋}(base + δ·Λ^{t−⌊t⌋}·v)

with δ the seed distance, Λ = e^λ, v the eigenvector of the branch, and the
forward map for the unstable branch (inverse map for the stable one). Then
T(W_u(t)) = W_u(t + 1) and T(W_s(t)) = W_s(t − 1), so any point of the
polyline can be recomputed exactly instead of interpolated.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from qsmap.classical.standard_map import (
    ClassicalError,
    MapParams,
    PhasePoint,
    eigendirections,
    lift_step,
    stability_exponent,
)

logger = logging.getLogger(__name__)

Branch = Literal["stable", "unstable"]
Sheet = Literal["upper", "lower"]

SEED_DISTANCE = 1e-8
SPACING_TOL = 1e-3
ANGLE_TOL = 0.2
SAMPLES_PER_UNIT = 8
MAX_POINTS = 200_000
MAX_UNITS = 400


class RefinementBudgetExceeded(ClassicalError):
    """Raised when adaptive refinement needs more points than allowed."""

    pass


@dataclass(frozen=True)
class ManifoldParametrization:
    """Exact parametrization of one manifold branch on the lift."""

    params: MapParams
    branch: Branch
    sheet: Sheet = "upper"
    delta: float = SEED_DISTANCE
    base: tuple[float, float] = field(init=False)
    direction: tuple[float, float] = field(init=False)
    multiplier: float = field(init=False)

    def __post_init__(self) -> None:
        unstable, stable = eigendirections(self.params)
        sign = 1.0 if self.sheet == "upper" else -1.0
        if self.branch == "unstable":
            base = (0.0, 0.0)
            vector = sign * unstable
        else:
            base = (sign * 1.0, 0.0)
            vector = sign * stable
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "direction", (float(vector[0]), float(vector[1])))
        object.__setattr__(self, "multiplier", math.exp(stability_exponent(self.params.k)))

    @property
    def map_direction(self) -> int:
        """+1 when points move along the branch under T, −1 under T⁻¹."""
        return 1 if self.branch == "unstable" else -1

    def evaluate(self, t: np.ndarray | float) -> np.ndarray:
        """Lifted points W(t); returns shape (..., 2).

        Negative t stays in the linear regime next to the base point.
        """
        t = np.asarray(t, dtype=float)
        n = np.maximum(np.floor(t), 0.0).astype(int)
        frac = t - n
        radius = self.delta * self.multiplier**frac
        # iterated about the origin, then translated; the lift commutes with integer shifts of q
        q = radius * self.direction[0]
        p = radius * self.direction[1]

        steps = int(n.max()) if n.size else 0
        for step in range(steps):
            active = n > step
            q_next, p_next = lift_step(q, p, self.params, self.map_direction)
            q = np.where(active, q_next, q)
            p = np.where(active, p_next, p)
        return np.stack([q + self.base[0], p + self.base[1]], axis=-1)

    def tangent(self, t: np.ndarray | float, h: float = 1e-6) -> np.ndarray:
        """dW/dt by central differences."""
        t = np.asarray(t, dtype=float)
        return (self.evaluate(t + h) - self.evaluate(t - h)) / (2.0 * h)


@dataclass(frozen=True)
class ManifoldCurve:
    """Adaptively refined polyline of one manifold branch.

    ``lifted`` keeps the real-line coordinates used for geometry; ``points``
    are the torus representatives.
    """

    branch: Branch
    sheet: Sheet
    k: float
    arc_params: np.ndarray
    lifted: np.ndarray
    arc_length: float
    tol: float

    @property
    def points(self) -> np.ndarray:
        return np.mod(self.lifted, 1.0)

    @property
    def phase_points(self) -> list[PhasePoint]:
        return [PhasePoint(float(q), float(p)) for q, p in self.points]

    def __len__(self) -> int:
        return len(self.arc_params)


def _turning_angles(points: np.ndarray) -> np.ndarray:
    """Turning angle at each interior vertex (length len(points) − 2)."""
    seg = np.diff(points, axis=0)
    a, b = seg[:-1], seg[1:]
    cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    dot = np.einsum("ij,ij->i", a, b)
    return np.abs(np.arctan2(cross, dot))


def _refine_unit(
    parametrization: ManifoldParametrization,
    t: np.ndarray,
    spacing_tol: float,
    angle_tol: float,
    budget: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Insert midpoints in t until spacing and turning-angle thresholds hold."""
    pts = parametrization.evaluate(t)
    for _ in range(64):
        spacing = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        split = spacing > spacing_tol
        if len(pts) > 2:
            bent = _turning_angles(pts) > angle_tol
            split[:-1] |= bent
            split[1:] |= bent
        split &= np.diff(t) > 1e-12
        if not split.any():
            return t, pts
        if len(t) + int(split.sum()) > budget:
            raise RefinementBudgetExceeded(
                f"Manifold refinement needs more than {budget} points "
                f"(k={parametrization.params.k}, branch={parametrization.branch})"
            )
        mids = 0.5 * (t[:-1] + t[1:])[split]
        t = np.sort(np.concatenate([t, mids]))
        pts = parametrization.evaluate(t)
    logger.warning("Manifold refinement stopped after 64 passes")
    return t, pts


def _crossed(points: np.ndarray, parametrization: ManifoldParametrization, limit: float) -> int:
    """Index of the first point past the position limit, or −1."""
    q = points[:, 0]
    moving_right = parametrization.direction[0] > 0
    hits = np.nonzero(q >= limit if moving_right else q <= limit)[0]
    return int(hits[0]) if hits.size else -1


def trace_manifold(
    params: MapParams,
    branch: Branch,
    target_arc_length: float = 1.0,
    tol: float = SPACING_TOL,
    *,
    sheet: Sheet = "upper",
    angle_tol: float = ANGLE_TOL,
    delta: float = SEED_DISTANCE,
    samples_per_unit: int = SAMPLES_PER_UNIT,
    max_points: int = MAX_POINTS,
    position_limit: float | None = None,
) -> ManifoldCurve:
    """Trace a manifold branch of z₀ as an adaptively refined polyline.

    Args:
        params: Map parameters (k > 0)
        branch: "unstable" or "stable"
        target_arc_length: Stop once the polyline is this long (lifted coordinates)
        tol: Maximum spacing between adjacent points
        sheet: "upper" (towards p > 0) or "lower" separatrix sheet
        angle_tol: Maximum turning angle at a vertex, radians
        delta: Seed distance from z₀ along the eigenvector
        samples_per_unit: Initial samples per unit of the arc parameter
        max_points: Refinement budget
        position_limit: Optional lifted q at which tracing stops instead

    Returns:
        ManifoldCurve with monotone arc parameters

    Raises:
        ValueError: If k <= 0 or tol <= 0
        RefinementBudgetExceeded: If the budget is exhausted before the target
    """
    if params.k <= 0:
        raise ValueError("Manifolds require k > 0")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")

    parametrization = ManifoldParametrization(params, branch, sheet, delta)
    t_all = [np.array([0.0])]
    pts_all = [parametrization.evaluate(np.array([0.0]))]
    length = 0.0
    count = 1

    for unit in range(MAX_UNITS):
        t = unit + np.arange(1, samples_per_unit + 1) / samples_per_unit
        t = np.concatenate([[float(unit)], t])
        t, pts = _refine_unit(parametrization, t, tol, angle_tol, max_points - count)
        t, pts = t[1:], pts[1:]

        segment = np.linalg.norm(np.diff(np.vstack([pts_all[-1][-1:], pts]), axis=0), axis=1)
        cumulative = length + np.cumsum(segment)

        stop = -1
        if position_limit is not None:
            stop = _crossed(pts, parametrization, position_limit)
        reached = np.nonzero(cumulative >= target_arc_length)[0]
        if reached.size and (stop < 0 or reached[0] < stop):
            stop = int(reached[0])

        if stop >= 0:
            t_all.append(t[: stop + 1])
            pts_all.append(pts[: stop + 1])
            length = float(cumulative[stop])
            break

        t_all.append(t)
        pts_all.append(pts)
        length = float(cumulative[-1])
        count += len(t)
    else:
        raise RefinementBudgetExceeded(
            f"Arc length {length:.3g} < {target_arc_length} after {MAX_UNITS} iterations"
        )

    arc_params = np.concatenate(t_all)
    lifted = np.vstack(pts_all)
    logger.debug(
        f"Traced {branch}/{sheet} manifold at k={params.k}: "
        f"{len(arc_params)} points, arc length {length:.4f}"
    )
    return ManifoldCurve(
        branch=branch,
        sheet=sheet,
        k=params.k,
        arc_params=arc_params,
        lifted=lifted,
        arc_length=length,
        tol=tol,
    )


@dataclass(frozen=True)
class SegmentFoot:
    """Nearest polyline segment of each query point.

    ``signed`` is positive when the point lies to the left of the polyline
    direction.
    """

    index: np.ndarray
    fraction: np.ndarray
    distance: np.ndarray
    signed: np.ndarray


def nearest_segment(points: np.ndarray, polyline: np.ndarray, chunk: int = 512) -> SegmentFoot:
    """Foot of each point on the nearest segment of a polyline."""
    points = np.atleast_2d(points)
    a = polyline[:-1]
    ab = np.diff(polyline, axis=0)
    ab_len2 = np.maximum(np.einsum("ij,ij->i", ab, ab), np.finfo(float).tiny)

    index = np.empty(len(points), dtype=int)
    fraction = np.empty(len(points))
    distance = np.empty(len(points))
    for start in range(0, len(points), chunk):
        block = points[start : start + chunk]
        ap = block[:, None, :] - a[None, :, :]
        s = np.clip(np.einsum("mij,ij->mi", ap, ab) / ab_len2, 0.0, 1.0)
        nearest = a[None, :, :] + s[..., None] * ab[None, :, :]
        dist = np.linalg.norm(block[:, None, :] - nearest, axis=2)
        best = np.argmin(dist, axis=1)
        rows = np.arange(len(block))
        index[start : start + chunk] = best
        fraction[start : start + chunk] = s[rows, best]
        distance[start : start + chunk] = dist[rows, best]

    seg = ab[index]
    offset = points - (a[index] + fraction[:, None] * seg)
    cross = seg[:, 0] * offset[:, 1] - seg[:, 1] * offset[:, 0]
    signed = np.sign(cross) * distance
    return SegmentFoot(index=index, fraction=fraction, distance=distance, signed=signed)


def distance_to_polyline(points: np.ndarray, polyline: np.ndarray, chunk: int = 512) -> np.ndarray:
    """Euclidean distance from each point to the nearest segment of a polyline."""
    return nearest_segment(points, polyline, chunk).distance


def manifold_rows(curve: ManifoldCurve) -> dict[str, list]:
    """Column data (branch, sheet, arc_param, q, p) for CSV export; q, p reduced."""
    reduced = curve.points
    n = len(curve)
    return {
        "branch": [curve.branch] * n,
        "sheet": [curve.sheet] * n,
        "arc_param": curve.arc_params.tolist(),
        "q": reduced[:, 0].tolist(),
        "p": reduced[:, 1].tolist(),
    }
