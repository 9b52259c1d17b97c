"""Classical standard map on the unit torus.

    p' = p + (k/2π) sin(2πq)
    q' = q + p'                 (both mod 1)

Everything here is a pure function of its inputs. Lifted variants skip the
modular reduction; action sums and manifold geometry work on the lift.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


class ClassicalError(Exception):
    """Base exception for classical dynamics errors."""

    pass


@dataclass(frozen=True)
class MapParams:
    """Perturbation strength of the standard map."""

    k: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.k) or self.k < 0:
            raise ValueError(f"k must be finite and non-negative, got {self.k}")

    @property
    def kick(self) -> float:
        """Amplitude k/2π of the momentum kick."""
        return self.k / TWO_PI


@dataclass(frozen=True)
class PhasePoint:
    """Point (q, p) of phase space; any real representative is allowed."""

    q: float
    p: float

    def reduced(self) -> PhasePoint:
        """Torus representative with 0 <= q, p < 1."""
        return PhasePoint(_reduce(self.q), _reduce(self.p))

    def as_array(self) -> np.ndarray:
        return np.array([self.q, self.p])


FIXED_POINT = PhasePoint(0.0, 0.0)


@dataclass(frozen=True)
class LiftedOrbit:
    """Orbit segment on the real-line lift.

    ``q`` and ``p`` hold consecutive points; ``q[t+1] = q[t] + p[t+1]`` with no
    reduction. ``start_index`` is the position of the seed point in the arrays.
    """

    q: np.ndarray
    p: np.ndarray
    direction: Literal["forward", "backward"] = "forward"
    start_index: int = 0

    def __len__(self) -> int:
        return len(self.q)

    @property
    def points(self) -> list[PhasePoint]:
        return [PhasePoint(float(q), float(p)) for q, p in zip(self.q, self.p, strict=True)]

    @classmethod
    def from_positions(
        cls,
        q: np.ndarray,
        p_first: float,
        direction: Literal["forward", "backward"] = "forward",
        start_index: int = 0,
    ) -> LiftedOrbit:
        """Build an orbit from positions, deriving momenta from ``p[t+1] = q[t+1] − q[t]``."""
        q = np.asarray(q, dtype=float)
        p = np.empty_like(q)
        p[0] = p_first
        p[1:] = np.diff(q)
        return cls(q=q, p=p, direction=direction, start_index=start_index)


def _reduce(x: float) -> float:
    r = x % 1.0
    # float modulo may return exactly 1.0 for tiny negative inputs
    return 0.0 if r >= 1.0 else r


def lift_step(
    q: np.ndarray | float, p: np.ndarray | float, params: MapParams, steps: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    """Apply the lifted map ``steps`` times (negative = inverse), no reduction.

    Works elementwise on arrays.
    """
    q = np.array(q, dtype=float, copy=True)
    p = np.array(p, dtype=float, copy=True)
    kick = params.kick

    if steps >= 0:
        for _ in range(steps):
            p = p + kick * np.sin(TWO_PI * q)
            q = q + p
    else:
        for _ in range(-steps):
            q = q - p
            p = p - kick * np.sin(TWO_PI * q)
    return q, p


def advance(z: PhasePoint, params: MapParams, steps: int = 1) -> PhasePoint:
    """Image of ``z`` after ``steps`` map applications, reduced to the torus.

    Negative ``steps`` apply the inverse map q = q' − p', p = p' − (k/2π) sin(2πq).

    The period-2 orbit (0.5, 0.5) → (0, 0.5) → (0.5, 0.5) is unkicked for any k.
    """
    q, p = lift_step(z.q, z.p, params, steps)
    return PhasePoint(float(q), float(p)).reduced()


def tangent_map(z: PhasePoint, params: MapParams) -> np.ndarray:
    """Jacobian [[∂q'/∂q, ∂q'/∂p], [∂p'/∂q, ∂p'/∂p]] of one map step at ``z``."""
    kc = params.k * math.cos(TWO_PI * z.q)
    return np.array([[1.0 + kc, 1.0], [kc, 1.0]])


def monodromy(z: PhasePoint, params: MapParams, steps: int) -> np.ndarray:
    """Product of tangent maps along ``steps`` forward iterations from ``z``."""
    matrix = np.eye(2)
    q, p = z.q, z.p
    for _ in range(steps):
        matrix = tangent_map(PhasePoint(q, p), params) @ matrix
        q_next, p_next = lift_step(q, p, params)
        q, p = float(q_next), float(p_next)
    return matrix


def stability_exponent(k: float) -> float:
    """λ = ln(1 + k/2 + √(k + k²/4)), the log of the unstable eigenvalue at z₀."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    return math.log1p(k / 2.0 + math.sqrt(k + k * k / 4.0))


def eigendirections(params: MapParams) -> tuple[np.ndarray, np.ndarray]:
    """Unit eigenvectors (unstable, stable) of ``tangent_map(z₀)``.

    The unstable vector points into q > 0, p > 0; the stable vector into
    q < 0, p > 0, so both lead onto the upper separatrix sheet.

    Raises:
        ValueError: If z₀ is not hyperbolic (k == 0)
    """
    matrix = tangent_map(FIXED_POINT, params)
    w, v = np.linalg.eig(matrix)
    w = np.real_if_close(w)
    if params.k <= 0 or np.iscomplexobj(w) or np.any(np.isclose(np.abs(w), 1.0)):
        spectrum = ", ".join(f"{value:.6g}" for value in np.atleast_1d(w))
        raise ValueError(f"Fixed point is not hyperbolic at k={params.k}: eigenvalues [{spectrum}]")

    order = np.argsort(np.abs(w))[::-1]
    unstable = np.real(v[:, order[0]])
    stable = np.real(v[:, order[1]])
    unstable = unstable / np.linalg.norm(unstable)
    stable = stable / np.linalg.norm(stable)
    if unstable[0] < 0:
        unstable = -unstable
    if stable[1] < 0:
        stable = -stable
    return unstable, stable


def reversal(z: PhasePoint, params: MapParams) -> PhasePoint:
    """Time-reversal involution (q, p) → (−q, p + (k/2π) sin 2πq).

    Satisfies R∘T∘R = T⁻¹ and maps the upper unstable branch of z₀ onto the
    upper stable branch of its lift (1, 0). Returns the lifted image.
    """
    return PhasePoint(1.0 - z.q, z.p + params.kick * math.sin(TWO_PI * z.q))


def generating_function(q: np.ndarray | float, q_next: np.ndarray | float, k: float):
    """F(q, q') = (q'−q)²/2 − (k/4π²) cos 2πq.

    With p = −∂F/∂q and p' = ∂F/∂q' this generates the map; F(0,0)/ħ equals
    the Bohr–Sommerfeld phase −kN/2π.
    """
    q = np.asarray(q, dtype=float)
    q_next = np.asarray(q_next, dtype=float)
    return 0.5 * (q_next - q) ** 2 - k / (TWO_PI**2) * np.cos(TWO_PI * q)


def chaotic_layer(
    params: MapParams,
    seeds: int = 20,
    steps: int = 10_000,
    spread: float = 1e-3,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Scatter of torus points visited by orbits started next to z₀.

    Seeds are placed within ``spread`` of z₀ along the unstable direction,
    which puts them on or next to the unstable manifold.

    Returns:
        Array of shape (seeds * steps, 2) with reduced (q, p)
    """
    rng = rng or np.random.default_rng(0)
    unstable, _ = eigendirections(params)
    offsets = rng.uniform(0.1, 1.0, size=seeds) * spread
    normal = np.array([-unstable[1], unstable[0]])
    jitter = rng.uniform(-1.0, 1.0, size=seeds) * spread * 1e-2
    q = offsets * unstable[0] + jitter * normal[0]
    p = offsets * unstable[1] + jitter * normal[1]

    out = np.empty((steps, seeds, 2))
    kick = params.kick
    for t in range(steps):
        p = (p + kick * np.sin(TWO_PI * q)) % 1.0
        q = (q + p) % 1.0
        out[t, :, 0] = q
        out[t, :, 1] = p
    logger.debug(f"Chaotic layer: {seeds} seeds x {steps} steps at k={params.k}")
    return out.reshape(-1, 2)
