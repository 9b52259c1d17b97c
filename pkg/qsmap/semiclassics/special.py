"""Special functions η(x) and F̃(x) entering the homoclinic phase and smoothing.

Both are Fourier transforms without elementary closed forms in x, so the
module carries three layers:

- interpolation formulas (fast, used by the solvers),
- quadrature oracles (scipy.integrate.quad, used to validate the former),
- Gamma-function identities (exact cross-checks for tests and diagnostics).

φ(x) = x·η(x) is the continuous phase of

    f̃(x) = (1/√π) ∫ e^{−y/2} K₀(e^{−y}) e^{ixy} dy

with φ(0) = 0, and F̃(x) = √(2/π) ∫₀^∞ cos(xy)/√cosh y dy.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from functools import cache

import numpy as np
from scipy import integrate, optimize, special

logger = logging.getLogger(__name__)

ETA_ZERO = 3.5343063528
ETA_A = 5.3886558307
ETA_B = 12.80436182
FTILDE_ZERO = 2.0920992401
FTILDE_C = 8.9946298154

# fitted shape parameters of the intermediate region
ETA_FIT = (423.0, -0.4337, 1.78)
FTILDE_FIT = (103.0, 1.8)

ORACLE_WINDOW = 20.0
UNWRAP_STEP = 0.05
ETA_Y_RANGE = (-6.0, 90.0)
FTILDE_Y_MAX = 80.0
REL_ERROR_LIMIT = 1e-2


class SemiclassicalError(Exception):
    """Base exception for semiclassical computations."""

    pass


class QuadratureError(SemiclassicalError):
    """Raised when an oracle quadrature does not converge."""

    pass


@dataclass(frozen=True)
class EtaConstants:
    """Constants of the η interpolation derived from η(0), a and b."""

    eta0: float
    a: float
    b: float
    B: float
    A: float
    C: float


@dataclass(frozen=True)
class FTildeConstants:
    """Constants of the F̃ interpolation derived from F̃(0) and c."""

    f0: float
    c: float
    D: float
    E: float


@cache
def eta_constants() -> EtaConstants:
    B = (16.0 / math.pi * (ETA_A**2 - ETA_B)) ** 0.8
    A = math.pi * B**0.25 / 4.0
    C = ETA_ZERO - math.log(math.sqrt(2.0 * ETA_A)) - A - 1.0
    return EtaConstants(eta0=ETA_ZERO, a=ETA_A, b=ETA_B, B=B, A=A, C=C)


@cache
def ftilde_constants() -> FTildeConstants:
    """D solves c = (1 + π²D²)/(4D^{5/2}) on [0.1, 1]; E = F̃(0) − 1/√D."""
    D = optimize.brentq(
        lambda d: (1.0 + math.pi**2 * d * d) / (4.0 * d**2.5) - FTILDE_C, 0.1, 1.0, xtol=1e-15
    )
    return FTildeConstants(f0=FTILDE_ZERO, c=FTILDE_C, D=D, E=FTILDE_ZERO - 1.0 / math.sqrt(D))


def eta(x: np.ndarray | float) -> np.ndarray | float:
    """Interpolation formula for η(x); even in x, exact at x = 0."""
    const = eta_constants()
    z1, z2, z3 = ETA_FIT
    x2 = np.asarray(x, dtype=float) ** 2
    value = (
        -0.5 * np.log(x2 + 1.0 / (2.0 * const.a))
        + 1.0
        + const.A * (1.0 + const.B * x2 * x2) ** -0.25
        + const.C * (1.0 + z1 * x2**3) ** (z2 * np.log(z3 + x2))
    )
    return float(value) if np.ndim(value) == 0 else value


def ftilde(x: np.ndarray | float) -> np.ndarray | float:
    """Interpolation formula for F̃(x); even in x."""
    const = ftilde_constants()
    z4, z5 = FTILDE_FIT
    ax = np.abs(np.asarray(x, dtype=float))
    x2 = ax * ax
    # 1/√cosh(πx) written without overflow
    inv_sqrt_cosh = math.sqrt(2.0) * np.exp(-0.5 * math.pi * ax) / np.sqrt(
        1.0 + np.exp(-2.0 * math.pi * ax)
    )
    value = (const.D**2 + x2) ** -0.25 * inv_sqrt_cosh + const.E * (1.0 + z4 * x2 * x2) ** (
        -0.5 * np.log(z5 + x2)
    )
    return float(value) if np.ndim(value) == 0 else value


def _kernel(y: float) -> float:
    return math.exp(-0.5 * y) * special.k0(math.exp(-y))


def _quad(func, lo: float, hi: float, **kwargs) -> tuple[float, float]:
    """scipy quad with warnings logged; convergence is judged by the error estimate."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        value, error = integrate.quad(
            func, lo, hi, limit=400, epsabs=1e-14, epsrel=1e-12, **kwargs
        )
    for warning in caught:
        logger.debug(f"quad on [{lo}, {hi}] {kwargs}: {warning.message}")
    if not math.isfinite(value):
        raise QuadratureError(f"Quadrature returned {value} on [{lo}, {hi}]")
    return value, error


def ftilde_complex_oracle(x: float) -> complex:
    """f̃(x) by oscillatory quadrature.

    Raises:
        ValueError: If |x| > 20
        QuadratureError: If the error estimate exceeds 1% of |f̃(x)|
    """
    if abs(x) > ORACLE_WINDOW:
        raise ValueError(f"Oracle valid for |x| <= {ORACLE_WINDOW}, got {x}")
    lo, hi = ETA_Y_RANGE
    if x == 0.0:
        re, err_re = _quad(_kernel, lo, hi)
        im, err_im = 0.0, 0.0
    else:
        re, err_re = _quad(_kernel, lo, hi, weight="cos", wvar=x)
        im, err_im = _quad(_kernel, lo, hi, weight="sin", wvar=x)
    value = complex(re, im) / math.sqrt(math.pi)
    error = math.hypot(err_re, err_im) / math.sqrt(math.pi)
    if error > REL_ERROR_LIMIT * abs(value):
        raise QuadratureError(
            f"f̃({x}) error estimate {error:.3g} exceeds 1% of |f̃|={abs(value):.3g}"
        )
    return value


def _eta_at_zero() -> float:
    lo, hi = ETA_Y_RANGE
    first, _ = _quad(lambda y: y * _kernel(y), lo, hi)
    zeroth, _ = _quad(_kernel, lo, hi)
    return first / zeroth


def eta_oracle_grid(xs: np.ndarray) -> np.ndarray:
    """η(x) for many x from one continuous phase track starting at φ(0) = 0.

    The phase is followed outward from 0 in steps of at most 0.05 and
    unwrapped; η(−x) = η(x) because f̃(−x) is the conjugate of f̃(x).
    """
    xs = np.asarray(xs, dtype=float)
    ax = np.abs(xs)
    top = float(ax.max()) if ax.size else 0.0
    track = np.linspace(0.0, top, max(int(math.ceil(top / UNWRAP_STEP)), 1) + 1)
    track = np.union1d(track, ax[ax > 0])

    values = np.array([ftilde_complex_oracle(float(x)) for x in track])
    phase = np.unwrap(np.angle(values))
    phase -= phase[0]

    out = np.empty_like(ax)
    zero = ax == 0.0
    if zero.any():
        out[zero] = _eta_at_zero()
    nonzero = ~zero
    out[nonzero] = phase[np.searchsorted(track, ax[nonzero])] / ax[nonzero]
    return out


def eta_oracle(x: float) -> float:
    """η(x) = φ(x)/x from quadrature; at x = 0 the limit ∫y·g/∫g."""
    return float(eta_oracle_grid(np.array([x]))[0])


def ftilde_oracle(x: float) -> float:
    """F̃(x) = √(2/π) ∫₀^∞ cos(xy)/√cosh y dy by quadrature.

    Raises:
        ValueError: If |x| > 20
        QuadratureError: If the error estimate exceeds 1% of the value
    """
    if abs(x) > ORACLE_WINDOW:
        raise ValueError(f"Oracle valid for |x| <= {ORACLE_WINDOW}, got {x}")

    def integrand(y: float) -> float:
        return 1.0 / math.sqrt(math.cosh(y))

    if x == 0.0:
        value, error = _quad(integrand, 0.0, FTILDE_Y_MAX)
    else:
        value, error = _quad(integrand, 0.0, FTILDE_Y_MAX, weight="cos", wvar=x)
    value *= math.sqrt(2.0 / math.pi)
    error *= math.sqrt(2.0 / math.pi)
    if error > REL_ERROR_LIMIT * abs(value):
        raise QuadratureError(f"F̃({x}) error estimate {error:.3g} exceeds 1% of {value:.3g}")
    return value


def ftilde_exact(x: np.ndarray | float) -> np.ndarray | float:
    """F̃(x) = |Γ(1/4 + ix/2)|²/(2π)."""
    z = 0.25 + 0.5j * np.asarray(x, dtype=float)
    value = np.exp(2.0 * np.real(special.loggamma(z))) / (2.0 * math.pi)
    return float(value) if np.ndim(value) == 0 else value


def eta_exact(x: np.ndarray | float) -> np.ndarray | float:
    """η(x) from f̃(x) = 2^{s−2}Γ(s/2)²/√π, s = 1/2 − ix.

    The phase −x ln 2 + 2 Im lnΓ(1/4 − ix/2) is continuous with φ(0) = 0.
    At x = 0 the limit is −ln 2 − ψ(1/4).
    """
    x = np.asarray(x, dtype=float)
    safe = np.where(x == 0.0, 1.0, x)
    phase = -safe * math.log(2.0) + 2.0 * np.imag(special.loggamma(0.25 - 0.5j * safe))
    value = np.where(x == 0.0, -math.log(2.0) - special.digamma(0.25), phase / safe)
    return float(value) if np.ndim(value) == 0 else value


def eta_taylor_coefficients() -> tuple[float, float, float]:
    """(η(0), a, b) of η = η(0) − a x² + b x⁴ + … from polygamma values at 1/4."""
    eta0 = -math.log(2.0) - float(special.digamma(0.25))
    a = -float(special.polygamma(2, 0.25)) / 24.0
    b = -float(special.polygamma(4, 0.25)) / 1920.0
    return eta0, a, b


def special_function_table(xs: np.ndarray) -> dict[str, list[float]]:
    """Columns x, eta_interp, eta_oracle, ftilde_interp, ftilde_oracle."""
    xs = np.asarray(xs, dtype=float)
    return {
        "x": xs.tolist(),
        "eta_interp": np.asarray(eta(xs), dtype=float).tolist(),
        "eta_oracle": eta_oracle_grid(xs).tolist(),
        "ftilde_interp": np.asarray(ftilde(xs), dtype=float).tolist(),
        "ftilde_oracle": [ftilde_oracle(float(x)) for x in xs],
    }
