"""Scalar functions of the normal model under left censoring.

Everything here is a pure function of its arguments.  The standard normal
distribution function is evaluated through ``math.erfc``, which keeps full
relative precision in the lower tail; the hazard ``phi/Phi`` switches to a
continued fraction below ``z = -8`` where both factors become tiny.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from cevchart.errors import DomainError

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_TAIL_SWITCH = -8.0
_CF_DEPTH = 200
_QUANTILE_BRACKET = 40.0


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ProcessParams:
    """Mean and standard deviation of the in-control normal model."""

    mu: float
    sigma: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", _check_finite("mu", self.mu))
        object.__setattr__(self, "sigma", _check_finite("sigma", self.sigma))
        if self.sigma <= 0.0:
            raise DomainError(f"sigma must be > 0, got {self.sigma!r}")


@dataclass(frozen=True)
class CensoringScheme:
    """Fixed detection limit; readings at or below ``limit_c`` are censored.

    Only left censoring is supported.
    """

    limit_c: float
    side: str = "left"

    def __post_init__(self) -> None:
        object.__setattr__(self, "limit_c", _check_finite("limit_c", self.limit_c))
        if self.side != "left":
            raise DomainError(f"only left censoring is supported, got side={self.side!r}")


def std_normal_pdf(z: float) -> float:
    z = _check_finite("z", z)
    return _INV_SQRT_2PI * math.exp(-0.5 * z * z)


def std_normal_cdf(z: float) -> float:
    z = _check_finite("z", z)
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def std_normal_quantile(p: float) -> float:
    """Inverse of :func:`std_normal_cdf`, found by Brent's method on the cdf."""
    p = float(p)
    if not (0.0 < p < 1.0):
        raise DomainError(f"p must lie in (0, 1), got {p!r}")
    if p == 0.5:
        return 0.0
    return brentq(
        lambda z: std_normal_cdf(z) - p,
        -_QUANTILE_BRACKET,
        _QUANTILE_BRACKET,
        xtol=1e-14,
        rtol=4 * 2.0**-52,
        maxiter=500,
    )


def censor_point(params: ProcessParams, scheme: CensoringScheme) -> float:
    """Detection limit in standard units, ``(C - mu) / sigma``."""
    return (scheme.limit_c - params.mu) / params.sigma


def censoring_proportion(params: ProcessParams, scheme: CensoringScheme) -> float:
    return std_normal_cdf(censor_point(params, scheme))


def _lower_tail_fraction(x: float) -> float:
    # 1/(x + 2/(x + 3/(x + ...))) for x >= 8; the hazard at -x is x plus this.
    t = 0.0
    for k in range(_CF_DEPTH, 1, -1):
        t = k / (x + t)
    return 1.0 / (x + t)


def mills_hazard(z_c: float) -> float:
    """Left-censoring hazard ``phi(z)/Phi(z)`` (inverse Mills ratio)."""
    z_c = _check_finite("z_c", z_c)
    if z_c < _TAIL_SWITCH:
        x = -z_c
        return x + _lower_tail_fraction(x)
    return std_normal_pdf(z_c) / std_normal_cdf(z_c)


def lambda_factor(z_c: float) -> float:
    """Variance-correction factor ``V(z)(V(z) + z)``.

    Equals ``1 - Var(Z | Z <= z)``; it lies in (0, 1), tending to 1 when
    almost nothing is censored and to 0 when almost everything is.
    """
    z_c = _check_finite("z_c", z_c)
    if z_c < _TAIL_SWITCH:
        # V + z cancels catastrophically here; the continued fraction gives it directly.
        x = -z_c
        tail = _lower_tail_fraction(x)
        return (x + tail) * tail
    v = mills_hazard(z_c)
    return v * (v + z_c)


def cev_weight(params: ProcessParams, scheme: CensoringScheme) -> float:
    """Conditional expected value ``E[T | T <= C]`` substituted for censored readings."""
    return params.mu - params.sigma * mills_hazard(censor_point(params, scheme))


def classical_constants(n: int) -> tuple[float, float, float]:
    """Shewhart constants ``(c4, A3, B4)`` for subgroups of size ``n``."""
    if int(n) != n or n < 2:
        raise DomainError(f"subgroup size must be an integer >= 2, got {n!r}")
    n = int(n)
    c4 = math.sqrt(2.0 / (n - 1)) * math.exp(math.lgamma(n / 2.0) - math.lgamma((n - 1) / 2.0))
    a3 = 3.0 / (c4 * math.sqrt(n))
    b4 = 1.0 + 3.0 * math.sqrt(1.0 - c4 * c4) / c4
    return c4, a3, b4
