"""Maximum-likelihood estimation of (mu, sigma) from left-censored samples.

The estimator replaces every censored reading by the conditional expected
value of the censored tail, re-estimates mean and standard deviation from
the substituted data, and repeats until the parameters stop moving.  The
fixed point of this iteration solves the censored-normal likelihood
equations.
"""

from __future__ import annotations

import enum
import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from cevchart.errors import (
    AllCensoredError,
    DegenerateSampleError,
    DomainError,
    InsufficientDataError,
)
from cevchart.kernels import (
    CensoringScheme,
    ProcessParams,
    censor_point,
    censoring_proportion,
    cev_weight,
    lambda_factor,
)

logger = logging.getLogger(__name__)

RECOMMENDED_MIN_N = 10


class Variant(str, enum.Enum):
    """Centering used in the standard-deviation update.

    ``AP1`` centers the sum of squares on the freshly computed mean,
    ``AP2`` on the previous iterate's mean.
    """

    AP1 = "ap1"
    AP2 = "ap2"


class NaiveMethod(str, enum.Enum):
    ZERO = "zero"
    HALF_C = "half_c"
    AT_C = "at_c"
    IGNORE = "ignore"


@dataclass(frozen=True, eq=False)
class CensoredSample:
    """Observations with per-value censoring flags.

    Censored entries are stored at the detection limit; every uncensored
    value lies strictly above it.
    """

    values: np.ndarray
    censored: np.ndarray
    scheme: CensoringScheme

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float).ravel()
        censored = np.array(self.censored, dtype=bool).ravel()
        if values.size == 0:
            raise DomainError("sample is empty")
        if values.shape != censored.shape:
            raise DomainError("values and censored flags differ in length")
        if not np.all(np.isfinite(values)):
            raise DomainError("sample contains non-finite values")
        c = self.scheme.limit_c
        if np.any(values[censored] != c):
            raise DomainError("censored entries must be recorded at the detection limit")
        if np.any(values[~censored] <= c):
            raise DomainError("uncensored entries must exceed the detection limit")
        values.flags.writeable = False
        censored.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "censored", censored)

    @classmethod
    def from_readings(cls, readings, limit_c: float) -> "CensoredSample":
        """Censor raw readings: anything at or below ``limit_c`` becomes censored."""
        readings = np.asarray(readings, dtype=float).ravel()
        censored = readings <= limit_c
        values = np.where(censored, limit_c, readings)
        return cls(values, censored, CensoringScheme(limit_c))

    @property
    def n_total(self) -> int:
        return int(self.values.size)

    @property
    def n_uncensored(self) -> int:
        return int(self.values.size - np.count_nonzero(self.censored))


@dataclass(frozen=True, eq=False)
class CevWeightedSample:
    weights: np.ndarray
    source: CensoredSample
    w_c: float


@dataclass(frozen=True)
class EstimationConfig:
    tolerance: float = 1e-8
    max_iterations: int = 1000
    variant: Variant = Variant.AP2

    def __post_init__(self) -> None:
        if not (self.tolerance > 0.0):
            raise DomainError("tolerance must be > 0")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be >= 1")
        object.__setattr__(self, "variant", Variant(self.variant))


@dataclass(frozen=True)
class EstimationResult:
    params: ProcessParams
    w_c: float
    p_c: float
    iterations: int
    converged: bool
    trace: list[tuple[float, float]] = field(default_factory=list)


def naive_initial_params(sample: CensoredSample) -> ProcessParams:
    """Starting point: mean and (N-1) standard deviation of the recorded values."""
    if sample.n_total < 2:
        raise InsufficientDataError("at least two observations are needed")
    sd = float(np.std(sample.values, ddof=1))
    if sd == 0.0:
        raise DegenerateSampleError("all-censored or constant sample; estimation cannot start")
    return ProcessParams(float(np.mean(sample.values)), sd)


def substitute_cev(sample: CensoredSample, params: ProcessParams) -> CevWeightedSample:
    w_c = cev_weight(params, sample.scheme)
    weights = np.where(sample.censored, w_c, sample.values)
    return CevWeightedSample(weights, sample, w_c)


def mle_step(
    sample: CensoredSample, previous: ProcessParams, variant: Variant = Variant.AP2
) -> ProcessParams:
    """One substitution/re-estimation pass.

    The CEV weight and the variance-correction factor are both evaluated at
    ``previous``.  Raises :class:`AllCensoredError` when no reading is
    uncensored.
    """
    variant = Variant(variant)
    n = sample.n_total
    r = sample.n_uncensored
    if r == 0:
        raise AllCensoredError("every observation is censored; nothing to estimate from")
    weights = substitute_cev(sample, previous).weights
    mu_new = float(np.mean(weights))
    center = mu_new if variant is Variant.AP1 else previous.mu
    ss = float(np.sum((weights - center) ** 2))
    if ss == 0.0:
        raise DegenerateSampleError("CEV weights have zero spread")
    denom = r + (n - r) * lambda_factor(censor_point(previous, sample.scheme))
    return ProcessParams(mu_new, math.sqrt(ss / denom))


def estimate(sample: CensoredSample, config: EstimationConfig | None = None) -> EstimationResult:
    """Iterate :func:`mle_step` from the naive start until convergence.

    Convergence means ``|dmu| <= tol * sigma_prev`` and
    ``|dsigma| <= tol * sigma_prev``.  Both steps are measured in units of
    the current spread, so the stopping iteration (and therefore the result)
    is equivariant under affine changes of measurement scale.  Hitting
    ``max_iterations`` returns a result flagged ``converged=False`` instead
    of raising.
    """
    config = config or EstimationConfig()
    if sample.n_total < RECOMMENDED_MIN_N:
        warnings.warn(
            f"only {sample.n_total} observations; at least {RECOMMENDED_MIN_N} are recommended",
            stacklevel=2,
        )
    if sample.n_uncensored == 0:
        raise AllCensoredError("every observation is censored; nothing to estimate from")

    current = naive_initial_params(sample)
    trace = [(current.mu, current.sigma)]
    tol = config.tolerance
    converged = False
    iterations = 0
    while iterations < config.max_iterations:
        nxt = mle_step(sample, current, config.variant)
        iterations += 1
        trace.append((nxt.mu, nxt.sigma))
        step = tol * current.sigma
        done = abs(nxt.mu - current.mu) <= step and abs(nxt.sigma - current.sigma) <= step
        current = nxt
        if done:
            converged = True
            break
    if not converged:
        logger.warning("estimation did not converge in %d iterations", iterations)

    return EstimationResult(
        params=current,
        w_c=cev_weight(current, sample.scheme),
        p_c=censoring_proportion(current, sample.scheme),
        iterations=iterations,
        converged=converged,
        trace=trace,
    )


def naive_estimate(sample: CensoredSample, method: NaiveMethod) -> ProcessParams:
    """Mean and (count-1) standard deviation after a naive treatment of censored values.

    ``ZERO``, ``HALF_C`` and ``AT_C`` substitute 0, C/2 and C; ``IGNORE``
    drops censored readings altogether.
    """
    method = NaiveMethod(method)
    c = sample.scheme.limit_c
    if method is NaiveMethod.IGNORE:
        data = sample.values[~sample.censored]
        if data.size < 2:
            raise InsufficientDataError("ignoring censored values leaves fewer than two readings")
    else:
        if sample.n_total < 2:
            raise InsufficientDataError("at least two observations are needed")
        fill = {NaiveMethod.ZERO: 0.0, NaiveMethod.HALF_C: c / 2.0, NaiveMethod.AT_C: c}[method]
        data = np.where(sample.censored, fill, sample.values)
    sd = float(np.std(data, ddof=1))
    if sd == 0.0:
        raise DegenerateSampleError(f"{method.value} substitution leaves a constant sample")
    return ProcessParams(float(np.mean(data)), sd)
