"""Phase I set-up and Phase II monitoring with CEV X-bar and S charts.

Both charts carry an upper limit only.  A subgroup signals when its
statistic is strictly greater than the limit.
"""

from __future__ import annotations

import enum
import logging
import warnings
from dataclasses import dataclass

import numpy as np

from cevchart.errors import ConfigurationError, DegenerateSampleError, DomainError
from cevchart.estimator import CensoredSample, EstimationConfig, estimate
from cevchart.kernels import (
    CensoringScheme,
    ProcessParams,
    censoring_proportion,
    cev_weight,
)
from cevchart.limits import (
    DEFAULT_ALPHA,
    DEFAULT_REPLICATES,
    LimitCoefficients,
    SimulationConfig,
    absolute_limits,
    classical_coefficients,
    simulate_coefficients,
    table_coefficients,
)

logger = logging.getLogger(__name__)

RECOMMENDED_MIN_CELLS = 100


class ChartKind(str, enum.Enum):
    CEV_XBAR = "cev_xbar"
    CEV_S = "cev_s"


class LimitSource(str, enum.Enum):
    TABLE = "table"
    MONTE_CARLO = "monte_carlo"
    CLASSICAL = "classical"


@dataclass(frozen=True, eq=False)
class SubgroupMatrix:
    """``k`` subgroups of ``n`` readings; censored cells are stored at the limit."""

    data: np.ndarray
    scheme: CensoringScheme

    def __post_init__(self) -> None:
        data = np.array(self.data, dtype=float)
        if data.ndim != 2:
            raise DomainError("subgroup data must be two-dimensional")
        k, n = data.shape
        if k < 1 or n < 2:
            raise DomainError(f"need k >= 1 subgroups of size n >= 2, got {k}x{n}")
        if not np.all(np.isfinite(data)):
            raise DomainError("subgroup data contain non-finite cells")
        if np.any(data < self.scheme.limit_c):
            raise DomainError("cells below the detection limit must be recorded at the limit")
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @classmethod
    def from_readings(cls, readings, limit_c: float) -> "SubgroupMatrix":
        readings = np.asarray(readings, dtype=float)
        return cls(np.where(readings <= limit_c, limit_c, readings), CensoringScheme(limit_c))

    @property
    def k(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]

    @property
    def censored(self) -> np.ndarray:
        return self.data <= self.scheme.limit_c

    def rows(self, indices) -> "SubgroupMatrix":
        return SubgroupMatrix(self.data[list(indices)], self.scheme)

    def to_sample(self) -> CensoredSample:
        return CensoredSample(self.data.ravel(), self.censored.ravel(), self.scheme)


@dataclass(frozen=True)
class ChartReport:
    chart_kind: ChartKind
    points: list[tuple[int, float]]
    ucl: float
    signals: list[int]
    params_used: ProcessParams
    coefficients_used: LimitCoefficients

    @classmethod
    def build(cls, kind, indices, stats, ucl, params, coeffs) -> "ChartReport":
        points = [(int(i), float(v)) for i, v in zip(indices, stats)]
        signals = [i for i, v in points if v > ucl]
        return cls(ChartKind(kind), points, float(ucl), signals, params, coeffs)

    def to_dict(self) -> dict:
        return {
            "chart_kind": self.chart_kind.value,
            "points": [[i, v] for i, v in self.points],
            "ucl": self.ucl,
            "signals": list(self.signals),
            "params_used": {"mu": self.params_used.mu, "sigma": self.params_used.sigma},
            "coefficients_used": self.coefficients_used.to_dict(),
        }


@dataclass(frozen=True)
class Phase1Result:
    final_params: ProcessParams
    w_c: float
    p_c: float
    xbar_report: ChartReport
    s_report: ChartReport
    excluded_subgroups: list[int]
    rounds: int
    scheme: CensoringScheme
    n: int
    max_rounds_reached: bool = False
    iterations: int = 0
    converged: bool = True

    @property
    def limits(self) -> tuple[float, float]:
        return self.xbar_report.ucl, self.s_report.ucl

    def to_dict(self) -> dict:
        return {
            "final_params": {"mu": self.final_params.mu, "sigma": self.final_params.sigma},
            "w_c": self.w_c,
            "p_c": self.p_c,
            "limit_c": self.scheme.limit_c,
            "n": self.n,
            "xbar_report": self.xbar_report.to_dict(),
            "s_report": self.s_report.to_dict(),
            "excluded_subgroups": list(self.excluded_subgroups),
            "rounds": self.rounds,
            "max_rounds_reached": self.max_rounds_reached,
            "iterations": self.iterations,
            "converged": self.converged,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Phase1Result":
        def report(r: dict) -> ChartReport:
            return ChartReport(
                ChartKind(r["chart_kind"]),
                [(int(i), float(v)) for i, v in r["points"]],
                float(r["ucl"]),
                [int(i) for i in r["signals"]],
                ProcessParams(r["params_used"]["mu"], r["params_used"]["sigma"]),
                LimitCoefficients.from_dict(r["coefficients_used"]),
            )

        return cls(
            final_params=ProcessParams(d["final_params"]["mu"], d["final_params"]["sigma"]),
            w_c=float(d["w_c"]),
            p_c=float(d["p_c"]),
            xbar_report=report(d["xbar_report"]),
            s_report=report(d["s_report"]),
            excluded_subgroups=[int(i) for i in d["excluded_subgroups"]],
            rounds=int(d["rounds"]),
            scheme=CensoringScheme(float(d["limit_c"])),
            n=int(d["n"]),
            max_rounds_reached=bool(d.get("max_rounds_reached", False)),
            iterations=int(d.get("iterations", 0)),
            converged=bool(d.get("converged", True)),
        )


def _weighted_statistics(data: np.ndarray, limit_c: float, w_c: float):
    weights = np.where(data <= limit_c, w_c, data)
    return weights.mean(axis=1), weights.std(axis=1, ddof=1)


def subgroup_statistics(matrix: SubgroupMatrix, params: ProcessParams) -> list[tuple[float, float]]:
    """Per-subgroup mean and (n-1) standard deviation of the CEV-weighted readings."""
    w_c = cev_weight(params, matrix.scheme)
    means, sds = _weighted_statistics(matrix.data, matrix.scheme.limit_c, w_c)
    return [(float(m), float(s)) for m, s in zip(means, sds)]


def coefficients_for(
    n: int,
    p_c: float,
    source: LimitSource,
    *,
    alpha: float = DEFAULT_ALPHA,
    replicates: int = DEFAULT_REPLICATES,
    seed: int = 0,
) -> LimitCoefficients:
    source = LimitSource(source)
    if source is LimitSource.TABLE:
        return table_coefficients(n, p_c)
    if source is LimitSource.CLASSICAL:
        return classical_coefficients(n)
    return simulate_coefficients(
        SimulationConfig(n=n, p_c=p_c, alpha=alpha, replicates=replicates, seed=seed)
    )


def run_phase1(
    matrix: SubgroupMatrix,
    est_config: EstimationConfig | None = None,
    limit_source: LimitSource = LimitSource.TABLE,
    max_rounds: int = 10,
    *,
    alpha: float = DEFAULT_ALPHA,
    replicates: int = DEFAULT_REPLICATES,
    seed: int = 0,
) -> Phase1Result:
    """Estimate in-control parameters, set limits, and drop signalling subgroups.

    Each round estimates on the remaining subgroups, builds both charts, and
    removes every subgroup that signals on either chart.  Rounds stop when
    nothing signals or ``max_rounds`` is reached.  Subgroup indices refer
    to rows of ``matrix`` (0-based).
    """
    if max_rounds < 1:
        raise DomainError("max_rounds must be >= 1")
    if matrix.k * matrix.n < RECOMMENDED_MIN_CELLS:
        warnings.warn(
            f"{matrix.k * matrix.n} observations; Phase I needs about "
            f"{RECOMMENDED_MIN_CELLS} or more for reliable estimates",
            stacklevel=2,
        )
    est_config = est_config or EstimationConfig()
    active = list(range(matrix.k))
    excluded: list[int] = []
    rounds = 0
    while True:
        if not active:
            raise DegenerateSampleError("every subgroup was excluded")
        rounds += 1
        sub = matrix.rows(active)
        result = estimate(sub.to_sample(), est_config)
        params = result.params
        coeffs = coefficients_for(
            matrix.n, result.p_c, limit_source, alpha=alpha, replicates=replicates, seed=seed
        )
        ucl_x, ucl_s = absolute_limits(params, coeffs)
        means, sds = _weighted_statistics(sub.data, matrix.scheme.limit_c, result.w_c)
        xr = ChartReport.build(ChartKind.CEV_XBAR, active, means, ucl_x, params, coeffs)
        sr = ChartReport.build(ChartKind.CEV_S, active, sds, ucl_s, params, coeffs)
        flagged = sorted(set(xr.signals) | set(sr.signals))
        logger.info("phase I round %d: mu=%.6g sigma=%.6g, %d signals", rounds, params.mu,
                    params.sigma, len(flagged))
        if not flagged or rounds >= max_rounds:
            break
        excluded.extend(flagged)
        active = [i for i in active if i not in set(flagged)]

    return Phase1Result(
        final_params=params,
        w_c=result.w_c,
        p_c=result.p_c,
        xbar_report=xr,
        s_report=sr,
        excluded_subgroups=sorted(excluded),
        rounds=rounds,
        scheme=matrix.scheme,
        n=matrix.n,
        max_rounds_reached=bool(flagged),
        iterations=result.iterations,
        converged=result.converged,
    )


def baseline_from_params(
    params: ProcessParams, scheme: CensoringScheme, n: int, coeffs: LimitCoefficients
) -> Phase1Result:
    """Phase II baseline for known in-control parameters (no Phase I data)."""
    ucl_x, ucl_s = absolute_limits(params, coeffs)
    empty_x = ChartReport(ChartKind.CEV_XBAR, [], ucl_x, [], params, coeffs)
    empty_s = ChartReport(ChartKind.CEV_S, [], ucl_s, [], params, coeffs)
    return Phase1Result(
        final_params=params,
        w_c=cev_weight(params, scheme),
        p_c=censoring_proportion(params, scheme),
        xbar_report=empty_x,
        s_report=empty_s,
        excluded_subgroups=[],
        rounds=0,
        scheme=scheme,
        n=int(n),
    )


def monitor(subgroups: SubgroupMatrix, baseline: Phase1Result) -> tuple[list[int], list[int]]:
    """Phase II: chart new subgroups against fixed baseline limits.

    Returns the 0-based indices that exceed the X-bar and the S limit.
    """
    if subgroups.n != baseline.n:
        raise ConfigurationError(
            f"subgroup size {subgroups.n} does not match baseline size {baseline.n}"
        )
    if subgroups.scheme.limit_c != baseline.scheme.limit_c:
        raise ConfigurationError("detection limit differs from the baseline")
    means, sds = _weighted_statistics(subgroups.data, baseline.scheme.limit_c, baseline.w_c)
    ucl_x, ucl_s = baseline.limits
    return (
        [int(i) for i in np.flatnonzero(means > ucl_x)],
        [int(i) for i in np.flatnonzero(sds > ucl_s)],
    )
