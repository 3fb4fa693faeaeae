"""Standardized upper control limit coefficients for the CEV X-bar and S charts.

Coefficients come from three sources: Monte Carlo simulation of an
in-control N(0, 1) process with CEV substitution, the published coefficient
table (with interpolation), and the classical Shewhart constants A3/B4.
"""

from __future__ import annotations

import bisect
import enum
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from cevchart.errors import DomainError
from cevchart.kernels import (
    CensoringScheme,
    ProcessParams,
    cev_weight,
    classical_constants,
    std_normal_quantile,
)
from cevchart.sampling import standard_normals

DEFAULT_ALPHA = 0.0027
DEFAULT_REPLICATES = 1_000_000
MIN_REPLICATES = 1000
BLOCK_REPLICATES = 1 << 16


class Provenance(str, enum.Enum):
    MONTE_CARLO = "monte_carlo"
    PAPER_TABLE = "paper_table"
    CLASSICAL_CONSTANT = "classical_constant"


@dataclass(frozen=True)
class SimulationConfig:
    n: int
    p_c: float
    alpha: float = DEFAULT_ALPHA
    replicates: int = DEFAULT_REPLICATES
    seed: int = 0

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha < 0.5):
            raise DomainError("alpha must lie in (0, 0.5)")
        if self.replicates < MIN_REPLICATES:
            raise DomainError(f"replicates must be >= {MIN_REPLICATES}")
        if int(self.n) != self.n or self.n < 2:
            raise DomainError("n must be an integer >= 2")
        if not (0.0 <= self.p_c < 1.0):
            raise DomainError("p_c must lie in [0, 1)")


@dataclass(frozen=True)
class LimitCoefficients:
    """Standardized UCL coefficients: limits are ``mu + ucl_xbar*sigma`` and ``ucl_s*sigma``."""

    ucl_xbar: float
    ucl_s: float
    provenance: Provenance
    config_echo: dict = field(default_factory=dict)
    clamped: bool = False
    warnings: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not (math.isfinite(self.ucl_xbar) and math.isfinite(self.ucl_s)):
            raise DomainError("coefficients must be finite")
        # an unreliable (warned) simulation may legitimately land on zero spread
        if not self.warnings and not (self.ucl_xbar > 0.0 and self.ucl_s > 0.0):
            raise DomainError("coefficients must be positive")

    def to_dict(self) -> dict:
        return {
            "ucl_xbar": self.ucl_xbar,
            "ucl_s": self.ucl_s,
            "provenance": Provenance(self.provenance).value,
            "config_echo": dict(self.config_echo),
            "clamped": self.clamped,
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LimitCoefficients":
        return cls(
            ucl_xbar=float(d["ucl_xbar"]),
            ucl_s=float(d["ucl_s"]),
            provenance=Provenance(d["provenance"]),
            config_echo=dict(d.get("config_echo", {})),
            clamped=bool(d.get("clamped", False)),
            warnings=tuple(d.get("warnings", ())),
        )


# Published coefficient tables, transcribed with '.' as decimal separator.
_PAPER_TABLE_CSV = """\
n,one_minus_pc,ucl_xbar,ucl_s
3,0.02,2.46,3.23
3,0.03,2.11,2.78
3,0.04,1.94,2.54
3,0.07,1.92,2.53
3,0.10,1.94,2.55
3,0.16,1.95,2.56
3,0.24,1.95,2.56
3,0.31,1.95,2.56
3,0.50,1.95,2.56
3,0.69,1.95,2.56
3,0.84,1.95,2.57
3,0.98,1.95,2.56
5,0.02,1.61,2.36
5,0.03,1.47,2.15
5,0.04,1.42,2.09
5,0.07,1.42,2.08
5,0.10,1.42,2.07
5,0.16,1.42,2.09
5,0.24,1.43,2.09
5,0.31,1.42,2.09
5,0.50,1.43,2.09
5,0.69,1.42,2.09
5,0.84,1.43,2.09
5,0.98,1.42,2.08
10,0.02,1.02,1.80
10,0.03,0.97,1.71
10,0.04,0.97,1.71
10,0.07,0.97,1.71
10,0.10,0.97,1.71
10,0.16,0.98,1.72
10,0.24,0.97,1.72
10,0.31,0.97,1.72
10,0.50,0.97,1.71
10,0.69,0.97,1.72
10,0.84,0.97,1.71
10,0.98,0.97,1.71
20,0.02,0.69,1.50
20,0.03,0.68,1.49
20,0.04,0.68,1.49
20,0.07,0.68,1.49
20,0.10,0.68,1.49
20,0.16,0.68,1.49
20,0.24,0.68,1.49
20,0.31,0.68,1.49
20,0.50,0.68,1.49
20,0.69,0.68,1.49
20,0.84,0.68,1.49
20,0.98,0.68,1.49
"""

_KEY_ATOL = 1e-9


@dataclass(frozen=True)
class CoefficientTable:
    """Rows of ``(n, one_minus_pc, ucl_xbar, ucl_s)`` sorted by ``(n, one_minus_pc)``."""

    rows: tuple[tuple[int, float, float, float], ...]

    def __post_init__(self) -> None:
        rows = tuple(sorted((int(n), float(q), float(a), float(b)) for n, q, a, b in self.rows))
        for n, q, a, b in rows:
            if n < 2 or not (0.0 < q <= 1.0) or a <= 0.0 or b <= 0.0:
                raise DomainError(f"invalid table row {(n, q, a, b)}")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_csv(cls, text: str) -> "CoefficientTable":
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if lines and lines[0].replace(" ", "") == "n,one_minus_pc,ucl_xbar,ucl_s":
            lines = lines[1:]
        rows = []
        for ln in lines:
            n, q, a, b = ln.split(",")
            rows.append((int(n), float(q), float(a), float(b)))
        return cls(tuple(rows))

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("n,one_minus_pc,ucl_xbar,ucl_s\n")
        for n, q, a, b in self.rows:
            out.write(f"{n},{q:.2f},{a:.2f},{b:.2f}\n")
        return out.getvalue()

    def sizes(self) -> list[int]:
        return sorted({r[0] for r in self.rows})

    def curve(self, n: int) -> list[tuple[float, float, float]]:
        return [(q, a, b) for m, q, a, b in self.rows if m == n]


def paper_table() -> CoefficientTable:
    return CoefficientTable.from_csv(_PAPER_TABLE_CSV)


def _curve_value(curve: list[tuple[float, float, float]], q: float) -> tuple[float, float, bool]:
    # piecewise linear in log10(1 - p_c), clamped at the ends
    qs = [c[0] for c in curve]
    for qk, a, b in curve:
        if abs(qk - q) <= _KEY_ATOL:
            return a, b, False
    if q < qs[0]:
        return curve[0][1], curve[0][2], True
    if q > qs[-1]:
        return curve[-1][1], curve[-1][2], True
    j = bisect.bisect_left(qs, q)
    (q0, a0, b0), (q1, a1, b1) = curve[j - 1], curve[j]
    t = (math.log10(q) - math.log10(q0)) / (math.log10(q1) - math.log10(q0))
    return a0 + t * (a1 - a0), b0 + t * (b1 - b0), False


def table_coefficients(
    n: int, p_c: float, table: CoefficientTable | None = None
) -> LimitCoefficients:
    """Look up (and interpolate) coefficients for subgroup size ``n`` and censoring ``p_c``.

    Within a tabulated ``n`` the coefficients are interpolated linearly in
    ``log10(1 - p_c)`` and clamped outside the tabulated range.  Between
    sizes they are interpolated linearly in ``1/sqrt(n)`` using the two
    nearest tabulated sizes, which extrapolates for ``n`` outside the table.
    """
    if int(n) != n or n < 2:
        raise DomainError("n must be an integer >= 2")
    q = 1.0 - float(p_c)
    if not (0.0 < q <= 1.0):
        raise DomainError("p_c must lie in [0, 1)")
    table = table or paper_table()
    sizes = table.sizes()
    echo = {"n": int(n), "p_c": float(p_c), "one_minus_pc": q}

    if n in sizes:
        a, b, clamped = _curve_value(table.curve(n), q)
        return LimitCoefficients(a, b, Provenance.PAPER_TABLE, echo, clamped)

    nearest = sorted(sizes, key=lambda m: (abs(m - n), m))[:2]
    n0, n1 = sorted(nearest)
    a0, b0, c0 = _curve_value(table.curve(n0), q)
    a1, b1, c1 = _curve_value(table.curve(n1), q)
    x, x0, x1 = 1 / math.sqrt(n), 1 / math.sqrt(n0), 1 / math.sqrt(n1)
    t = (x - x0) / (x1 - x0)
    warns = ()
    if not (sizes[0] < n < sizes[-1]):
        warns = (f"n={n} lies outside the tabulated sizes {sizes}; value extrapolated",)
    return LimitCoefficients(
        a0 + t * (a1 - a0), b0 + t * (b1 - b0), Provenance.PAPER_TABLE, echo, c0 or c1, warns
    )


def classical_coefficients(n: int) -> LimitCoefficients:
    _, a3, b4 = classical_constants(n)
    return LimitCoefficients(a3, b4, Provenance.CLASSICAL_CONSTANT, {"n": int(n)})


def _block_statistics(
    seed: int, block: int, count: int, n: int, censor_at: float, w_c: float
) -> tuple[np.ndarray, np.ndarray]:
    z = standard_normals(seed, block, count * n).reshape(count, n)
    if w_c is not None:
        z = np.where(z <= censor_at, w_c, z)
    return z.mean(axis=1), z.std(axis=1, ddof=1)


def upper_quantile(values: np.ndarray, alpha: float) -> float:
    """Order statistic at 1-based rank ``ceil((1 - alpha) * len(values))``."""
    m = len(values)
    rank = math.ceil((1.0 - alpha) * m - 1e-9)
    rank = min(max(rank, 1), m)
    return float(np.partition(values, rank - 1)[rank - 1])


def simulate_coefficients(config: SimulationConfig, workers: int = 1) -> LimitCoefficients:
    """Monte Carlo coefficients under a known in-control N(0, 1) process.

    Each replicate draws ``n`` standard normals, replaces every draw at or
    below the censor point ``Phi^-1(p_c)`` by its CEV weight, and records
    the subgroup mean and (n-1) standard deviation.  The coefficients are
    the upper ``alpha`` order statistics of those two samples.

    Replicates are generated in fixed blocks, each from its own counter
    range, so the result does not depend on ``workers``.
    """
    n, p_c, alpha = int(config.n), config.p_c, config.alpha
    if p_c > 0.0:
        censor_at = std_normal_quantile(p_c)
        w_c = cev_weight(ProcessParams(0.0, 1.0), CensoringScheme(censor_at))
    else:
        censor_at, w_c = -math.inf, None

    counts = []
    left = config.replicates
    while left > 0:
        counts.append(min(BLOCK_REPLICATES, left))
        left -= counts[-1]

    def run(block: int):
        return _block_statistics(config.seed, block, counts[block], n, censor_at, w_c)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(len(counts))))
    else:
        parts = [run(b) for b in range(len(counts))]
    means = np.concatenate([p[0] for p in parts])
    sds = np.concatenate([p[1] for p in parts])

    warns = []
    expected_uncensored = 1e6 * n * (1.0 - p_c)
    if expected_uncensored < 100:
        warns.append(
            f"about {expected_uncensored:.3g} uncensored draws per 10^6 replicates; "
            "the simulated quantiles are unreliable"
        )
    echo = {
        "n": n,
        "p_c": p_c,
        "alpha": alpha,
        "replicates": config.replicates,
        "seed": int(config.seed),
    }
    return LimitCoefficients(
        upper_quantile(means, alpha),
        upper_quantile(sds, alpha),
        Provenance.MONTE_CARLO,
        echo,
        warnings=tuple(warns),
    )


def absolute_limits(params: ProcessParams, coeffs: LimitCoefficients) -> tuple[float, float]:
    """Upper limits in measurement units for the X-bar and S charts."""
    return coeffs.ucl_xbar * params.sigma + params.mu, coeffs.ucl_s * params.sigma


def reproduce_paper_tables(
    alpha: float = DEFAULT_ALPHA,
    replicates: int = DEFAULT_REPLICATES,
    seed: int = 0,
    table: CoefficientTable | None = None,
    workers: int = 1,
) -> dict:
    """Compare every tabulated coefficient with Monte Carlo and with A3/B4."""
    table = table or paper_table()
    rows = []
    for n, q, a, b in table.rows:
        p_c = 1.0 - q
        mc = simulate_coefficients(
            SimulationConfig(n=n, p_c=p_c, alpha=alpha, replicates=replicates, seed=seed),
            workers=workers,
        )
        _, a3, b4 = classical_constants(n)
        rows.append(
            {
                "n": n,
                "one_minus_pc": q,
                "paper": {"ucl_xbar": a, "ucl_s": b},
                "monte_carlo": {"ucl_xbar": mc.ucl_xbar, "ucl_s": mc.ucl_s},
                "classical": {"ucl_xbar": a3, "ucl_s": b4},
                "abs_diff": {
                    "paper_vs_monte_carlo": {
                        "ucl_xbar": abs(a - mc.ucl_xbar),
                        "ucl_s": abs(b - mc.ucl_s),
                    },
                    "paper_vs_classical": {"ucl_xbar": abs(a - a3), "ucl_s": abs(b - b4)},
                    "monte_carlo_vs_classical": {
                        "ucl_xbar": abs(mc.ucl_xbar - a3),
                        "ucl_s": abs(mc.ucl_s - b4),
                    },
                },
                "warnings": list(mc.warnings),
            }
        )
    return {"alpha": alpha, "replicates": replicates, "seed": int(seed), "rows": rows}
