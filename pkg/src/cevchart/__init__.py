"""CEV control charts for left-censored process data."""

from cevchart.errors import (
    AllCensoredError,
    CevError,
    ConfigurationError,
    DataError,
    DegenerateSampleError,
    DomainError,
    InsufficientDataError,
    ParseError,
)
from cevchart.kernels import (
    CensoringScheme,
    ProcessParams,
    censor_point,
    censoring_proportion,
    cev_weight,
    classical_constants,
    lambda_factor,
    mills_hazard,
    std_normal_cdf,
    std_normal_pdf,
    std_normal_quantile,
)
from cevchart.estimator import (
    CensoredSample,
    CevWeightedSample,
    EstimationConfig,
    EstimationResult,
    NaiveMethod,
    Variant,
    estimate,
    mle_step,
    naive_estimate,
    naive_initial_params,
    substitute_cev,
)
from cevchart.limits import (
    CoefficientTable,
    LimitCoefficients,
    Provenance,
    SimulationConfig,
    absolute_limits,
    classical_coefficients,
    paper_table,
    reproduce_paper_tables,
    simulate_coefficients,
    table_coefficients,
)
from cevchart.chart import (
    ChartKind,
    ChartReport,
    LimitSource,
    Phase1Result,
    SubgroupMatrix,
    baseline_from_params,
    monitor,
    run_phase1,
    subgroup_statistics,
)
from cevchart.render import render_chart
from cevchart.datagen import GenSpec, generate

__version__ = "0.1.0"

__all__ = [
    "AllCensoredError",
    "CensoredSample",
    "CensoringScheme",
    "CevError",
    "CevWeightedSample",
    "ChartKind",
    "ChartReport",
    "CoefficientTable",
    "ConfigurationError",
    "DataError",
    "DegenerateSampleError",
    "DomainError",
    "EstimationConfig",
    "EstimationResult",
    "GenSpec",
    "InsufficientDataError",
    "LimitCoefficients",
    "LimitSource",
    "NaiveMethod",
    "ParseError",
    "Phase1Result",
    "ProcessParams",
    "Provenance",
    "SimulationConfig",
    "SubgroupMatrix",
    "Variant",
    "absolute_limits",
    "baseline_from_params",
    "censor_point",
    "censoring_proportion",
    "cev_weight",
    "classical_coefficients",
    "classical_constants",
    "estimate",
    "generate",
    "lambda_factor",
    "mills_hazard",
    "mle_step",
    "monitor",
    "naive_estimate",
    "naive_initial_params",
    "paper_table",
    "render_chart",
    "reproduce_paper_tables",
    "run_phase1",
    "simulate_coefficients",
    "std_normal_cdf",
    "std_normal_pdf",
    "std_normal_quantile",
    "subgroup_statistics",
    "substitute_cev",
    "table_coefficients",
]
