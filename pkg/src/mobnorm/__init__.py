"""Mobility measures for jointly log-normal parent/child incomes.

The package computes relative mobility (one minus the intergenerational
elasticity) and absolute mobility (the probability a child out-earns their
parent) three ways: in closed form from model parameters, empirically from
observed income pairs, and by seeded Monte Carlo simulation.  See
``mobnorm.model`` for the measures, ``mobnorm.estimate`` for the
estimators, ``mobnorm.simulate`` for sampling, and ``mobnorm.cli`` for the
command line front end.
"""

__version__ = "0.1.0"

from .errors import (
    CsvParseError,
    DataError,
    DegenerateGapError,
    InsufficientDataError,
    InvalidParamsError,
    MissingColumnError,
    MobilityError,
    NonPositiveIncomeError,
    ZeroVarianceError,
)
from .model import (
    GapDistribution,
    MeasureSource,
    MobilityReport,
    ModelParams,
    absolute_mobility,
    analytic_report,
    gap_distribution,
    ige_beta,
    population_alpha,
    relative_mobility,
    std_normal_cdf,
)
from .estimate import (
    IncomeSample,
    LogIncomeSample,
    RegressionFit,
    empirical_absolute_mobility,
    fit_params,
    log_transform,
    ols_fit,
    to_money,
)
from .simulate import (
    CHUNK_DRAWS,
    MonteCarloEstimate,
    SimConfig,
    mc_absolute_mobility,
    mc_regression,
    sample_pairs,
)
from .datasets import DatasetSpec, IncomeScale, load_csv, write_sample_csv
from .reports import (
    SCHEMA_VERSION,
    ReportDocument,
    fmt_float,
    json_bytes,
    read_report,
    standard_metadata,
    write_report,
)

__all__ = [
    "__version__",
    "MobilityError",
    "InvalidParamsError",
    "DegenerateGapError",
    "DataError",
    "NonPositiveIncomeError",
    "ZeroVarianceError",
    "InsufficientDataError",
    "CsvParseError",
    "MissingColumnError",
    "ModelParams",
    "GapDistribution",
    "MeasureSource",
    "MobilityReport",
    "ige_beta",
    "relative_mobility",
    "population_alpha",
    "gap_distribution",
    "absolute_mobility",
    "analytic_report",
    "std_normal_cdf",
    "IncomeSample",
    "LogIncomeSample",
    "RegressionFit",
    "log_transform",
    "to_money",
    "fit_params",
    "ols_fit",
    "empirical_absolute_mobility",
    "CHUNK_DRAWS",
    "SimConfig",
    "MonteCarloEstimate",
    "sample_pairs",
    "mc_absolute_mobility",
    "mc_regression",
    "DatasetSpec",
    "IncomeScale",
    "load_csv",
    "write_sample_csv",
    "SCHEMA_VERSION",
    "ReportDocument",
    "standard_metadata",
    "fmt_float",
    "json_bytes",
    "write_report",
    "read_report",
]
