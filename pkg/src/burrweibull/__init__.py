"""Burr III-Weibull lifetime distribution: evaluation, quantiles, moments,
inequality and entropy measures, maximum-likelihood fitting and Monte Carlo
study tooling."""

from .data import CurveTable, Dataset, emit_curves, kevlar_dataset, load_dataset
from .distribution import (
    BurrIII,
    BwParams,
    Weibull,
    cdf,
    hazard,
    log_pdf,
    pdf,
    reversed_hazard,
    submodel_cdf,
    submodel_log_pdf,
    submodel_pdf,
    survival,
    validate_params,
)
from .errors import (
    BwError,
    ConvergenceError,
    DomainError,
    IntegrationError,
    ParseError,
    RangeError,
    ReportError,
    ValidityError,
)
from .estimation import (
    ComparisonReport,
    FitOptions,
    FitResult,
    compare_models,
    fit_mle,
    information_criteria,
    log_likelihood,
    score,
    submodel_score,
)
from .measures import (
    MomentSummary,
    SeriesDiagnostics,
    bonferroni,
    central_moment,
    conditional_moment,
    lorenz,
    lower_partial_expectation,
    mean_deviation_about_mean,
    mean_deviation_about_median,
    mgf,
    moment_summary,
    order_statistic_pdf,
    partial_expectation,
    raw_moment,
    raw_moment_series,
    renyi_entropy,
    renyi_entropy_series,
    shannon_entropy,
)
from .quantile import QuantileSolveReport, SeededStream, median, quantile, quantile_report, sample
from .simulation import SimConfig, SimReport, run_simulation, sim_report_to_table

__version__ = "0.1.0"
