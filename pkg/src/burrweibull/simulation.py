"""Monte Carlo study of the BW maximum-likelihood estimator.

For every sample size n and replicate i a sample is drawn from its own
stream ``(master_seed, (n << 32) | i)``, so any single replicate can be
rerun in isolation and results never depend on worker count or
completion order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .data import CurveTable
from .distribution import BwParams
from .errors import ConvergenceError, DomainError, ParseError, ReportError
from .estimation import FitOptions, fit_mle
from .quantile import SeededStream, sample

__all__ = [
    "SimConfig",
    "SimCell",
    "SimReport",
    "SCENARIO_I",
    "SCENARIO_II",
    "replicate_stream",
    "run_replicate",
    "run_simulation",
    "sim_report_to_table",
    "parse_sim_config",
    "load_sim_config",
]

SCENARIO_I = BwParams(0.3, 8.0, 1.2, 2.0)
SCENARIO_II = BwParams(5.5, 5.0, 0.9, 3.3)

DEFAULT_SIZES = (25, 200, 400, 600)
MAX_FAILURE_FRACTION = 0.2
# Replicate fits use the perturbed truth plus the moment-based start.
DEFAULT_SIM_FIT = FitOptions(multistart_count=2)


@dataclass(frozen=True)
class SimConfig:
    true_params: BwParams
    sample_sizes: tuple = DEFAULT_SIZES
    replicates: int = 200
    master_seed: int = 20240101
    fit_options: FitOptions = DEFAULT_SIM_FIT
    perturbation_sigma: float = 0.25

    def __post_init__(self):
        sizes = tuple(dict.fromkeys(int(n) for n in self.sample_sizes))
        if not sizes or any(n < 1 or n >= 2**31 for n in sizes):
            raise DomainError("sample sizes must be positive integers")
        if int(self.replicates) < 1 or int(self.replicates) >= 2**32:
            raise DomainError("replicates must be >= 1")
        if not 0 <= int(self.master_seed) < 2**64:
            raise DomainError("master_seed must be an unsigned 64-bit integer")
        if not self.perturbation_sigma >= 0:
            raise DomainError("perturbation_sigma must be >= 0")
        object.__setattr__(self, "sample_sizes", sizes)
        object.__setattr__(self, "replicates", int(self.replicates))
        object.__setattr__(self, "master_seed", int(self.master_seed))


@dataclass(frozen=True)
class SimCell:
    """Summary of one (sample size, parameter) cell over converged replicates."""

    n: int
    parameter: str
    true_value: float
    mean_estimate: float
    bias: float
    mse: float
    variance: float
    failure_count: int
    converged_count: int


@dataclass
class SimReport:
    true_params: BwParams
    replicates: int
    cells: dict = field(default_factory=dict)  # (n, name) -> SimCell
    estimates: dict = field(default_factory=dict)  # n -> (converged, 4) array

    @property
    def sample_sizes(self) -> list:
        return sorted(self.estimates)

    def cell(self, n: int, parameter: str) -> SimCell:
        return self.cells[(n, parameter)]

    def mse(self, n: int) -> np.ndarray:
        return np.array([self.cells[(n, name)].mse for name in BwParams.names])

    def to_dict(self) -> dict:
        """Flat key-value form, keys ``n<size>.<param>.<field>``."""
        out = {"replicates": self.replicates}
        for name, value in zip(BwParams.names, self.true_params.as_tuple()):
            out[f"true.{name}"] = value
        for (n, name), cell in sorted(self.cells.items(), key=_cell_order):
            for key in ("mean_estimate", "bias", "mse", "variance"):
                out[f"n{n}.{name}.{key}"] = getattr(cell, key)
            out[f"n{n}.failure_count"] = cell.failure_count
        return out


def _cell_order(item):
    (n, name), _ = item
    return n, BwParams.names.index(name)


def replicate_stream(master_seed: int, n: int, i: int) -> SeededStream:
    return SeededStream(master_seed, (int(n) << 32) | int(i))


def _perturbed_truth(cfg: SimConfig, n: int, i: int) -> np.ndarray:
    # a separate stream (top bit set) so the start never shares draws with the data
    stream = SeededStream(cfg.master_seed, (1 << 63) | (int(n) << 32) | int(i))
    noise = stream.generator().normal(0.0, cfg.perturbation_sigma, size=4)
    return np.asarray(cfg.true_params.as_tuple()) * np.exp(noise)


def run_replicate(cfg: SimConfig, n: int, i: int) -> Optional[tuple]:
    """Fit one replicate; returns the estimate tuple or None if it failed."""
    x = sample(cfg.true_params, n, replicate_stream(cfg.master_seed, n, i))
    start = tuple(_perturbed_truth(cfg, n, i))
    opts = replace(cfg.fit_options, starting_points=(start,))
    try:
        return fit_mle(x, "BW", opts).params.as_tuple()
    except (ConvergenceError, DomainError):
        return None


def _run_chunk(args):
    cfg, tasks = args
    return [run_replicate(cfg, n, i) for n, i in tasks]


def _summarise(cfg: SimConfig, n: int, results: list, report: SimReport) -> None:
    ok = [r for r in results if r is not None]
    failures = len(results) - len(ok)
    est = np.array(ok, dtype=float).reshape(-1, 4)
    report.estimates[n] = est
    truth = np.asarray(cfg.true_params.as_tuple())
    for j, name in enumerate(BwParams.names):
        if est.shape[0] == 0:
            mean = bias = mse = var = math.nan
        else:
            col = est[:, j]
            mean = float(np.mean(col))
            bias = mean - truth[j]
            mse = float(np.mean((col - truth[j]) ** 2))
            var = float(np.mean((col - mean) ** 2))
            if abs(mse - (var + bias * bias)) > 1e-10 * max(1.0, mse):
                raise ReportError(f"MSE decomposition broke for n={n}, {name}")
        report.cells[(n, name)] = SimCell(
            n, name, float(truth[j]), mean, bias, mse, var, failures, len(ok)
        )


def run_simulation(cfg: SimConfig, workers: int = 1) -> SimReport:
    """Sample, refit and summarise every (n, i) replicate of ``cfg``.

    Raises :class:`ReportError` (with the partial report in ``.report``)
    when more than 20% of the replicates of any cell fail to converge.
    """
    tasks = [(n, i) for n in cfg.sample_sizes for i in range(cfg.replicates)]
    if workers <= 1:
        results = [run_replicate(cfg, n, i) for n, i in tasks]
    else:
        size = max(1, math.ceil(len(tasks) / (4 * workers)))
        chunks = [tasks[j:j + size] for j in range(0, len(tasks), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map preserves submission order, so merging is by (n, i)
            results = [r for part in pool.map(_run_chunk, [(cfg, c) for c in chunks]) for r in part]

    report = SimReport(cfg.true_params, cfg.replicates)
    by_n = {}
    for (n, _), res in zip(tasks, results):
        by_n.setdefault(n, []).append(res)
    bad = []
    for n in cfg.sample_sizes:
        if n in report.estimates:
            continue
        _summarise(cfg, n, by_n[n], report)
        failed = report.cells[(n, "c")].failure_count
        if failed > MAX_FAILURE_FRACTION * cfg.replicates:
            bad.append(f"n={n}: {failed}/{cfg.replicates} replicates failed")
    if bad:
        err = ReportError("too many non-converged replicates (" + "; ".join(bad) + ")")
        err.report = report
        raise err
    return report


def sim_report_to_table(
    reports: Union[SimReport, Sequence[SimReport]], labels: Optional[Sequence[str]] = None
) -> CurveTable:
    """Rows are (sample size, parameter); Mean/Bias/MSE columns per scenario.

    Several reports are placed side by side and must share their cells.
    """
    if isinstance(reports, SimReport):
        reports = [reports]
    reports = list(reports)
    if labels is None:
        labels = [""] if len(reports) == 1 else [f"S{j + 1}." for j in range(len(reports))]
    keys = sorted(reports[0].cells, key=lambda k: (k[0], BwParams.names.index(k[1])))
    for rep in reports[1:]:
        if set(rep.cells) != set(keys):
            raise DomainError("reports do not cover the same cells")
    columns = ["n", "parameter"]
    for lab in labels:
        columns += [f"{lab}mean", f"{lab}bias", f"{lab}mse"]
    table = CurveTable(columns)
    for key in keys:
        row = [key[0], key[1]]
        for rep in reports:
            cell = rep.cells[key]
            row += [cell.mean_estimate, cell.bias, cell.mse]
        table.append(row)
    return table


# --------------------------------------------------------------------------
# config files
# --------------------------------------------------------------------------

_INT_KEYS = {"replicates", "seed", "multistart"}


def parse_sim_config(text: str) -> SimConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment.

    Keys: true_params (c,k,lambda,beta), sample_sizes (comma list),
    replicates, seed, and optionally multistart and sigma.
    """
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            key, sep, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ParseError("expected 'key = value'", line=lineno, column=1)
        try:
            if key == "true_params":
                vals = [float(v) for v in value.split(",")]
                if len(vals) != 4:
                    raise ValueError
                fields[key] = BwParams(*vals)
            elif key == "sample_sizes":
                fields[key] = tuple(int(v) for v in value.split(","))
            elif key in _INT_KEYS:
                fields[key] = int(value)
            elif key == "sigma":
                fields[key] = float(value)
            else:
                raise ParseError(f"unknown key {key!r}", line=lineno, column=1)
        except ValueError:
            raise ParseError(f"bad value for {key!r}: {value!r}", line=lineno,
                             column=raw.find(value) + 1) from None
    if "true_params" not in fields:
        raise ParseError("missing required key 'true_params'")
    kwargs = {"true_params": fields["true_params"]}
    if "sample_sizes" in fields:
        kwargs["sample_sizes"] = fields["sample_sizes"]
    if "replicates" in fields:
        kwargs["replicates"] = fields["replicates"]
    if "seed" in fields:
        kwargs["master_seed"] = fields["seed"]
    if "sigma" in fields:
        kwargs["perturbation_sigma"] = fields["sigma"]
    if "multistart" in fields:
        kwargs["fit_options"] = FitOptions(multistart_count=fields["multistart"])
    return SimConfig(**kwargs)


def load_sim_config(path: Union[str, Path]) -> SimConfig:
    return parse_sim_config(Path(path).read_text())
