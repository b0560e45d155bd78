"""
Maximum-likelihood fitting of the BW law and its Burr III / Weibull sub-models.

Optimisation runs over log-parameters, so positivity needs no constraints.
Each start is a Nelder-Mead simplex search followed by a BFGS polish on the
analytic score; among starts that reach a stationary point the highest
log-likelihood wins.

Score of one observation, with z = log x, L = log(1 + x^-c), G = e^{-kL},
s = 1/(1 + x^c), A the Burr III density, W = beta lam^-beta x^(beta-1),
H = (x/lam)^beta and D = A + W (1 - G):

    dl/dc   = [A (1/c - z + (k+1) z s) - W k G z s] / D
    dl/dk   = [A (1/k - L) + W L G] / D
    dl/dlam = beta H / lam - beta W (1 - G) / (lam D)
    dl/dbeta = -H log(x/lam) + W (1 - G) (1/beta + log(x/lam)) / D
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from scipy import optimize

from .distribution import (
    BurrIII,
    BwParams,
    Weibull,
    _components,
    _log1p_xmc,
    _log_density_bracket,
    _log_pdf,
    _submodel_log_pdf,
)
from .errors import ConvergenceError, DomainError

__all__ = [
    "FitOptions",
    "FitResult",
    "ComparisonReport",
    "MODELS",
    "log_likelihood",
    "score",
    "submodel_score",
    "fit_mle",
    "information_criteria",
    "compare_models",
]

ModelParams = Union[BwParams, BurrIII, Weibull]

MODELS = {"BW": BwParams, "BurrIII": BurrIII, "Weibull": Weibull}

# per-observation gradient (w.r.t. log-parameters) accepted as stationary
GRADIENT_TOL = 1e-4
_LOG_BOUND = 50.0


@dataclass(frozen=True)
class FitOptions:
    max_iterations: int = 4000
    tolerance: float = 1e-10
    multistart_count: int = 8
    starting_points: Optional[tuple] = None
    seed: int = 0

    def __post_init__(self):
        if not self.tolerance > 0:
            raise DomainError("tolerance must be > 0")
        if self.multistart_count < 1:
            raise DomainError("multistart_count must be >= 1")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be >= 1")


@dataclass(frozen=True)
class FitResult:
    model: str
    params: ModelParams
    log_likelihood: float
    aic: float
    bic: float
    aicc: float
    n: int
    iterations: int
    converged: bool
    gradient_norm_at_solution: float

    @property
    def n_params(self) -> int:
        return self.params.n_params

    def to_dict(self) -> dict:
        """Flat key-value form with stable field names."""
        out = {"model": self.model}
        for name, value in zip(self.params.names, self.params.as_tuple()):
            out[name] = value
        for key in ("log_likelihood", "aic", "bic", "aicc", "n", "iterations",
                    "converged", "gradient_norm_at_solution"):
            out[key] = getattr(self, key)
        return out


@dataclass
class ComparisonReport:
    """Fits of all three models, ordered by AIC; failed fits keep their error."""

    results: list = field(default_factory=list)
    errors: dict = field(default_factory=dict)

    @property
    def best(self) -> FitResult:
        return self.results[0]

    def to_dict(self) -> dict:
        out = {}
        for rank, res in enumerate(self.results, 1):
            for key, value in res.to_dict().items():
                out[f"{res.model}.{key}"] = value
            out[f"{res.model}.rank"] = rank
        for model, err in self.errors.items():
            out[f"{model}.error"] = err
        return out


def _values(data) -> np.ndarray:
    arr = np.asarray(getattr(data, "values", data), dtype=float).ravel()
    if arr.size == 0:
        raise DomainError("dataset is empty")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError("data values must be finite and > 0")
    return arr


# --------------------------------------------------------------------------
# likelihood and score
# --------------------------------------------------------------------------


def _loglik(params: ModelParams, x: np.ndarray) -> float:
    # fsum is correctly rounded, so the total does not depend on data order
    if isinstance(params, BwParams):
        return math.fsum(_log_pdf(params, x))
    return math.fsum(_submodel_log_pdf(params, x))


def log_likelihood(params: ModelParams, data) -> float:
    """Sum of log-densities of ``data`` under ``params``."""
    return _loglik(params, _values(data))


def _score_terms(p: BwParams, x: np.ndarray) -> np.ndarray:
    """Per-observation score, shape (4, n)."""
    c, k, lam, beta = p.as_tuple()
    z, H, logA, logW, log1mG = _components(p, x)
    # extreme optimizer probes may overflow; the caller rejects non-finite scores
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        logD = _log_density_bracket(logA, logW, log1mG)
        L = _log1p_xmc(c, z)
        logG = -k * L
        s = 0.5 * (1.0 - np.tanh(0.5 * c * z))  # 1 / (1 + x^c)
        a = np.exp(logA - logD)  # A / D
        wg1 = np.exp(logW + log1mG - logD)  # W (1 - G) / D
        wg = np.exp(logW + logG - logD)  # W G / D
        zl = z - math.log(lam)
        d_c = a * (1.0 / c - z + (k + 1.0) * z * s) - wg * k * z * s
        d_k = a * (1.0 / k - L) + wg * L
        d_lam = beta / lam * (H - wg1)
        d_beta = -H * zl + wg1 * (1.0 / beta + zl)
    return np.vstack([d_c, d_k, d_lam, d_beta])


def score(p: BwParams, data) -> np.ndarray:
    """Gradient of the BW log-likelihood w.r.t. (c, k, lam, beta)."""
    return _score_terms(p, _values(data)).sum(axis=1)


def submodel_score(sp: Union[BurrIII, Weibull], data) -> np.ndarray:
    """Gradient of a sub-model log-likelihood w.r.t. its two parameters."""
    x = _values(data)
    z = np.log(x)
    if isinstance(sp, BurrIII):
        c, k = sp.as_tuple()
        s = 0.5 * (1.0 - np.tanh(0.5 * c * z))
        L = _log1p_xmc(c, z)
        return np.array([np.sum(1.0 / c - z + (k + 1.0) * z * s), np.sum(1.0 / k - L)])
    if isinstance(sp, Weibull):
        lam, beta = sp.as_tuple()
        zl = z - math.log(lam)
        H = np.exp(beta * zl)
        return np.array(
            [np.sum(beta / lam * (H - 1.0)), np.sum(1.0 / beta + zl - H * zl)]
        )
    raise TypeError(f"unknown sub-model {type(sp).__name__}")


def _gradient(params: ModelParams, x: np.ndarray) -> np.ndarray:
    if isinstance(params, BwParams):
        return score(params, x)
    return submodel_score(params, x)


# --------------------------------------------------------------------------
# information criteria
# --------------------------------------------------------------------------


def information_criteria(log_lik: float, n_params: int, n: int) -> tuple[float, float, float]:
    """Return (AIC, BIC, AICc) for a fit with ``n_params`` on ``n`` points."""
    if n <= n_params + 1:
        raise DomainError(f"AICc needs n > p + 1 (n={n}, p={n_params})")
    aic = 2.0 * n_params - 2.0 * log_lik
    bic = n_params * math.log(n) - 2.0 * log_lik
    aicc = aic + 2.0 * n_params * (n_params + 1) / (n - n_params - 1)
    return aic, bic, aicc


# --------------------------------------------------------------------------
# fitting
# --------------------------------------------------------------------------


def _base_start(model: str, x: np.ndarray) -> np.ndarray:
    mean = float(np.mean(x))
    sd = float(np.std(x))
    cv = sd / mean if sd > 0 else 1.0
    lam0, beta0 = mean, 1.2 / cv
    if model == "BW":
        return np.array([1.0, 1.0, lam0, beta0])
    if model == "BurrIII":
        return np.array([1.0, 1.0])
    return np.array([lam0, beta0])


def _starts(model: str, x: np.ndarray, opts: FitOptions) -> list[np.ndarray]:
    starts = []
    if opts.starting_points:
        for sp in opts.starting_points:
            vec = np.asarray(getattr(sp, "as_tuple", lambda: sp)(), dtype=float)
            MODELS[model](*vec)  # validates
            starts.append(vec)
    base = _base_start(model, x)
    if len(starts) < opts.multistart_count:
        starts.append(base)
    rng = np.random.default_rng(opts.seed)
    while len(starts) < opts.multistart_count:
        factor = np.exp(rng.uniform(math.log(0.1), math.log(10.0), size=base.size))
        starts.append(base * factor)
    return starts


def _fit_from(model: str, x: np.ndarray, start: np.ndarray, opts: FitOptions):
    cls = MODELS[model]
    n = x.size

    def unpack(theta):
        return cls(*np.exp(np.clip(theta, -_LOG_BOUND, _LOG_BOUND)))

    def nll(theta):
        v = -_loglik(unpack(theta), x) / n
        return v if math.isfinite(v) else 1e300

    def nll_grad(theta):
        p = unpack(theta)
        v = -_loglik(p, x) / n
        if not math.isfinite(v):
            return 1e300, np.zeros_like(theta)
        g = -_gradient(p, x) * np.asarray(p.as_tuple()) / n
        if not np.all(np.isfinite(g)):
            return 1e300, np.zeros_like(theta)
        return v, g

    theta0 = np.log(start)
    nm = optimize.minimize(
        nll,
        theta0,
        method="Nelder-Mead",
        options={
            "maxiter": opts.max_iterations,
            "xatol": 1e-8,
            "fatol": opts.tolerance,
            "adaptive": True,
        },
    )
    theta, iters = nm.x, int(nm.nit)
    polish = optimize.minimize(
        nll_grad,
        theta,
        jac=True,
        method="BFGS",
        options={"maxiter": opts.max_iterations, "gtol": 1e-9},
    )
    iters += int(polish.nit)
    if polish.fun <= nm.fun:
        theta = polish.x
    theta = np.clip(theta, -_LOG_BOUND, _LOG_BOUND)
    params = unpack(theta)
    ll = _loglik(params, x)
    g = _gradient(params, x) * np.asarray(params.as_tuple()) / n
    gnorm = float(np.max(np.abs(g))) if np.all(np.isfinite(g)) else math.inf
    return params, ll, gnorm, iters


def _better(a, b) -> bool:
    """Higher log-likelihood wins; ties within 1e-8 go to the smaller gradient."""
    if a[0] > b[0] + 1e-8:
        return True
    return abs(a[0] - b[0]) <= 1e-8 and a[1] < b[1]


def fit_mle(data, model: str = "BW", opts: Optional[FitOptions] = None) -> FitResult:
    """Maximum-likelihood fit of ``model`` ('BW', 'BurrIII' or 'Weibull').

    Raises :class:`ConvergenceError` (carrying the best point in ``.best``)
    when no start reaches a stationary point.
    """
    if model not in MODELS:
        raise DomainError(f"unknown model {model!r}; choose from {sorted(MODELS)}")
    opts = opts or FitOptions()
    x = _values(data)
    n_params = MODELS[model].n_params
    if x.size < n_params + 2:
        raise DomainError(f"need at least {n_params + 2} observations to fit {model}")

    # The BW likelihood is unbounded (beta -> inf with lam at the sample
    # maximum), so only stationary points compete; the best non-stationary
    # point is kept for the error report.
    best, fallback = None, None
    for start in _starts(model, x, opts):
        params, ll, gnorm, iters = _fit_from(model, x, start, opts)
        if not math.isfinite(ll):
            continue
        cand = (ll, gnorm, params, iters)
        if gnorm < GRADIENT_TOL:
            best = cand if best is None or _better(cand, best) else best
        elif fallback is None or gnorm < fallback[1]:
            fallback = cand
    chosen = best or fallback
    if chosen is None:
        raise ConvergenceError(f"{model} fit failed from every start")

    ll, gnorm, params, iters = chosen
    aic, bic, aicc = information_criteria(ll, n_params, x.size)
    result = FitResult(
        model=model,
        params=params,
        log_likelihood=ll,
        aic=aic,
        bic=bic,
        aicc=aicc,
        n=int(x.size),
        iterations=iters,
        converged=gnorm < GRADIENT_TOL,
        gradient_norm_at_solution=gnorm,
    )
    if not result.converged:
        raise ConvergenceError(
            f"{model} fit did not reach a stationary point (gradient {gnorm:.3g})",
            best=result,
        )
    return result


def compare_models(
    data, opts: Optional[FitOptions] = None, models: Sequence[str] = ("BW", "BurrIII", "Weibull")
) -> ComparisonReport:
    """Fit each model and rank by AIC (ascending)."""
    x = _values(data)
    report = ComparisonReport()
    for model in models:
        try:
            report.results.append(fit_mle(x, model, opts))
        except ConvergenceError as exc:
            report.errors[model] = str(exc)
            if exc.best is not None:
                report.results.append(exc.best)
        except DomainError as exc:
            report.errors[model] = str(exc)
    report.results.sort(key=lambda r: r.aic)
    return report
