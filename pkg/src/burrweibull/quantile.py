"""
Quantiles and reproducible inverse-transform sampling.

The BW quantile has no closed form. Since F_BW >= max(G_burr, F_weibull)
and F_BW <= G_burr + F_weibull, the root of ``F(x) = u`` is bracketed by

    min(q_burr(u/2), q_weib(u/2)) <= x <= min(q_burr(u), q_weib(u)),

both of which are closed-form. Inside that bracket a safeguarded Newton
iteration (bisection fallback) runs on t = log(x). Lower-tail levels use
the residual ``log F(x) - log u``; upper-tail levels use the log-survival
residual ``log(1-u) - log S(x)``, which is the rearranged
``log(1-(1+x^-c)^-k) - (x/lam)^beta - log(1-u) = 0``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .distribution import BwParams, _components, _log_density_bracket, _log_sf
from .errors import ConvergenceError, DomainError

__all__ = [
    "QuantileSolveReport",
    "SeededStream",
    "quantile",
    "quantile_report",
    "median",
    "sample",
]

_MAX_ITER = 200
_MAX_DOUBLINGS = 200
_T_TOL = 2.0 * np.finfo(float).eps


@dataclass(frozen=True)
class QuantileSolveReport:
    x: float
    iterations: int
    residual: float
    bracket: tuple[float, float]


@dataclass(frozen=True)
class SeededStream:
    """A (seed, stream_id) pair naming one reproducible uniform stream.

    The stream is a Philox4x64 counter-based generator keyed by the 128-bit
    value ``stream_id << 64 | seed``; distinct stream ids give independent,
    non-overlapping sequences.
    """

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
                raise DomainError(f"{name} must be an integer")
            if not 0 <= int(v) < 2**64:
                raise DomainError(f"{name} must fit in an unsigned 64-bit integer")

    def generator(self) -> np.random.Generator:
        key = (int(self.stream_id) << 64) | int(self.seed)
        return np.random.Generator(np.random.Philox(key=key))

    def uniforms(self, n: int) -> np.ndarray:
        """n uniforms on the open interval (0, 1), 53-bit resolution."""
        bits = self.generator().integers(0, 2**53, size=n, dtype=np.uint64)
        return (bits.astype(float) + 0.5) * 2.0**-53


def _log_burr_quantile(p: BwParams, u: np.ndarray) -> np.ndarray:
    # (u^{-1/k} - 1)^{-1/c}
    with np.errstate(divide="ignore", over="ignore"):
        return -np.log(np.expm1(-np.log(u) / p.k)) / p.c


def _log_weibull_quantile(p: BwParams, u: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return math.log(p.lam) + np.log(-np.log1p(-u)) / p.beta


def _residual(p: BwParams, t: np.ndarray, u: np.ndarray, upper: np.ndarray):
    """Increasing residual in t = log x and its t-derivative."""
    x = np.exp(t)
    _, H, logA, logW, log1mG = _components(p, x)
    logf = _log_density_bracket(logA, logW, log1mG) - H
    logs = log1mG - H
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        logF = np.log(-np.expm1(logs))
        # lower tail: log F - log u, d/dt = x f / F
        g_lo = logF - np.log(u)
        d_lo = np.exp(t + logf - logF)
        # upper tail: log(1-u) - log S, d/dt = x h
        g_hi = np.log1p(-u) - logs
        d_hi = np.exp(t + logf - logs)
    return np.where(upper, g_hi, g_lo), np.where(upper, d_hi, d_lo)


def _expand(p, lo, hi, u, upper):
    """Widen the analytic bracket geometrically if rounding broke it."""
    for _ in range(_MAX_DOUBLINGS):
        g_lo, _ = _residual(p, lo, u, upper)
        g_hi, _ = _residual(p, hi, u, upper)
        bad_lo = ~(g_lo <= 0.0)
        bad_hi = ~(g_hi >= 0.0)
        if not (bad_lo.any() or bad_hi.any()):
            return lo, hi
        lo = np.where(bad_lo, lo - math.log(2.0) * (1.0 + np.abs(lo)), lo)
        hi = np.where(bad_hi, hi + math.log(2.0) * (1.0 + np.abs(hi)), hi)
    raise ConvergenceError("could not bracket the quantile")


def _solve(p: BwParams, u: np.ndarray):
    """Vectorised root solve for 0 < u < 1. Returns (t, iterations, t_lo, t_hi)."""
    lo = np.minimum(_log_burr_quantile(p, u / 2.0), _log_weibull_quantile(p, u / 2.0))
    hi = np.minimum(_log_burr_quantile(p, u), _log_weibull_quantile(p, u))
    lo = np.where(np.isfinite(lo), lo, -745.0)
    hi = np.where(np.isfinite(hi), hi, 745.0)
    lo = lo - 1e-9 * (1.0 + np.abs(lo))
    hi = hi + 1e-9 * (1.0 + np.abs(hi))
    upper = u >= 0.5
    lo, hi = _expand(p, lo, hi, u, upper)
    b_lo, b_hi = lo.copy(), hi.copy()

    t = 0.5 * (lo + hi)
    iters = np.zeros(u.shape, dtype=int)
    active = np.ones(u.shape, dtype=bool)
    for _ in range(_MAX_ITER):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        ti, ui, lo_i, hi_i = t[idx], u[idx], lo[idx], hi[idx]
        g, d = _residual(p, ti, ui, upper[idx])
        iters[idx] += 1
        hit = g == 0.0
        lo_i = np.where(g < 0.0, ti, lo_i)
        hi_i = np.where(g > 0.0, ti, hi_i)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = ti - g / d
        ok = np.isfinite(newton) & (newton > lo_i) & (newton < hi_i)
        t_new = np.where(ok, newton, 0.5 * (lo_i + hi_i))
        t_new = np.where(hit, ti, t_new)
        tol = _T_TOL * np.maximum(1.0, np.abs(ti))
        done = hit | (np.abs(t_new - ti) <= tol) | (hi_i - lo_i <= tol)
        t[idx], lo[idx], hi[idx] = t_new, lo_i, hi_i
        active[idx] = ~done
    if active.any():
        raise ConvergenceError(f"quantile solve did not converge for {active.sum()} level(s)")
    return t, iters, b_lo, b_hi


def _check_levels(u) -> np.ndarray:
    arr = np.asarray(u, dtype=float)
    if not np.all((arr >= 0.0) & (arr < 1.0)):
        raise DomainError("probability level must lie in [0, 1)")
    return arr


def quantile(p: BwParams, u):
    """Inverse distribution function; ``quantile(p, 0) == 0``."""
    arr = _check_levels(u)
    flat = arr.ravel()
    out = np.zeros_like(flat)
    pos = flat > 0.0
    if pos.any():
        t, *_ = _solve(p, flat[pos])
        out[pos] = np.exp(t)
    out = out.reshape(arr.shape)
    return float(out) if np.ndim(u) == 0 else out


def quantile_report(p: BwParams, u: float) -> QuantileSolveReport:
    """Scalar quantile solve with iteration count, cdf residual and bracket."""
    from .distribution import cdf

    u = float(_check_levels(u))
    if u == 0.0:
        return QuantileSolveReport(0.0, 0, 0.0, (0.0, 0.0))
    t, iters, lo, hi = _solve(p, np.array([u]))
    x = float(np.exp(t[0]))
    return QuantileSolveReport(
        x=x,
        iterations=int(iters[0]),
        residual=cdf(p, x) - u,
        bracket=(float(np.exp(lo[0])), float(np.exp(hi[0]))),
    )


def median(p: BwParams) -> float:
    return quantile(p, 0.5)


def _invert(args) -> np.ndarray:
    p, u = args
    t, *_ = _solve(p, u)
    return np.exp(t)


def sample(p: BwParams, n: int, stream: SeededStream, workers: int = 1) -> np.ndarray:
    """Draw ``n`` variates by inverting the cdf at seeded uniforms.

    With ``workers > 1`` the inversion is split over processes; the
    uniforms are drawn up front, so the output does not depend on it.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer, float)) or int(n) != n or n < 1:
        raise DomainError(f"sample size must be a positive integer, got {n!r}")
    u = stream.uniforms(int(n))
    if workers <= 1 or u.size < 2 * workers:
        return _invert((p, u))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_invert, [(p, chunk) for chunk in np.array_split(u, workers)])
        return np.concatenate(list(parts))
