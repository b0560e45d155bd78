"""Reference computations that share no code with the package under test."""

from __future__ import annotations

import math

import mpmath
import numpy as np
from scipy import stats


def mc_bw_draws(c, k, lam, beta, n, seed):
    """BW variates as min(Burr III, Weibull), each by its closed-form inverse."""
    rng = np.random.default_rng(seed)
    u1 = rng.random(n)
    u2 = rng.random(n)
    burr = (u1 ** (-1.0 / k) - 1.0) ** (-1.0 / c)
    weib = lam * (-np.log1p(-u2)) ** (1.0 / beta)
    return np.minimum(burr, weib)


def _summary(x):
    raw = [float(np.mean(x**r)) for r in range(1, 7)]
    mu = raw[0]
    d = x - mu
    m2, m3, m4 = (float(np.mean(d**r)) for r in (2, 3, 4))
    sd = math.sqrt(m2)
    return raw + [sd, sd / mu, m3 / sd**3, m4 / m2**2]


MOMENT_LABELS = ["mu1", "mu2", "mu3", "mu4", "mu5", "mu6", "SD", "CV", "CS", "CK"]


def mc_moment_intervals(c, k, lam, beta, n=10_000_000, seed=0, batches=100, level=0.99):
    """Point estimates and batch-means confidence intervals for moment summaries."""
    x = mc_bw_draws(c, k, lam, beta, n, seed)
    point = np.array(_summary(x))
    per_batch = np.array([_summary(b) for b in np.array_split(x, batches)])
    se = per_batch.std(axis=0, ddof=1) / math.sqrt(batches)
    half = stats.t.ppf(0.5 + level / 2.0, batches - 1) * se
    return point, point - half, point + half


def mp_bw_loglik(params, data, dps=40):
    """High-precision BW log-likelihood written directly from the density."""
    with mpmath.workdps(dps):
        c, k, lam, beta = (mpmath.mpf(v) for v in params)
        total = mpmath.mpf(0)
        for xv in data:
            x = mpmath.mpf(xv)
            g = (1 + x ** (-c)) ** (-k)
            burr_pdf = c * k * x ** (-c - 1) * (1 + x ** (-c)) ** (-k - 1)
            weib_haz = beta / lam**beta * x ** (beta - 1)
            total += -((x / lam) ** beta) + mpmath.log(burr_pdf + weib_haz * (1 - g))
        return total


def mp_central_gradient(params, data, rel_step=1e-12, dps=40):
    """Central finite differences of the high-precision log-likelihood."""
    grad = []
    with mpmath.workdps(dps):
        for j in range(len(params)):
            h = mpmath.mpf(params[j]) * rel_step
            up = list(map(mpmath.mpf, params))
            dn = list(map(mpmath.mpf, params))
            up[j] += h
            dn[j] -= h
            grad.append(float((mp_bw_loglik(up, data, dps) - mp_bw_loglik(dn, data, dps)) / (2 * h)))
    return np.array(grad)
