"""
Moments, inequality curves, entropies and order statistics of the BW law.

All integrals are computed by adaptive Gauss-Kronrod quadrature in the
variable t = log(x), split at log-quantiles of the distribution so that the
bulk of the mass is resolved regardless of where it sits. The closed-form
series expansions (moments and Renyi entropy) are available as
cross-checks with explicit diagnostics; they are never the primary route
because their beta/gamma arguments leave the valid region after finitely
many terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate, special

from .distribution import BwParams, _log_pdf, _log_sf, cdf, survival
from .errors import DomainError, IntegrationError, RangeError, ValidityError
from .quantile import median, quantile

__all__ = [
    "MomentSummary",
    "SeriesDiagnostics",
    "raw_moment",
    "raw_moment_series",
    "central_moment",
    "moment_summary",
    "partial_expectation",
    "lower_partial_expectation",
    "mean_deviation_about_mean",
    "mean_deviation_about_median",
    "bonferroni",
    "lorenz",
    "conditional_moment",
    "renyi_entropy",
    "renyi_entropy_series",
    "shannon_entropy",
    "order_statistic_pdf",
    "mgf",
]

EPSREL = 1e-11
EPSABS = 1e-15
# acceptance threshold on the accumulated error estimate
_REL_ACCEPT = 1e-9
_ABS_ACCEPT = 1e-14

_SPLIT_LEVELS = np.array(
    [1e-12, 1e-8, 1e-5, 1e-3, 0.02, 0.1, 0.25, 0.5, 0.75, 0.9, 0.98, 0.999,
     1 - 1e-5, 1 - 1e-8, 1 - 1e-12]
)


@dataclass(frozen=True)
class MomentSummary:
    raw_moments: tuple[float, ...]
    sd: float
    cv: float
    skewness: float
    kurtosis: float


@dataclass(frozen=True)
class SeriesDiagnostics:
    """Book-keeping for a truncated series.

    ``last_term_magnitude`` doubles as the truncation error estimate.
    ``validity_violated_at_term`` is the first summation index whose
    beta/gamma argument left the region where the term-wise integral exists.
    """

    terms_used: int
    last_term_magnitude: float
    converged: bool
    validity_violated_at_term: Optional[int] = None


# --------------------------------------------------------------------------
# quadrature
# --------------------------------------------------------------------------


def _log_splits(p: BwParams) -> np.ndarray:
    q = quantile(p, _SPLIT_LEVELS)
    q = q[q > 0]
    return np.unique(np.log(q))


def _integrate(
    p: BwParams,
    integrand: Callable[[float], float],
    lo: float = 0.0,
    hi: float = math.inf,
    extra_points=(),
) -> float:
    """Integrate ``integrand(x)`` over (lo, hi) for the distribution ``p``.

    Works in t = log x, i.e. integrates integrand(e^t) e^t dt, split at the
    distribution's log-quantiles plus any ``extra_points`` (given in x).
    """
    t_lo = -math.inf if lo <= 0.0 else math.log(lo)
    t_hi = math.inf if math.isinf(hi) else math.log(hi)
    if t_hi <= t_lo:
        return 0.0
    pts = list(_log_splits(p))
    pts += [math.log(e) for e in extra_points if e > 0 and math.isfinite(e)]
    pts = sorted(t for t in set(pts) if t_lo < t < t_hi)
    edges = [t_lo, *pts, t_hi]

    def h(t):
        # outside this range x underflows or overflows and the BW integrands vanish
        if not -740.0 < t < 709.0:
            return 0.0
        x = math.exp(t)
        return integrand(x) * x

    total, err = 0.0, 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, e, *_ = integrate.quad(
            h, a, b, epsabs=EPSABS, epsrel=EPSREL, limit=200, full_output=1
        )
        total += val
        err += e
    if not math.isfinite(total) or err > max(_REL_ACCEPT * abs(total), _ABS_ACCEPT):
        raise IntegrationError(
            f"quadrature did not converge (value {total!r}, error estimate {err:.3g})"
        )
    return total


def _scalar_log_pdf(p: BwParams) -> Callable[[float], float]:
    def lf(x: float) -> float:
        return float(_log_pdf(p, np.asarray(x)))

    return lf


# --------------------------------------------------------------------------
# moments
# --------------------------------------------------------------------------


def raw_moment(p: BwParams, r: float) -> float:
    """E[X^r] by quadrature; ``r = 0`` returns exactly 1."""
    if r < 0 or not math.isfinite(r):
        raise DomainError(f"moment order must be >= 0, got {r!r}")
    if r == 0:
        return 1.0
    lf = _scalar_log_pdf(p)
    return _integrate(p, lambda x: math.exp(r * math.log(x) + lf(x)))


def central_moment(p: BwParams, r: int, mean: Optional[float] = None) -> float:
    """E[(X - mu)^r] by direct quadrature (no raw-moment cancellation)."""
    mu = raw_moment(p, 1) if mean is None else mean
    lf = _scalar_log_pdf(p)

    def g(x):
        d = x - mu
        if d == 0.0:
            return 0.0
        return math.copysign(1.0, d) ** r * math.exp(r * math.log(abs(d)) + lf(x))

    return _integrate(p, g, extra_points=(mu,))


def raw_moment_series(p: BwParams, r: float, max_terms: int = 64):
    """E[X^r] from the three-part beta/gamma series, truncated.

    Splits E[X^r] = A + B - C where B = lam^r Gamma(r/beta + 1) is exact,

        A = k sum_m (-1)^m / (lam^{m beta} m!) B(k + (r + m beta)/c, 1 - (r + m beta)/c)
        C = sum_t (-1)^t binom(k+t-1, t) lam^{r - ct} Gamma((r + beta - ct)/beta)

    Each sum stops at the first term whose beta/gamma argument is
    non-positive, at ``max_terms``, or when a term drops below 1e-14 of
    the partial sum. Returns ``(value, SeriesDiagnostics)``.
    """
    c, k, lam, beta = p.as_tuple()
    if r >= c:
        raise ValidityError(f"series requires r < c (r={r}, c={c}); use raw_moment")

    violated_at = None
    a_sum, a_last, a_conv, n_a = 0.0, 0.0, False, 0
    for m in range(max_terms):
        s = (r + m * beta) / c
        if 1.0 - s <= 0.0:
            violated_at = m
            break
        log_mag = (
            math.log(k)
            - m * beta * math.log(lam)
            - math.lgamma(m + 1)
            + special.betaln(k + s, 1.0 - s)
        )
        term = (-1) ** m * math.exp(log_mag)
        a_sum += term
        a_last = abs(term)
        n_a += 1
        if a_last < 1e-14 * abs(a_sum):
            a_conv = True
            break

    b_val = lam**r * math.gamma(r / beta + 1.0)

    c_sum, c_last, c_conv, n_c = 0.0, 0.0, False, 0
    for t in range(max_terms):
        g_arg = (r + beta - c * t) / beta
        if g_arg <= 0.0:
            break
        term = (
            (-1) ** t
            * special.binom(k + t - 1.0, t)
            * lam ** (r - c * t)
            * math.gamma(g_arg)
        )
        c_sum += term
        c_last = abs(term)
        n_c += 1
        if c_last < 1e-14 * abs(c_sum):
            c_conv = True
            break

    diag = SeriesDiagnostics(
        terms_used=n_a + n_c,
        last_term_magnitude=float(a_last + c_last),
        converged=a_conv and c_conv,
        validity_violated_at_term=violated_at,
    )
    return float(a_sum + b_val - c_sum), diag


def moment_summary(p: BwParams) -> MomentSummary:
    """First six raw moments plus SD, CV, skewness and (non-excess) kurtosis."""
    raw = tuple(raw_moment(p, r) for r in range(1, 7))
    mu = raw[0]
    m2 = central_moment(p, 2, mu)
    m3 = central_moment(p, 3, mu)
    m4 = central_moment(p, 4, mu)
    sd = math.sqrt(m2)
    return MomentSummary(
        raw_moments=raw,
        sd=sd,
        cv=sd / mu,
        skewness=m3 / sd**3,
        kurtosis=m4 / m2**2,
    )


def mgf(p: BwParams, t: float) -> float:
    """Moment generating function E[exp(tX)] by quadrature.

    Finite for t <= 0, for any t when beta > 1, and for t < 1/lam when
    beta == 1.
    """
    if (p.beta < 1.0 and t > 0.0) or (p.beta == 1.0 and t >= 1.0 / p.lam):
        raise DomainError(f"mgf diverges at t={t} for beta={p.beta}")
    if t == 0.0:
        return 1.0
    extra = ()
    if t > 0.0 and p.beta > 1.0:
        # maximiser of t x - (x/lam)^beta
        extra = (p.lam * (t * p.lam / p.beta) ** (1.0 / (p.beta - 1.0)),)
    lf = _scalar_log_pdf(p)
    return _integrate(p, lambda x: math.exp(t * x + lf(x)), extra_points=extra)


# --------------------------------------------------------------------------
# partial expectations and what is built on them
# --------------------------------------------------------------------------


def partial_expectation(p: BwParams, t: float) -> float:
    """Upper partial expectation T(t) = integral_t^inf x f(x) dx."""
    if not t >= 0.0:
        raise DomainError(f"threshold must be >= 0, got {t!r}")
    lf = _scalar_log_pdf(p)
    return _integrate(p, lambda x: x * math.exp(lf(x)), lo=t)


def lower_partial_expectation(p: BwParams, t: float) -> float:
    """integral_0^t x f(x) dx, i.e. mean - T(t), integrated directly."""
    if not t >= 0.0:
        raise DomainError(f"threshold must be >= 0, got {t!r}")
    lf = _scalar_log_pdf(p)
    return _integrate(p, lambda x: x * math.exp(lf(x)), hi=t)


def mean_deviation_about_mean(p: BwParams) -> float:
    """E|X - mu| = 2 mu F(mu) - 2 mu + 2 T(mu)."""
    mu = raw_moment(p, 1)
    return 2.0 * mu * cdf(p, mu) - 2.0 * mu + 2.0 * partial_expectation(p, mu)


def mean_deviation_about_median(p: BwParams) -> float:
    """E|X - M| = -mu + 2 T(M)."""
    mu = raw_moment(p, 1)
    return -mu + 2.0 * partial_expectation(p, median(p))


def _lorenz_numerator(p: BwParams, prob: float, mu: float) -> float:
    if prob == 0.0:
        return 0.0
    if prob == 1.0:
        return mu
    q = quantile(p, prob)
    if prob <= 0.5:
        return lower_partial_expectation(p, q)
    return mu - partial_expectation(p, q)


def lorenz(p: BwParams, prob: float) -> float:
    """Lorenz curve L(prob) = (1/mu) integral_0^q x f(x) dx, q = F^-1(prob)."""
    if not 0.0 <= prob <= 1.0:
        raise DomainError(f"prob must lie in [0, 1], got {prob!r}")
    mu = raw_moment(p, 1)
    return _lorenz_numerator(p, prob, mu) / mu


def bonferroni(p: BwParams, prob: float) -> float:
    """Bonferroni curve B(prob) = L(prob) / prob."""
    if not 0.0 < prob <= 1.0:
        raise DomainError(f"prob must lie in (0, 1], got {prob!r}")
    mu = raw_moment(p, 1)
    return _lorenz_numerator(p, prob, mu) / (prob * mu)


def conditional_moment(p: BwParams, r: float, t: float) -> float:
    """E[X^r | X > t] = integral_t^inf x^r f(x) dx / S(t)."""
    if not t > 0.0:
        raise DomainError(f"threshold must be > 0, got {t!r}")
    s = survival(p, t)
    if s == 0.0:
        raise RangeError(f"survival at t={t} underflows to 0")
    lf = _scalar_log_pdf(p)
    tail = _integrate(p, lambda x: math.exp(r * math.log(x) + lf(x)), lo=t)
    return tail / s


# --------------------------------------------------------------------------
# entropy
# --------------------------------------------------------------------------


def _check_renyi_convergence(p: BwParams, v: float) -> None:
    # near 0 the density behaves like x^(a-1), a = min(ck, beta)
    a = min(p.c * p.k, p.beta)
    if a < 1.0 and v * (1.0 - a) >= 1.0:
        raise IntegrationError(
            f"integral of f^v diverges at 0 (v={v}, density exponent {a - 1.0:.6g})"
        )


def renyi_entropy(p: BwParams, v: float) -> float:
    """Renyi entropy (1/(1-v)) log integral f^v, v > 0, v != 1."""
    if not (v > 0.0) or v == 1.0 or not math.isfinite(v):
        raise DomainError(f"Renyi order must be > 0 and != 1, got {v!r}")
    _check_renyi_convergence(p, v)
    lf = _scalar_log_pdf(p)
    integral = _integrate(p, lambda x: math.exp(v * lf(x)))
    return math.log(integral) / (1.0 - v)


def shannon_entropy(p: BwParams) -> float:
    """Differential entropy -E[log f(X)]."""
    lf = _scalar_log_pdf(p)

    def g(x):
        l = lf(x)
        return -l * math.exp(l) if l > -math.inf else 0.0

    return _integrate(p, g)


def renyi_entropy_series(p: BwParams, v: int, j_max: int = 200):
    """Renyi entropy of integer order from the triple beta-function series.

    Expands exp(-v (x/lam)^beta) in j, the v-th power of the density
    bracket binomially in p, and (1-G)^p in w; each term integrates to
    B(a, b)/c. Terms with a <= 0 or b <= 0 have no finite integral and are
    skipped; the first j at which that happens is reported. Returns
    ``(entropy, SeriesDiagnostics)``; entropy is NaN when the partial sum is
    not positive.
    """
    if isinstance(v, bool) or int(v) != v or v < 2:
        raise DomainError(f"series form needs an integer order >= 2, got {v!r}")
    v = int(v)
    c, k, lam, beta = p.as_tuple()
    total, n_terms, last = 0.0, 0, 0.0
    violated_at = None
    for j in range(j_max + 1):
        for pp in range(v + 1):
            for w in range(pp + 1):
                e = beta * j + pp * beta + c * pp - c * v - v
                a = e / c + 1.0 / c - k * pp - pp + k * v + v + k * w
                b = -e / c - 1.0 / c
                if a <= 0.0 or b <= 0.0:
                    if violated_at is None:
                        violated_at = j
                    continue
                log_mag = (
                    j * math.log(v)
                    + pp * math.log(beta)
                    - (beta * j + pp * beta) * math.log(lam)
                    - math.lgamma(j + 1)
                    + (v - pp) * math.log(k * c)
                    + math.log(math.comb(v, pp) * math.comb(pp, w))
                    - math.log(c)
                    + special.betaln(a, b)
                )
                term = (-1) ** (j + w) * math.exp(log_mag)
                total += term
                last = abs(term)
                n_terms += 1
    diag = SeriesDiagnostics(
        terms_used=n_terms,
        last_term_magnitude=last,
        converged=violated_at is None and last < 1e-14 * abs(total),
        validity_violated_at_term=violated_at,
    )
    entropy = math.log(total) / (1.0 - v) if total > 0.0 else math.nan
    return entropy, diag


# --------------------------------------------------------------------------
# order statistics
# --------------------------------------------------------------------------


def order_statistic_pdf(p: BwParams, i: int, m: int, x):
    """Density of the i-th smallest of m iid BW draws, evaluated in log space."""
    if isinstance(i, bool) or isinstance(m, bool) or int(i) != i or int(m) != m:
        raise DomainError("order-statistic indices must be integers")
    if not 1 <= i <= m:
        raise DomainError(f"need 1 <= i <= m, got i={i}, m={m}")
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError("x must be finite and > 0")
    log_coef = math.lgamma(m + 1) - math.lgamma(i) - math.lgamma(m - i + 1)
    logs = _log_sf(p, arr)
    with np.errstate(divide="ignore"):
        logF = np.log(-np.expm1(logs))
    out = log_coef + _log_pdf(p, arr)
    if i > 1:
        out = out + (i - 1) * logF
    if m > i:
        out = out + (m - i) * logs
    res = np.exp(out)
    return float(res) if np.ndim(x) == 0 else res
