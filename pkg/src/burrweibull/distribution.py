"""
Burr III-Weibull lifetime distribution and its two components.

The BW law is the competing-risk minimum of an independent Burr III
lifetime and a Weibull lifetime, so its survival function factorises:

    S(x) = (1 - (1 + x^-c)^-k) * exp(-(x / lam)^beta),   x >= 0.

Every function works in log space internally; ``(1 + x^-c)^-k`` is
evaluated as ``exp(-k * log1p(x^-c))`` with ``log1p(x^-c)`` computed as a
softplus of ``-c*log(x)``, which keeps abscissae from 1e-300 to 1e300
finite. Functions accept scalars or array-likes and return a ``float``
for scalar input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError, RangeError

__all__ = [
    "BwParams",
    "BurrIII",
    "Weibull",
    "SubModelParams",
    "validate_params",
    "cdf",
    "survival",
    "pdf",
    "log_pdf",
    "hazard",
    "reversed_hazard",
    "submodel_cdf",
    "submodel_pdf",
    "submodel_log_pdf",
]

TINY = np.finfo(float).tiny


def _check_positive(**kwargs: float) -> None:
    for name, value in kwargs.items():
        try:
            v = float(value)
        except (TypeError, ValueError):
            raise DomainError(f"{name} must be a real number, got {value!r}") from None
        if not math.isfinite(v) or v <= 0.0:
            raise DomainError(f"{name} must be finite and > 0, got {value!r}")


@dataclass(frozen=True)
class BwParams:
    """Parameters (c, k, lam, beta) of the Burr III-Weibull distribution.

    ``c`` and ``k`` are the Burr III shapes, ``lam`` the Weibull scale and
    ``beta`` the Weibull shape. All four must be finite and strictly positive.
    """

    c: float
    k: float
    lam: float
    beta: float

    def __post_init__(self):
        _check_positive(c=self.c, k=self.k, lam=self.lam, beta=self.beta)
        for name in ("c", "k", "lam", "beta"):
            object.__setattr__(self, name, float(getattr(self, name)))

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.c, self.k, self.lam, self.beta)

    @property
    def burr(self) -> "BurrIII":
        return BurrIII(self.c, self.k)

    @property
    def weibull(self) -> "Weibull":
        return Weibull(self.lam, self.beta)

    n_params = 4
    names = ("c", "k", "lam", "beta")


@dataclass(frozen=True)
class BurrIII:
    """Burr III component with cdf ``(1 + x^-c)^-k``."""

    c: float
    k: float

    def __post_init__(self):
        _check_positive(c=self.c, k=self.k)
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "k", float(self.k))

    def as_tuple(self) -> tuple[float, float]:
        return (self.c, self.k)

    n_params = 2
    names = ("c", "k")


@dataclass(frozen=True)
class Weibull:
    """Weibull component with cdf ``1 - exp(-(x/lam)^beta)``."""

    lam: float
    beta: float

    def __post_init__(self):
        _check_positive(lam=self.lam, beta=self.beta)
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "beta", float(self.beta))

    def as_tuple(self) -> tuple[float, float]:
        return (self.lam, self.beta)

    n_params = 2
    names = ("lam", "beta")


SubModelParams = Union[BurrIII, Weibull]


def validate_params(c: float, k: float, lam: float, beta: float) -> BwParams:
    """Build a :class:`BwParams`, raising :class:`DomainError` on bad input."""
    return BwParams(c, k, lam, beta)


# --------------------------------------------------------------------------
# argument handling
# --------------------------------------------------------------------------


def _abscissa(x, *, allow_zero: bool):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("x must be finite")
    if allow_zero:
        if np.any(arr < 0):
            raise DomainError("x must be >= 0")
    elif np.any(arr <= 0):
        raise DomainError("x must be > 0")
    return arr


def _out(arr: np.ndarray, like):
    if np.ndim(like) == 0:
        return float(arr)
    return arr


# --------------------------------------------------------------------------
# log-space building blocks; x > 0 arrays, no validation
# --------------------------------------------------------------------------


def _log1p_xmc(c: float, z: np.ndarray) -> np.ndarray:
    """log(1 + x^-c) given z = log(x)."""
    return np.logaddexp(0.0, -c * z)


def _log_burr_sf(c: float, k: float, z: np.ndarray, lp: np.ndarray) -> np.ndarray:
    """log(1 - (1 + x^-c)^-k), accurate in both tails."""
    with np.errstate(divide="ignore"):
        out = np.log(-np.expm1(-k * lp))
    # lp underflows to 0 once x^-c < ~1e-308; there 1 - G ~ k x^-c
    small = lp == 0.0
    if np.any(small):
        out = np.where(small, math.log(k) - c * z, out)
    return out


def _components(p: BwParams, x: np.ndarray):
    """Return (z, H, logA, logW, log1mG) for x > 0.

    H = (x/lam)^beta, A = ck x^{-c-1} (1+x^-c)^{-k-1} is the Burr III
    density, W = beta/lam^beta x^{beta-1} the Weibull hazard and 1 - G the
    Burr III survival.
    """
    c, k, lam, beta = p.as_tuple()
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        z = np.log(x)
        lp = _log1p_xmc(c, z)
        H = np.exp(beta * (z - math.log(lam)))
        logA = math.log(c * k) - (k + 1.0) * lp - (c + 1.0) * z
        logW = math.log(beta) - beta * math.log(lam) + (beta - 1.0) * z
        log1mG = _log_burr_sf(c, k, z, lp)
    return z, H, logA, logW, log1mG


def _log_density_bracket(logA, logW, log1mG):
    """log(A + W (1 - G)), the density with the Weibull survival factored out."""
    with np.errstate(invalid="ignore"):
        return np.logaddexp(logA, logW + log1mG)


def _log_sf(p: BwParams, x: np.ndarray) -> np.ndarray:
    """log S(x) for x >= 0."""
    c, k, lam, beta = p.as_tuple()
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        z = np.log(x)
        lp = _log1p_xmc(c, z)
        H = np.exp(beta * (z - math.log(lam)))
        out = _log_burr_sf(c, k, z, lp) - H
    return np.where(x == 0.0, 0.0, out)


def _log_pdf(p: BwParams, x: np.ndarray) -> np.ndarray:
    _, H, logA, logW, log1mG = _components(p, x)
    return _log_density_bracket(logA, logW, log1mG) - H


# --------------------------------------------------------------------------
# public evaluation
# --------------------------------------------------------------------------


def survival(p: BwParams, x):
    """Reliability function S(x) = P(X > x).

    Values below the smallest positive normal double are returned as 0.
    """
    arr = _abscissa(x, allow_zero=True)
    s = np.exp(_log_sf(p, arr))
    s = np.where(s < TINY, 0.0, s)
    return _out(s, x)


def cdf(p: BwParams, x):
    """Distribution function F(x) = 1 - S(x), with F(0) = 0."""
    arr = _abscissa(x, allow_zero=True)
    return _out(-np.expm1(_log_sf(p, arr)), x)


def log_pdf(p: BwParams, x):
    """Log-density, evaluated without forming the density first."""
    arr = _abscissa(x, allow_zero=False)
    return _out(_log_pdf(p, arr), x)


def pdf(p: BwParams, x):
    """Density f(x) for x > 0.

    The density at 0 may diverge (when ``c*k < 1`` or ``beta < 1``), so
    x = 0 is rejected.
    """
    arr = _abscissa(x, allow_zero=False)
    return _out(np.exp(_log_pdf(p, arr)), x)


def hazard(p: BwParams, x):
    """Hazard rate h(x) = f(x) / S(x).

    Computed as ``A/(1-G) + W`` so the Weibull survival cancels exactly; a
    :class:`RangeError` is raised wherever the survival itself underflows.
    """
    arr = _abscissa(x, allow_zero=False)
    logs = _log_sf(p, arr)
    if np.any(np.exp(logs) < TINY):
        raise RangeError("survival underflows to 0; hazard is not representable")
    _, _, logA, logW, log1mG = _components(p, arr)
    h = np.exp(_log_density_bracket(logA, logW, log1mG) - log1mG)
    return _out(h, x)


def reversed_hazard(p: BwParams, x):
    """Reversed hazard rate r(x) = f(x) / F(x)."""
    arr = _abscissa(x, allow_zero=False)
    logs = _log_sf(p, arr)
    F = -np.expm1(logs)
    if np.any(F <= 0.0):
        raise RangeError("cdf is 0; reversed hazard is not defined")
    r = np.exp(_log_pdf(p, arr) - np.log(F))
    return _out(r, x)


# --------------------------------------------------------------------------
# sub-models
# --------------------------------------------------------------------------


def _submodel_log_pdf(sp: SubModelParams, x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", over="ignore"):
        z = np.log(x)
        if isinstance(sp, BurrIII):
            lp = _log1p_xmc(sp.c, z)
            return math.log(sp.c * sp.k) - (sp.k + 1.0) * lp - (sp.c + 1.0) * z
        if isinstance(sp, Weibull):
            H = np.exp(sp.beta * (z - math.log(sp.lam)))
            return (
                math.log(sp.beta)
                - sp.beta * math.log(sp.lam)
                + (sp.beta - 1.0) * z
                - H
            )
    raise TypeError(f"unknown sub-model {type(sp).__name__}")


def submodel_cdf(sp: SubModelParams, x):
    """Distribution function of a Burr III or Weibull component."""
    arr = _abscissa(x, allow_zero=True)
    with np.errstate(divide="ignore", over="ignore"):
        z = np.log(arr)
        if isinstance(sp, BurrIII):
            out = np.exp(-sp.k * _log1p_xmc(sp.c, z))
        elif isinstance(sp, Weibull):
            out = -np.expm1(-np.exp(sp.beta * (z - math.log(sp.lam))))
        else:
            raise TypeError(f"unknown sub-model {type(sp).__name__}")
    return _out(np.where(arr == 0.0, 0.0, out), x)


def submodel_log_pdf(sp: SubModelParams, x):
    arr = _abscissa(x, allow_zero=False)
    return _out(_submodel_log_pdf(sp, arr), x)


def submodel_pdf(sp: SubModelParams, x):
    """Density of a Burr III or Weibull component."""
    arr = _abscissa(x, allow_zero=False)
    return _out(np.exp(_submodel_log_pdf(sp, arr)), x)
