import math

import mpmath
import numpy as np
import pytest
from scipy import integrate

from burrweibull import (
    BurrIII,
    BwParams,
    DomainError,
    RangeError,
    Weibull,
    cdf,
    hazard,
    kevlar_dataset,
    log_likelihood,
    log_pdf,
    pdf,
    reversed_hazard,
    submodel_cdf,
    submodel_log_pdf,
    submodel_pdf,
    survival,
    validate_params,
)

TABLE_SETS = [
    (3, 1, 2, 0.4),
    (0.1, 1.7, 1, 1),
    (1.8, 1.3, 0.6, 3),
    (3, 0.1, 0.7, 0.5),
    (0.5, 1.2, 1, 0.8),
    (5, 2.5, 0.5, 1.5),
    (1, 1, 0.2, 0.9),
    (2, 3, 0.4, 0.8),
    (3, 1.2, 0.8, 1.5),
    (0.4, 0.2, 1, 2),
]
P = BwParams(3, 1, 2, 0.4)
UNIT = BwParams(1, 1, 1, 1)
KEVLAR = kevlar_dataset()


# --- parameters --------------------------------------------------------------


def test_validate_params_accepts_positive():
    assert validate_params(3, 1, 2, 0.4) == BwParams(3, 1, 2, 0.4)


@pytest.mark.parametrize(
    "bad", [(0, 1, 1, 1), (1, 1, -2, 1), (math.nan, 1, 1, 1), (1, math.inf, 1, 1), (1, 1, 1, -0.0)]
)
def test_validate_params_rejects(bad):
    with pytest.raises(DomainError):
        validate_params(*bad)


def test_submodel_params_validate():
    with pytest.raises(DomainError):
        BurrIII(0, 1)
    with pytest.raises(DomainError):
        Weibull(1, math.nan)


# --- cdf / survival ----------------------------------------------------------


def test_cdf_examples():
    assert cdf(P, 0) == 0.0
    assert abs(cdf(P, 0.50091) - 0.5) <= 5e-4
    assert cdf(UNIT, 1.0) == pytest.approx(1 - 0.5 * math.exp(-1), abs=1e-15)


def test_survival_examples():
    for p in TABLE_SETS:
        assert survival(BwParams(*p), 0.0) == 1.0
    assert survival(UNIT, 1.0) == pytest.approx(0.5 * math.exp(-1), rel=1e-14)
    assert abs(survival(P, 1.46385) - 0.1) <= 5e-4


@pytest.mark.parametrize("p", TABLE_SETS)
def test_complement_and_factorisation(p):
    bw = BwParams(*p)
    x = np.logspace(-6, 2, 400)
    assert np.max(np.abs(cdf(bw, x) + survival(bw, x) - 1.0)) <= 1e-12
    # component survivals written out in cancellation-free form
    s_burr = -np.expm1(-bw.k * np.log1p(x ** -bw.c))
    s_weib = np.exp(-((x / bw.lam) ** bw.beta))
    s = survival(bw, x)
    mask = s > 1e-300
    assert np.max(np.abs(s[mask] / (s_burr * s_weib)[mask] - 1.0)) <= 1e-12


@pytest.mark.parametrize("p", TABLE_SETS)
def test_cdf_monotone(p):
    x = np.linspace(0, 20, 1000)
    assert np.all(np.diff(cdf(BwParams(*p), x)) >= 0)


def test_cdf_rejects_bad_abscissa():
    for x in (-1.0, math.nan, math.inf):
        with pytest.raises(DomainError):
            cdf(P, x)


def test_cdf_tends_to_one():
    assert cdf(P, 1e6) == 1.0


def test_extreme_abscissae_stay_finite():
    x = np.array([1e-300, 1e-100, 1e-12, 1e12, 1e100])
    for fn in (cdf, survival):
        assert np.all(np.isfinite(fn(P, x)))
    assert np.all(np.isfinite(log_pdf(P, x[:3])))


# --- density ---------------------------------------------------------------


def test_pdf_near_zero_is_finite():
    v = pdf(UNIT, 1e-12)
    assert math.isfinite(v) and v >= 0


def test_pdf_rejects_zero_and_negative():
    for x in (0.0, -1.0):
        with pytest.raises(DomainError):
            pdf(P, x)


def test_pdf_matches_cdf_derivative():
    h = 1e-6
    fd = (cdf(P, 0.5 + h) - cdf(P, 0.5 - h)) / (2 * h)
    assert pdf(P, 0.5) == pytest.approx(fd, rel=1e-6)


@pytest.mark.parametrize("p", TABLE_SETS)
def test_pdf_central_difference_grid(p):
    bw = BwParams(*p)
    for x in (0.05, 0.3, 0.9, 1.7, 3.0):
        h = 1e-6 * max(x, 1.0)
        if cdf(bw, x) < 0.5:
            fd = (cdf(bw, x + h) - cdf(bw, x - h)) / (2 * h)
        else:  # difference the survival where the cdf would cancel
            fd = (survival(bw, x - h) - survival(bw, x + h)) / (2 * h)
        f = pdf(bw, x)
        if f > 1e-8:
            assert f == pytest.approx(fd, rel=1e-5)


def test_first_moment_by_independent_quadrature():
    p = BwParams(5, 2.5, 0.5, 1.5)
    val, _ = integrate.quad(lambda x: x * pdf(p, x), 0, np.inf, limit=200)
    assert abs(val - 0.44431) <= 1e-3


@pytest.mark.parametrize("p", TABLE_SETS)
def test_pdf_normalisation(p):
    bw = BwParams(*p)
    # integrate in log x so the spikes at 0 are resolved
    g = lambda t: math.exp(t) * pdf(bw, math.exp(t))
    val = sum(
        integrate.quad(g, a, b, limit=500, epsabs=1e-14, epsrel=1e-12)[0]
        for a, b in [(-700, -30), (-30, -5), (-5, 0), (0, 5), (5, 50)]
    )
    assert abs(val - 1.0) <= 1e-8


def test_log_pdf_consistency():
    assert log_pdf(UNIT, 1.0) == pytest.approx(math.log(pdf(UNIT, 1.0)), abs=1e-12)
    for p in TABLE_SETS:
        bw = BwParams(*p)
        x = np.logspace(-3, 1, 60)
        f = pdf(bw, x)
        ok = f > 1e-300
        assert np.allclose(log_pdf(bw, x)[ok], np.log(f[ok]), rtol=0, atol=1e-12)


def test_log_pdf_extreme_small_x_against_mpmath():
    x = 1e-300
    with mpmath.workdps(60):
        c, k, lam, beta = (mpmath.mpf(v) for v in (3, 1, 2, 0.4))
        xm = mpmath.mpf(x)
        g = (1 + xm ** (-c)) ** (-k)
        d = c * k * xm ** (-c - 1) * (1 + xm ** (-c)) ** (-k - 1) + beta / lam**beta * xm ** (beta - 1) * (1 - g)
        ref = float(-((xm / lam) ** beta) + mpmath.log(d))
    got = log_pdf(P, x)
    assert math.isfinite(got)
    assert got == pytest.approx(ref, rel=1e-12)


def test_kevlar_log_likelihood_at_reported_fit():
    p = BwParams(2.3858890, 2.4533820, 1.7572900, 0.6791234)
    assert abs(sum(log_pdf(p, v) for v in KEVLAR) + 98.66771) <= 0.01


# --- hazards -----------------------------------------------------------------


def test_hazard_ratio_identity():
    for p, x in ((UNIT, 1.0), (P, 0.5)):
        assert hazard(p, x) == pytest.approx(pdf(p, x) / survival(p, x), rel=1e-12)


@pytest.mark.parametrize("p", TABLE_SETS)
def test_hazard_weibull_asymptote(p):
    # far out the Burr III hazard decays like c/x and the Weibull hazard
    # like x^(beta-1); the Weibull term alone dominates only when
    # c / (beta (x/lam)^beta) is small
    bw = BwParams(*p)
    x = 1e3 * bw.lam
    weib = bw.beta / bw.lam**bw.beta * x ** (bw.beta - 1)
    if survival(bw, x) == 0.0:
        with pytest.raises(RangeError):
            hazard(bw, x)
        x = bw.lam * 100.0 ** (1.0 / bw.beta)  # Weibull survival e^-100, still representable
        weib = bw.beta / bw.lam**bw.beta * x ** (bw.beta - 1)
    h = hazard(bw, x)
    assert h == pytest.approx(weib + bw.c / x, rel=1e-2)
    if bw.c / (bw.beta * (x / bw.lam) ** bw.beta) < 1e-3:
        assert h == pytest.approx(weib, rel=1e-2)


def test_hazard_range_error_when_survival_underflows():
    with pytest.raises(RangeError):
        hazard(UNIT, 1000.0)


def test_reversed_hazard():
    assert reversed_hazard(UNIT, 1.0) == pytest.approx(pdf(UNIT, 1.0) / cdf(UNIT, 1.0), rel=1e-12)
    assert reversed_hazard(P, 0.50091) == pytest.approx(pdf(P, 0.50091) / 0.5, abs=1e-3)
    r = [reversed_hazard(UNIT, x) for x in (1e-1, 1e-2, 1e-3, 1e-4)]
    assert all(b > a for a, b in zip(r, r[1:]))


def test_reversed_hazard_range_error():
    with pytest.raises(RangeError):
        reversed_hazard(BwParams(5, 1, 1e300, 1), 1e-100)


# --- sub-models ------------------------------------------------------------


def test_submodel_values():
    assert submodel_cdf(Weibull(1, 1), 1.0) == pytest.approx(1 - math.exp(-1), rel=1e-15)
    assert submodel_cdf(BurrIII(1, 1), 1.0) == pytest.approx(0.5, rel=1e-15)
    assert submodel_pdf(Weibull(1, 1), 1.0) == pytest.approx(math.exp(-1), rel=1e-15)
    assert submodel_pdf(BurrIII(1, 1), 1.0) == pytest.approx(0.25, rel=1e-15)
    assert submodel_cdf(BurrIII(1, 1), 0.0) == 0.0


def test_submodel_kevlar_log_likelihoods():
    burr = BurrIII(1.8321566, 0.5343506)
    weib = Weibull(0.9899448, 0.9258876)
    assert abs(sum(submodel_log_pdf(burr, v) for v in KEVLAR) + 106.6097) <= 0.01
    assert abs(sum(submodel_log_pdf(weib, v) for v in KEVLAR) + 102.9768) <= 0.01
    assert log_likelihood(weib, KEVLAR) == pytest.approx(-102.9768, abs=0.01)


def test_submodel_domain_errors():
    with pytest.raises(DomainError):
        submodel_cdf(Weibull(1, 1), -1.0)
    with pytest.raises(DomainError):
        submodel_pdf(BurrIII(1, 1), 0.0)


def test_submodel_limits():
    x = np.linspace(0.01, 5, 200)
    big_k = BwParams(2.0, 1e6, 1.3, 1.7)
    assert np.max(np.abs(cdf(big_k, x) - submodel_cdf(Weibull(1.3, 1.7), x))) < 1e-5
    big_lam = BwParams(2.0, 1.5, 1e6, 1.7)
    assert np.max(np.abs(cdf(big_lam, x) - submodel_cdf(BurrIII(2.0, 1.5), x))) < 1e-5


def test_scalar_and_vector_forms_agree():
    x = np.array([0.1, 1.0, 3.0])
    v = pdf(P, x)
    assert isinstance(pdf(P, 1.0), float)
    assert [pdf(P, float(t)) for t in x] == list(v)
