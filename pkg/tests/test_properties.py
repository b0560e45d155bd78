import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from burrweibull import BwParams, SeededStream, cdf, log_likelihood, pdf, quantile, sample, survival

positive = st.floats(min_value=0.2, max_value=8.0, allow_nan=False)
params = st.builds(BwParams, positive, positive, positive, positive)
levels = st.floats(min_value=1e-6, max_value=1 - 1e-6)


@settings(max_examples=150, deadline=None)
@given(params, levels)
def test_quantile_inverts_cdf(p, u):
    x = quantile(p, u)
    assert x > 0
    if u < 0.5:
        assert abs(cdf(p, x) - u) <= 1e-10
    else:
        assert abs(survival(p, x) - (1 - u)) <= 1e-10


@settings(max_examples=150, deadline=None)
@given(params, st.floats(min_value=1e-3, max_value=50.0))
def test_cdf_survival_complement(p, x):
    F, S = cdf(p, x), survival(p, x)
    assert 0.0 <= F <= 1.0 and 0.0 <= S <= 1.0
    assert abs(F + S - 1.0) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(params, st.floats(min_value=1e-3, max_value=20.0), st.floats(min_value=1e-3, max_value=20.0))
def test_cdf_monotone(p, a, b):
    lo, hi = min(a, b), max(a, b)
    assert cdf(p, lo) <= cdf(p, hi)


@settings(max_examples=100, deadline=None)
@given(params, st.floats(min_value=1e-2, max_value=10.0))
def test_pdf_nonnegative_and_finite(p, x):
    f = pdf(p, x)
    assert f >= 0 and math.isfinite(f)


@settings(max_examples=50, deadline=None)
@given(params, st.integers(min_value=0, max_value=2**64 - 1), st.integers(min_value=1, max_value=200))
def test_sampling_reproducible_and_positive(p, seed, n):
    a = sample(p, n, SeededStream(seed))
    assert a.shape == (n,) and np.all(a > 0)
    assert a.tobytes() == sample(p, n, SeededStream(seed)).tobytes()


@settings(max_examples=50, deadline=None)
@given(params, st.integers(min_value=0, max_value=1000))
def test_log_likelihood_order_free(p, seed):
    x = sample(p, 40, SeededStream(seed))
    assert log_likelihood(p, x) == log_likelihood(p, x[::-1])
