import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from lexiscale.fitting import (
    FitError,
    FitRegion,
    LogBinning,
    fit_attachment,
    fit_growth,
    fit_power_law,
    fit_rank,
    fit_spectrum,
    log_resample,
    loglog_ols,
)
from lexiscale.stats import attachment_profile, frequency_spectrum, growth_curve, rank_profile


def exact_binning(a, C, b, n_bins):
    """Binned points lying exactly on C * x**a at the bin midpoints b**(i+1/2)."""
    idx = np.arange(n_bins)
    x = b ** (idx + 0.5)
    lo = np.ceil(b ** idx).astype(np.int64)
    return LogBinning(b, idx, lo, lo + 1, x, C * x**a)


def test_constant_series_bins_to_constant():
    for b in (1.1, 1.2, 1.5, 2.0, 3.7):
        binned = log_resample({j: 4.5 for j in range(1, 501)}, b)
        assert np.allclose(binned.y, 4.5, rtol=0, atol=1e-12)


def test_half_open_bins():
    binned = log_resample({j: float(j) for j in range(1, 9)}, 2)
    assert binned.index.tolist() == [0, 1, 2]
    assert binned.lo.tolist() == [1, 2, 4] and binned.hi.tolist() == [2, 4, 8]
    assert binned.y[1] == pytest.approx(2.5)
    assert binned.x[1] == pytest.approx(math.sqrt(2 * 4))


def test_missing_abscissae_count_as_zero():
    binned = log_resample({1: 1.0, 2: 6.0, 7: 3.0}, 2)
    assert binned.y.tolist() == pytest.approx([1.0, 3.0, 0.75])


def test_resample_rejects_bad_input():
    with pytest.raises(ValueError):
        log_resample({1: 1.0}, 1.0)
    with pytest.raises(ValueError):
        log_resample({}, 1.2)
    with pytest.raises(ValueError):
        log_resample({0: 1.0, 2: 1.0}, 1.2)


def test_resample_alice_spectrum_against_direct_sums(alice):
    series = frequency_spectrum(alice).series()
    b = 1.5
    binned = log_resample(series, b)
    kmax = max(series)
    i = 0
    checked = 0
    while True:
        lo, hi = math.ceil(b**i - 1e-9), math.ceil(b ** (i + 1) - 1e-9)
        if hi - 1 > kmax:
            break
        if hi > lo:
            direct = sum(series.get(j, 0.0) for j in range(lo, hi)) / (hi - lo)
            (pos,) = np.flatnonzero(binned.index == i)
            assert binned.y[pos] == pytest.approx(direct, rel=1e-12, abs=1e-15)
            checked += 1
        i += 1
    assert checked == len(binned) > 10


@given(st.dictionaries(st.integers(1, 400), st.floats(0, 1e3), min_size=1),
       st.floats(1.01, 3.0))
def test_binning_preserves_mass(series, b):
    binned = log_resample(series, b)
    covered = sum(v for j, v in series.items() if j < (binned.hi[-1] if len(binned) else 1))
    assert float((binned.width * binned.y).sum()) == pytest.approx(covered, rel=1e-9, abs=1e-9)


def test_exact_power_law_recovery():
    fit = fit_power_law(exact_binning(-2.0, 1.0, 1.2, 51), FitRegion(1, 1e4))
    assert fit.slope == pytest.approx(-2.0, abs=1e-9)
    assert fit.r2 == pytest.approx(1.0, abs=1e-12)


def test_integer_sampled_power_law_is_close():
    # bin means of j**-2 over integer bins are not exactly a power law; the
    # bias shrinks as bins widen
    x = np.arange(1, 10_001)
    fit = fit_power_law(log_resample((x, x**-2.0), 1.2), FitRegion(1, 1e4), decaying=True)
    assert fit.exponent == pytest.approx(2.0, abs=2e-3)
    assert fit.r2 > 0.9998


@settings(max_examples=300)
@given(a=st.floats(-3, 1), C=st.floats(1e-3, 1e3), b=st.floats(1.01, 2.0),
       start=st.integers(0, 20), width=st.integers(3, 30))
def test_exact_recovery_property(a, C, b, start, width):
    binned = exact_binning(a, C, b, start + width + 5)
    lo, hi = binned.x[start], binned.x[start + width - 1]
    assume(lo >= 1)
    fit = fit_power_law(binned, FitRegion(lo, hi * (1 + 1e-12)))
    assert fit.n_points >= 3
    assert fit.slope == pytest.approx(a, abs=1e-9)
    assert fit.amplitude == pytest.approx(C, rel=1e-8)
    assert fit.r2 == pytest.approx(1.0, abs=1e-12)


def test_constant_series_fit():
    fit = fit_power_law(log_resample({j: 0.1 for j in range(1, 2000)}, 1.2), FitRegion(1, 2000))
    assert fit.slope == pytest.approx(0.0, abs=1e-12)
    assert fit.r2 == 1.0


def test_too_few_bins():
    with pytest.raises(FitError):
        fit_power_law(exact_binning(-1, 1, 2.0, 10), FitRegion(1, 3))


def test_zero_bins_excluded_and_counted():
    binned = log_resample({1: 1.0, 2: 0.5, 3: 0.3, 20: 0.01, 100: 0.002}, 1.5)
    fit = fit_power_law(binned, FitRegion(1, 100))
    assert fit.excluded_bins == int(np.count_nonzero(binned.y == 0))
    assert fit.excluded_bins > 0
    assert fit.n_points == int(np.count_nonzero(binned.y > 0))


@given(st.lists(st.tuples(st.floats(0.1, 1e4), st.floats(1e-3, 1e3)), min_size=3, max_size=40,
                unique_by=lambda p: p[0]))
def test_r2_two_paths(points):
    x, y = np.array(points).T
    assume(np.ptp(np.log(x)) > 1e-3 and np.ptp(np.log(y)) > 1e-6)
    slope, intercept, r2, sse, sst = loglog_ols(x, y)
    # independent path: squared Pearson correlation of the logs
    corr = np.corrcoef(np.log(x), np.log(y))[0, 1]
    assert r2 == pytest.approx(corr**2, abs=1e-9)
    assert r2 == pytest.approx(1 - sse / sst, abs=1e-12)
    assert r2 <= 1.0


def test_scale_equivariance(alice):
    g = growth_curve(alice)
    z = rank_profile(alice)
    x_g, x_z = np.arange(1, g.T + 1), np.arange(1, z.Nt + 1)
    for x, y, region in ((x_g, g.N, FitRegion(100, 20000)), (x_z, z.Z, FitRegion(60, 1000))):
        base = fit_power_law(log_resample((x, y), 1.2), region)
        for c in (1e-3, 0.5, 37.0):
            scaled = fit_power_law(log_resample((x, c * y), 1.2), region)
            assert scaled.slope == pytest.approx(base.slope, abs=1e-12)
            assert scaled.amplitude == pytest.approx(c * base.amplitude, rel=1e-10)


def test_wrappers_sign_conventions(alice):
    beta = fit_spectrum(frequency_spectrum(alice))
    alpha = fit_rank(rank_profile(alice))
    lam = fit_growth(growth_curve(alice))
    assert beta.exponent > 0 and beta.slope < 0 and beta.law == "spectrum"
    assert alpha.exponent > 0 and alpha.slope < 0
    assert 0 < lam.exponent < 1 and lam.slope == lam.exponent
    assert beta.region.to_json() == [2, 100]
    assert set(lam.to_json()) >= {"law", "exponent", "amplitude", "r2", "region", "base", "excluded_bins"}


def test_attachment_fit_on_linear_kernel():
    # word k occurs k times in each half, so phi(k) = k
    half = np.repeat(np.arange(8), np.arange(1, 9))
    fit = fit_attachment(attachment_profile(np.concatenate([half, half])))
    assert fit.slope == pytest.approx(1.0, abs=1e-12)
    assert fit.r2 == pytest.approx(1.0, abs=1e-12)


def test_region_validation():
    with pytest.raises(ValueError):
        FitRegion(0.5, 10)
    with pytest.raises(ValueError):
        FitRegion(10, 10)
