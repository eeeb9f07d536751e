"""Power-law fitting on log-resampled curves.

Raw curves (P(k), Z(r), N(t)) are sampled on a linear grid, so in log-log
coordinates almost all points crowd into the last decade. Before fitting, the
curve is averaged over geometrically growing bins, then a straight line is
fitted to (log x, log y) by ordinary least squares. Goodness of fit is the R^2
of that line in log-log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

DEFAULT_BASE = 1.2


class FitError(ValueError):
    pass


@dataclass(frozen=True)
class FitRegion:
    lower: float
    upper: float

    def __post_init__(self):
        if not 1 <= self.lower < self.upper:
            raise ValueError(f"invalid fit region [{self.lower}, {self.upper}]")

    def contains(self, x: np.ndarray) -> np.ndarray:
        return (x >= self.lower) & (x <= self.upper)

    def to_json(self) -> list[float]:
        return [self.lower, self.upper]


SPECTRUM_REGION = FitRegion(2, 100)
RANK_REGION = FitRegion(60, 1000)
GROWTH_REGION = FitRegion(100, 20000)


@dataclass(frozen=True)
class LogBinning:
    """Series averaged over bins ``[ceil(b**i), ceil(b**(i+1)))``.

    Bins that contain no integer are dropped. ``x`` is the geometric midpoint
    ``b**(i + 0.5)`` and ``y`` the mean ordinate over every integer in the bin,
    absent abscissae counting as zero.
    """

    base: float
    index: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    x: np.ndarray
    y: np.ndarray

    @property
    def width(self) -> np.ndarray:
        return self.hi - self.lo

    @property
    def usable(self) -> np.ndarray:
        return self.y > 0

    def __len__(self) -> int:
        return int(self.index.shape[0])


def _ceil_power(b: float, i: np.ndarray) -> np.ndarray:
    p = b ** i.astype(float)
    # b**i that should be an exact integer can come out as n + 1ulp
    return np.ceil(p * (1 - 1e-12)).astype(np.int64)


def log_resample(series: Mapping[int, float] | tuple[np.ndarray, np.ndarray],
                 b: float = DEFAULT_BASE) -> LogBinning:
    """Average ``series`` (abscissa -> ordinate) over logarithmic bins of base ``b``.

    Only bins lying entirely inside ``[1, max abscissa]`` are produced, so a
    curve is never diluted by zeros past its end.
    """
    if not b > 1:
        raise ValueError(f"binning base must exceed 1, got {b}")
    if isinstance(series, tuple):
        xs, ys = (np.asarray(a) for a in series)
    else:
        xs = np.fromiter(series.keys(), dtype=np.int64, count=len(series))
        ys = np.fromiter(series.values(), dtype=float, count=len(series))
    if xs.size == 0:
        raise ValueError("cannot resample an empty series")
    if np.any(xs < 1) or np.any(xs != np.round(xs)):
        raise ValueError("abscissae must be positive integers")
    xs = xs.astype(np.int64)
    n = int(xs.max())

    dense = np.zeros(n + 1)
    np.add.at(dense, xs, ys.astype(float))
    cumulative = np.concatenate(([0.0], np.cumsum(dense[1:])))  # cumulative[j] = sum y(1..j)

    top = int(math.floor(math.log(n + 1) / math.log(b))) + 1
    edges = _ceil_power(b, np.arange(top + 2))
    idx = np.arange(top + 1)
    lo, hi = edges[:-1], edges[1:]
    keep = (hi > lo) & (hi - 1 <= n)
    idx, lo, hi = idx[keep], lo[keep], hi[keep]
    sums = cumulative[hi - 1] - cumulative[lo - 1]
    return LogBinning(
        base=float(b),
        index=idx,
        lo=lo,
        hi=hi,
        x=b ** (idx + 0.5),
        y=sums / (hi - lo),
    )


@dataclass(frozen=True)
class PowerLawFit:
    """Straight-line fit ``log y = log amplitude + slope * log x``.

    ``exponent`` is ``-slope`` for decaying laws (spectrum, rank) and
    ``slope`` otherwise (growth).
    """

    slope: float
    intercept: float
    r2: float
    region: FitRegion | None
    base: float | None
    n_points: int
    excluded_bins: int = 0
    law: str = "power"
    decaying: bool = False
    sse: float = 0.0
    sst: float = 0.0
    points: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False, compare=False)

    @property
    def exponent(self) -> float:
        return -self.slope if self.decaying else self.slope

    @property
    def amplitude(self) -> float:
        return math.exp(self.intercept)

    def predict(self, x) -> np.ndarray:
        return self.amplitude * np.asarray(x, dtype=float) ** self.slope

    def to_json(self) -> dict:
        return {
            "law": self.law,
            "exponent": self.exponent,
            "amplitude": self.amplitude,
            "r2": self.r2,
            "region": self.region.to_json() if self.region else None,
            "base": self.base,
            "excluded_bins": self.excluded_bins,
            "n_points": self.n_points,
        }


def loglog_ols(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float, float, float]:
    """Least squares line through (log x, log y).

    Returns ``(slope, intercept, r2, sse, sst)``. A perfect fit of a flat
    series (SSE = SST = 0) has r2 = 1.
    """
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    mx, my = lx.mean(), ly.mean()
    dx, dy = lx - mx, ly - my
    sxx = float(dx @ dx)
    if sxx == 0:
        raise FitError("abscissae are all equal")
    slope = float(dx @ dy) / sxx
    intercept = float(my - slope * mx)
    resid = ly - (intercept + slope * lx)
    sse = float(resid @ resid)
    sst = float(dy @ dy)
    if sst <= lx.size * (1e-12 * max(1.0, abs(my))) ** 2:
        # flat series: residuals cannot exceed the (rounding-level) spread
        r2 = 1.0
    else:
        r2 = 1.0 - sse / sst
    return slope, intercept, r2, sse, sst


def fit_power_law(binned: LogBinning, region: FitRegion, law: str = "power",
                  decaying: bool = False, min_points: int = 3) -> PowerLawFit:
    inside = region.contains(binned.x)
    positive = binned.y > 0
    use = inside & positive
    excluded = int(np.count_nonzero(inside & ~positive))
    if np.count_nonzero(use) < min_points:
        raise FitError(
            f"{law}: {np.count_nonzero(use)} usable bins in [{region.lower}, {region.upper}], "
            f"need {min_points}")
    x, y = binned.x[use], binned.y[use]
    slope, intercept, r2, sse, sst = loglog_ols(x, y)
    return PowerLawFit(slope, intercept, r2, region, binned.base, int(x.size), excluded,
                       law, decaying, sse, sst, (x, y))


def fit_spectrum(spectrum, region: FitRegion = SPECTRUM_REGION, b: float = DEFAULT_BASE) -> PowerLawFit:
    """Decay exponent of P(k) = m(k)/Nt."""
    return fit_power_law(log_resample(spectrum.series(), b), region, "spectrum", decaying=True)


def fit_rank(rank, region: FitRegion = RANK_REGION, b: float = DEFAULT_BASE) -> PowerLawFit:
    """Zipf exponent of the rank-frequency profile."""
    return fit_power_law(log_resample((np.arange(1, rank.Nt + 1), rank.Z), b), region, "rank",
                         decaying=True)


def fit_growth(growth, region: FitRegion = GROWTH_REGION, b: float = DEFAULT_BASE) -> PowerLawFit:
    """Heaps exponent of the vocabulary growth curve."""
    return fit_power_law(log_resample((np.arange(1, growth.T + 1), growth.N), b), region, "growth")


def fit_attachment(profile, region: FitRegion | None = None) -> PowerLawFit:
    """Log-log slope of phi(k) over realized Part-I counts.

    phi is a conditional mean, not a density, so it is fitted point by point:
    averaging it over bins with unrealized k would mix in spurious zeros.
    """
    k, phi = profile.k.astype(float), profile.phi
    use = phi > 0
    if region is not None:
        use &= region.contains(k)
    excluded = int(np.count_nonzero(phi <= 0))
    if np.count_nonzero(use) < 3:
        raise FitError("attachment: fewer than 3 positive phi(k) values")
    slope, intercept, r2, sse, sst = loglog_ols(k[use], phi[use])
    return PowerLawFit(slope, intercept, r2, region, None, int(np.count_nonzero(use)), excluded,
                       "attachment", False, sse, sst, (k[use], phi[use]))
