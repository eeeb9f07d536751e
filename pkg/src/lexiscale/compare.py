"""Group summaries and Welch's two-sample t-test for fitted exponents."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats

QUANTITIES = ("beta", "alpha", "lambda", "phi", "k0", "kt", "kp")


@dataclass(frozen=True)
class ExponentSample:
    group: str
    quantity: str
    values: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ValueError("sample is empty")
        if not all(math.isfinite(v) for v in values):
            raise ValueError("sample contains non-finite values")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class GroupSummary:
    mean: float
    std: float
    n: int

    def to_json(self) -> dict:
        return {"mean": self.mean, "std": self.std, "n": self.n}


@dataclass(frozen=True)
class TTestResult:
    t_statistic: float
    degrees_of_freedom: float
    p_value: float
    a: GroupSummary
    b: GroupSummary

    def to_json(self) -> dict:
        return {
            "t_statistic": self.t_statistic,
            "degrees_of_freedom": self.degrees_of_freedom,
            "p_value": self.p_value,
            "a": self.a.to_json(),
            "b": self.b.to_json(),
        }


def _values(sample: ExponentSample | Sequence[float]) -> np.ndarray:
    vals = sample.values if isinstance(sample, ExponentSample) else sample
    return np.asarray(vals, dtype=float)


def summarize_sample(sample: ExponentSample | Sequence[float]) -> GroupSummary:
    """Mean and n-1 standard deviation."""
    x = _values(sample)
    if x.size < 2:
        raise ValueError("need at least two values for a standard deviation")
    return GroupSummary(float(x.mean()), float(x.std(ddof=1)), int(x.size))


def two_sided_p(t: float, df: float) -> float:
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    return float(min(1.0, 2.0 * stats.t.sf(abs(t), df)))


def welch_t_test(a: ExponentSample | Sequence[float], b: ExponentSample | Sequence[float]) -> TTestResult:
    """Two-sided Welch test with Welch-Satterthwaite degrees of freedom."""
    sa, sb = summarize_sample(a), summarize_sample(b)
    va, vb = sa.std**2 / sa.n, sb.std**2 / sb.n
    se2 = va + vb
    diff = sa.mean - sb.mean
    if se2 == 0:
        df = float(sa.n + sb.n - 2)
        if diff == 0:
            return TTestResult(0.0, df, 1.0, sa, sb)
        return TTestResult(math.copysign(math.inf, diff), df, 0.0, sa, sb)
    t = diff / math.sqrt(se2)
    df = se2**2 / (va**2 / (sa.n - 1) + vb**2 / (sb.n - 1))
    return TTestResult(float(t), float(df), two_sided_p(t, df), sa, sb)
