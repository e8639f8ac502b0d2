"""Statistical primitives shared across the analysis modules.

Test statistics are computed in-module from their closed forms; tail
probabilities come from scipy's distribution functions.  Rate intervals use
the Wilson score construction for sane small-sample coverage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy import special, stats as sps


class StatsError(ValueError):
    pass


class LengthMismatch(StatsError):
    pass


class ZeroVariance(StatsError):
    pass


class InvalidCounts(StatsError):
    pass


class EmptySample(StatsError):
    pass


class BadEdges(StatsError):
    pass


class ConstantColumn(StatsError):
    pass


class ConstantX(StatsError):
    pass


class TestMethod(Enum):
    PAIRED_T = "paired_t"
    TWO_PROPORTION_Z = "two_proportion_z"
    KS_TWO_SAMPLE = "ks_two_sample"
    ONE_SAMPLE_T = "one_sample_t"


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    df: Optional[float]
    method: TestMethod


@dataclass
class RateCurve:
    """Binned success rates with 95% Wilson intervals.

    Bins are half-open [edge_i, edge_{i+1}); empty bins carry NaN rates.
    """

    bin_edges: np.ndarray
    successes: np.ndarray
    trials: np.ndarray
    rate: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray

    def bin_index(self, value: float) -> Optional[int]:
        idx = int(np.searchsorted(self.bin_edges, value, side="right")) - 1
        if idx < 0 or idx >= len(self.trials):
            return None
        return idx

    def rate_at(self, value: float) -> Optional[float]:
        """Rate of the bin containing value; None outside range or if empty."""
        idx = self.bin_index(value)
        if idx is None or self.trials[idx] == 0:
            return None
        return float(self.rate[idx])

    def rate_at_nearest(self, value: float) -> Optional[float]:
        """Rate at value, falling back to the nearest populated bin."""
        populated = np.nonzero(self.trials > 0)[0]
        if len(populated) == 0:
            return None
        centers = (self.bin_edges[:-1] + self.bin_edges[1:]) / 2.0
        idx = self.bin_index(value)
        if idx is not None and self.trials[idx] > 0:
            return float(self.rate[idx])
        nearest = populated[np.argmin(np.abs(centers[populated] - value))]
        return float(self.rate[nearest])

    @property
    def max_populated_edge(self) -> Optional[float]:
        populated = np.nonzero(self.trials > 0)[0]
        if len(populated) == 0:
            return None
        return float(self.bin_edges[populated[-1] + 1])


@dataclass(frozen=True)
class CorrMatrix:
    labels: tuple[str, ...]
    rho: np.ndarray
    p: np.ndarray


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r_squared: float
    slope_ci_low: float
    slope_ci_high: float


def _as_array(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise StatsError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise StatsError(f"{name} contains non-finite values")
    return arr


def paired_t_test(x: Sequence[float], y: Sequence[float]) -> TestResult:
    """Two-sided paired t-test on mean(x - y), df = n - 1."""
    xa, ya = _as_array(x, "x"), _as_array(y, "y")
    if len(xa) != len(ya):
        raise LengthMismatch(f"{len(xa)} vs {len(ya)}")
    if len(xa) < 2:
        raise EmptySample("need at least 2 pairs")
    d = xa - ya
    sd = d.std(ddof=1)
    if sd == 0:
        raise ZeroVariance("all paired differences are identical")
    n = len(d)
    t = d.mean() / (sd / math.sqrt(n))
    p = 2.0 * sps.t.sf(abs(t), n - 1)
    return TestResult(statistic=float(t), p_value=float(p), df=float(n - 1),
                      method=TestMethod.PAIRED_T)


def one_sample_t(x: Sequence[float], mu: float = 0.0,
                 alternative: str = "two-sided") -> TestResult:
    """One-sample t-test of mean(x) against mu."""
    xa = _as_array(x, "x")
    if len(xa) < 2:
        raise EmptySample("need at least 2 observations")
    sd = xa.std(ddof=1)
    if sd == 0:
        raise ZeroVariance("all observations are identical")
    n = len(xa)
    t = (xa.mean() - mu) / (sd / math.sqrt(n))
    if alternative == "two-sided":
        p = 2.0 * sps.t.sf(abs(t), n - 1)
    elif alternative == "greater":
        p = sps.t.sf(t, n - 1)
    elif alternative == "less":
        p = sps.t.cdf(t, n - 1)
    else:
        raise StatsError(f"unknown alternative {alternative!r}")
    return TestResult(statistic=float(t), p_value=float(p), df=float(n - 1),
                      method=TestMethod.ONE_SAMPLE_T)


def two_proportion_test(k1: int, n1: int, k2: int, n2: int,
                        continuity: bool = False) -> TestResult:
    """Pooled two-sided z-test for two binomial proportions.

    No continuity correction by default; pass continuity=True for the
    Yates-adjusted statistic.
    """
    for k, n in ((k1, n1), (k2, n2)):
        if n < 1 or k < 0 or k > n:
            raise InvalidCounts(f"k={k}, n={n}")
    p1, p2 = k1 / n1, k2 / n2
    pooled = (k1 + k2) / (n1 + n2)
    se = math.sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2))
    if se == 0:
        # pooled rate 0 or 1: both samples identical in the only possible way
        return TestResult(statistic=0.0, p_value=1.0, df=None,
                          method=TestMethod.TWO_PROPORTION_Z)
    diff = p1 - p2
    if continuity:
        shrink = 0.5 * (1.0 / n1 + 1.0 / n2)
        diff = math.copysign(max(0.0, abs(diff) - shrink), diff)
    z = diff / se
    p = 2.0 * sps.norm.sf(abs(z))
    return TestResult(statistic=float(z), p_value=float(p), df=None,
                      method=TestMethod.TWO_PROPORTION_Z)


def ecdf(x: Sequence[float]):
    """Right-continuous empirical CDF; callable on scalars or arrays."""
    xa = _as_array(x, "x")
    if len(xa) == 0:
        raise EmptySample("empty sample")
    return _Ecdf(np.sort(xa))


class _Ecdf:
    def __init__(self, sorted_values: np.ndarray):
        self.values = sorted_values
        self.n = len(sorted_values)

    def __call__(self, q):
        counts = np.searchsorted(self.values, q, side="right")
        return counts / self.n

    def steps(self) -> tuple[np.ndarray, np.ndarray]:
        """(x, y) points of the step function at the sample values."""
        xs = np.unique(self.values)
        return xs, self(xs)


def ks_two_sample(x: Sequence[float], y: Sequence[float]) -> TestResult:
    """Two-sample Kolmogorov-Smirnov test with the asymptotic p-value."""
    xa, ya = _as_array(x, "x"), _as_array(y, "y")
    if len(xa) == 0 or len(ya) == 0:
        raise EmptySample("both samples must be nonempty")
    fx, fy = ecdf(xa), ecdf(ya)
    grid = np.concatenate([xa, ya])
    d = float(np.max(np.abs(fx(grid) - fy(grid))))
    en = math.sqrt(len(xa) * len(ya) / (len(xa) + len(ya)))
    p = float(np.clip(special.kolmogorov(d * en), 0.0, 1.0))
    return TestResult(statistic=d, p_value=p, df=None, method=TestMethod.KS_TWO_SAMPLE)


_WILSON_Z = 1.959963984540054  # two-sided 95%


def wilson_interval(successes: int, trials: int) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise InvalidCounts("trials must be positive")
    z2 = _WILSON_Z * _WILSON_Z
    p = successes / trials
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = (_WILSON_Z / denom) * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials))
    lo, hi = center - half, center + half
    if successes == 0:
        lo = 0.0
    if successes == trials:
        hi = 1.0
    return max(0.0, lo), min(1.0, hi)


def binned_rate(events: Sequence[tuple[float, bool]], bin_edges: Sequence[float]) -> RateCurve:
    """Success rate per half-open bin; events outside the edges are dropped."""
    edges = _as_array(bin_edges, "bin_edges")
    if len(edges) < 2 or not np.all(np.diff(edges) > 0):
        raise BadEdges("bin_edges must be strictly increasing with >= 2 entries")
    nbins = len(edges) - 1
    successes = np.zeros(nbins, dtype=int)
    trials = np.zeros(nbins, dtype=int)
    for value, success in events:
        idx = int(np.searchsorted(edges, value, side="right")) - 1
        if idx < 0 or idx >= nbins:
            continue
        trials[idx] += 1
        if success:
            successes[idx] += 1
    rate = np.full(nbins, np.nan)
    lo = np.full(nbins, np.nan)
    hi = np.full(nbins, np.nan)
    for i in range(nbins):
        if trials[i] > 0:
            rate[i] = successes[i] / trials[i]
            lo[i], hi[i] = wilson_interval(int(successes[i]), int(trials[i]))
    return RateCurve(bin_edges=edges, successes=successes, trials=trials,
                     rate=rate, ci_low=lo, ci_high=hi)


def pearson_matrix(columns: dict[str, Sequence[float]]) -> CorrMatrix:
    """Pairwise Pearson correlations with two-sided t-based p-values."""
    labels = tuple(columns.keys())
    arrays = [_as_array(columns[name], name) for name in labels]
    n = len(arrays[0])
    if any(len(a) != n for a in arrays):
        raise LengthMismatch("columns differ in length")
    if n < 3:
        raise EmptySample("need at least 3 rows")
    for name, a in zip(labels, arrays):
        if a.std() == 0:
            raise ConstantColumn(name)
    mat = np.vstack(arrays)
    rho = np.clip(np.corrcoef(mat), -1.0, 1.0)
    np.fill_diagonal(rho, 1.0)
    k = len(labels)
    p = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            r = rho[i, j]
            if abs(r) >= 1.0:
                pij = 0.0
            else:
                t = r * math.sqrt((n - 2) / (1.0 - r * r))
                pij = 2.0 * sps.t.sf(abs(t), n - 2)
            p[i, j] = p[j, i] = pij
    return CorrMatrix(labels=labels, rho=rho, p=p)


def linear_fit(x: Sequence[float], y: Sequence[float]) -> LinearFit:
    """Ordinary least squares with a 95% t-interval on the slope."""
    xa, ya = _as_array(x, "x"), _as_array(y, "y")
    if len(xa) != len(ya):
        raise LengthMismatch(f"{len(xa)} vs {len(ya)}")
    n = len(xa)
    if n < 3:
        raise EmptySample("need at least 3 points")
    sxx = np.sum((xa - xa.mean()) ** 2)
    if sxx == 0:
        raise ConstantX("x is constant")
    slope = float(np.sum((xa - xa.mean()) * (ya - ya.mean())) / sxx)
    intercept = float(ya.mean() - slope * xa.mean())
    resid = ya - (intercept + slope * xa)
    sse = float(np.sum(resid ** 2))
    sst = float(np.sum((ya - ya.mean()) ** 2))
    r_squared = 1.0 if sst == 0 else max(0.0, 1.0 - sse / sst)
    se_slope = math.sqrt(max(0.0, sse / (n - 2)) / sxx)
    tq = sps.t.ppf(0.975, n - 2)
    return LinearFit(slope=slope, intercept=intercept, r_squared=r_squared,
                     slope_ci_low=slope - tq * se_slope,
                     slope_ci_high=slope + tq * se_slope)
