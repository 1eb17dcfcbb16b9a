"""Order statistics: quantiles, IQR fences and Table-style descriptive summaries."""

from __future__ import annotations

import math
import statistics
from dataclasses import asdict, dataclass
from typing import Sequence

from crim.errors import EmptyInput, NonFiniteValue

IQR_FENCE_FACTOR = 1.5


@dataclass(frozen=True)
class QuartileSummary:
    q1: float
    q2: float
    q3: float
    iqr: float
    lower_fence: float
    upper_fence: float

    def is_outlier(self, value: float) -> bool:
        return value < self.lower_fence or value > self.upper_fence

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DescriptiveStats:
    count: int
    mean: float
    std: float
    min: float
    q1: float
    median: float
    q3: float
    max: float

    def to_dict(self) -> dict:
        return asdict(self)


def _checked_sorted(values: Sequence[float]) -> list[float]:
    if len(values) == 0:
        raise EmptyInput("statistics need at least one value")
    ordered = [float(v) for v in values]
    if not all(map(math.isfinite, ordered)):
        raise NonFiniteValue("values must be finite")
    ordered.sort()
    return ordered


def _quantile_sorted(ordered: list[float], q: float) -> float:
    h = (len(ordered) - 1) * q
    lo = math.floor(h)
    hi = min(lo + 1, len(ordered) - 1)
    frac = h - lo
    if frac == 0.0:
        return ordered[lo]
    return ordered[lo] + frac * (ordered[hi] - ordered[lo])


def quantile(values: Sequence[float], q: float) -> float:
    """Linearly interpolated quantile at rank (n - 1) * q (Hyndman-Fan type 7)."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q}")
    return _quantile_sorted(_checked_sorted(values), q)


def iqr_fences(values: Sequence[float]) -> QuartileSummary:
    ordered = _checked_sorted(values)
    q1, q2, q3 = (_quantile_sorted(ordered, q) for q in (0.25, 0.5, 0.75))
    iqr = q3 - q1
    return QuartileSummary(
        q1=q1,
        q2=q2,
        q3=q3,
        iqr=iqr,
        lower_fence=q1 - IQR_FENCE_FACTOR * iqr,
        upper_fence=q3 + IQR_FENCE_FACTOR * iqr,
    )


def describe(values: Sequence[float]) -> DescriptiveStats:
    """count / mean / std / min / 25% / 50% / 75% / max, std with n - 1 denominator."""
    ordered = _checked_sorted(values)
    return DescriptiveStats(
        count=len(ordered),
        mean=statistics.fmean(ordered),
        std=statistics.stdev(ordered) if len(ordered) > 1 else 0.0,
        min=ordered[0],
        q1=_quantile_sorted(ordered, 0.25),
        median=_quantile_sorted(ordered, 0.5),
        q3=_quantile_sorted(ordered, 0.75),
        max=ordered[-1],
    )
