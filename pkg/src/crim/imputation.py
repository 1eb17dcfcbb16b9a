"""Model contribution rates, effort imputation and Unlikely Resolved Effort (URE)."""

from __future__ import annotations

import dataclasses
import statistics
from dataclasses import dataclass
from typing import Optional, Sequence

from crim.classify import ClassifiedDataset
from crim.config import AnalysisConfig
from crim.errors import MismatchedCommitSets, NoCandidates, ZeroRate
from crim.timeline import ContributionClass, contribution_rate

__all__ = [
    "IMPUTED_CLASSES",
    "ImputedEffort",
    "McrEstimates",
    "MethodComparison",
    "compare_methods",
    "compute_mcr",
    "contribution_rate",
    "evaluate_ure",
    "impute_effort",
    "improvement_percent",
]

HOURS_PER_DAY = 24.0

IMPUTED_CLASSES = frozenset(
    {ContributionClass.NO_CTD, ContributionClass.DISQUALIFIED, ContributionClass.UNBOUND}
)


@dataclass(frozen=True)
class McrEstimates:
    mmcr_wpm: float
    mhmcr_wpm: float
    median_wpm: float
    q4_count: int
    fallback_used: bool = False

    def rate_for(self, method: str) -> float:
        try:
            return {"mean": self.mmcr_wpm, "mean_high": self.mhmcr_wpm, "median": self.median_wpm}[method]
        except KeyError:
            raise ValueError(f"unknown rate method {method!r}") from None


@dataclass(frozen=True)
class ImputedEffort:
    commit_id: str
    method: str
    imputed_rate_wpm: float
    reh_hours: float
    was_imputed: bool
    ctd_hours: Optional[float] = None
    ure_flag: bool = False
    allowance_hours: float = 0.0


@dataclass(frozen=True)
class MethodComparison:
    ure_mean: int
    ure_mean_high: int
    improvement_percent: Optional[float]


def compute_mcr(dataset: ClassifiedDataset, cfg: AnalysisConfig | None = None) -> McrEstimates:
    """Mean rate over the size-filtered candidates (mMCR) and over the Model set (mhMCR).

    Falls back to the filtered-candidate mean for mhMCR (and its median for
    the median method) when the Model set is empty or too few candidates
    survived for quartiles to mean much.
    """
    cfg = cfg or AnalysisConfig()
    kept = dataset.kept
    if not kept:
        raise NoCandidates("no commit falls inside the model CTD range")
    kept_rates = [o.rate_wpm for o in kept]
    model_rates = [o.rate_wpm for o in dataset.model]
    mmcr = statistics.fmean(kept_rates)

    fallback = not model_rates or len(kept) < cfg.min_candidates_for_quartiles
    if fallback:
        return McrEstimates(
            mmcr_wpm=mmcr,
            mhmcr_wpm=mmcr,
            median_wpm=statistics.median(kept_rates),
            q4_count=len(model_rates),
            fallback_used=True,
        )
    return McrEstimates(
        mmcr_wpm=mmcr,
        mhmcr_wpm=statistics.fmean(model_rates),
        median_wpm=statistics.median(model_rates),
        q4_count=len(model_rates),
    )


def impute_effort(
    dataset: ClassifiedDataset, estimates: McrEstimates, method: str, cfg: AnalysisConfig | None = None
) -> list[ImputedEffort]:
    """Resolved effort hours for every commit.

    Anti-model commits (NoCtd, DisqualifiedCandidate, Unbound) get
    size / (rate * 60); Model and QuickRemedy commits keep their observed CTD.
    """
    rate = estimates.rate_for(method)
    efforts = []
    for obs in dataset.observations:
        imputed = obs.contribution_class in IMPUTED_CLASSES
        if imputed:
            if obs.size_words == 0:
                reh = 0.0
            elif rate <= 0:
                raise ZeroRate(f"{method} rate is {rate} but commit {obs.commit_id} has {obs.size_words} words")
            else:
                reh = obs.size_words / (rate * 60.0)
        else:
            reh = obs.ctd_hours
        efforts.append(
            ImputedEffort(
                commit_id=obs.commit_id,
                method=method,
                imputed_rate_wpm=rate,
                reh_hours=reh,
                was_imputed=imputed,
                ctd_hours=obs.ctd_hours,
            )
        )
    return efforts


def ure_allowance(ctd_hours: Optional[float], cap_hours: float) -> float:
    """``cap_hours`` per elapsed day, never less than one day's worth."""
    if ctd_hours is None:
        return cap_hours
    return cap_hours * max(1.0, ctd_hours / HOURS_PER_DAY)


def evaluate_ure(efforts: Sequence[ImputedEffort], cfg: AnalysisConfig | None = None) -> list[ImputedEffort]:
    cap = (cfg or AnalysisConfig()).ure_daily_cap_hours
    out = []
    for e in efforts:
        allowance = ure_allowance(e.ctd_hours, cap)
        out.append(dataclasses.replace(e, allowance_hours=allowance, ure_flag=e.was_imputed and e.reh_hours > allowance))
    return out


def improvement_percent(ure_mean: int, ure_mean_high: int) -> Optional[float]:
    """Relative URE reduction of mhMCR over mMCR, in percent; None when mMCR has no URE."""
    if ure_mean == 0:
        return None
    return 100.0 * (ure_mean - ure_mean_high) / ure_mean


def compare_methods(efforts_mean: Sequence[ImputedEffort], efforts_mean_high: Sequence[ImputedEffort]) -> MethodComparison:
    if sorted(e.commit_id for e in efforts_mean) != sorted(e.commit_id for e in efforts_mean_high):
        raise MismatchedCommitSets("both methods must cover the same commits")
    ure_mean = sum(e.ure_flag for e in efforts_mean)
    ure_high = sum(e.ure_flag for e in efforts_mean_high)
    return MethodComparison(
        ure_mean=ure_mean,
        ure_mean_high=ure_high,
        improvement_percent=improvement_percent(ure_mean, ure_high),
    )
