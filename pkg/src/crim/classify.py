"""Contribution classes: CTD sieve, size-outlier removal and top-quartile selection."""

from __future__ import annotations

import dataclasses
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional

from crim.config import AnalysisConfig
from crim.errors import ConfigError
from crim.stats import QuartileSummary, iqr_fences
from crim.timeline import CommitObservation, ContributionClass

logger = logging.getLogger(__name__)

MIN_CANDIDATES_FOR_FENCES = 4

__all__ = [
    "AnalysisConfig",
    "ClassifiedDataset",
    "classify",
    "classify_by_ctd",
    "remove_size_outliers",
    "select_model_contributions",
]


@dataclass
class ClassifiedDataset:
    observations: list[CommitObservation]
    counts: dict[ContributionClass, int]
    size_quartiles: Optional[QuartileSummary] = None
    rate_quartiles: Optional[QuartileSummary] = None
    warnings: list[str] = field(default_factory=list)

    def of_class(self, cls: ContributionClass) -> list[CommitObservation]:
        return [o for o in self.observations if o.contribution_class is cls]

    @property
    def candidates(self) -> list[CommitObservation]:
        """Everything that fell inside the model CTD range."""
        return [
            o
            for o in self.observations
            if o.contribution_class in (ContributionClass.MODEL, ContributionClass.DISQUALIFIED)
        ]

    @property
    def kept(self) -> list[CommitObservation]:
        """Candidates that survived the size fences."""
        return [o for o in self.candidates if not o.size_outlier]

    @property
    def model(self) -> list[CommitObservation]:
        return self.of_class(ContributionClass.MODEL)


def classify_by_ctd(
    observations: Iterable[CommitObservation], cfg: AnalysisConfig
) -> dict[ContributionClass, list[CommitObservation]]:
    """Label each observation NoCtd, QuickRemedy, ModelCandidate or Unbound.

    Both bounds of the model range are inclusive.
    """
    lower, upper = cfg.mctdr_lower_hours, cfg.mctdr_upper_hours
    if not lower < upper:
        raise ConfigError(f"mctdr_lower_hours ({lower}) must be below mctdr_upper_hours ({upper})")
    parts: dict[ContributionClass, list[CommitObservation]] = {
        ContributionClass.NO_CTD: [],
        ContributionClass.QUICK_REMEDY: [],
        ContributionClass.MODEL_CANDIDATE: [],
        ContributionClass.UNBOUND: [],
    }
    for obs in observations:
        if obs.ctd_hours is None:
            cls = ContributionClass.NO_CTD
        elif obs.ctd_hours < lower:
            cls = ContributionClass.QUICK_REMEDY
        elif obs.ctd_hours <= upper:
            cls = ContributionClass.MODEL_CANDIDATE
        else:
            cls = ContributionClass.UNBOUND
        obs.contribution_class = cls
        parts[cls].append(obs)
    return parts


def remove_size_outliers(
    candidates: list[CommitObservation],
) -> tuple[list[CommitObservation], list[CommitObservation]]:
    """Split candidates on the 1.5 * IQR fences of their word sizes.

    Rejected observations become DisqualifiedCandidate. With fewer than four
    candidates the quartiles are meaningless and nothing is rejected.
    """
    if len(candidates) < MIN_CANDIDATES_FOR_FENCES:
        if candidates:
            logger.warning("only %d model candidates; size fences skipped", len(candidates))
        return list(candidates), []
    fences = iqr_fences([o.size_words for o in candidates])
    kept, rejected = [], []
    for obs in candidates:
        if fences.is_outlier(obs.size_words):
            obs.size_outlier = True
            obs.contribution_class = ContributionClass.DISQUALIFIED
            rejected.append(obs)
        else:
            kept.append(obs)
    return kept, rejected


def select_model_contributions(
    kept: list[CommitObservation],
) -> tuple[list[CommitObservation], list[CommitObservation]]:
    """Observations with rate strictly above the third quartile become Model."""
    if not kept:
        return [], []
    q3 = iqr_fences([o.rate_wpm for o in kept]).q3
    model, disqualified = [], []
    for obs in kept:
        if obs.rate_wpm > q3:
            obs.contribution_class = ContributionClass.MODEL
            model.append(obs)
        else:
            obs.contribution_class = ContributionClass.DISQUALIFIED
            disqualified.append(obs)
    return model, disqualified


def classify(observations: Iterable[CommitObservation], cfg: AnalysisConfig | None = None) -> ClassifiedDataset:
    """Run the full classification; the input observations are not modified."""
    cfg = cfg or AnalysisConfig()
    obs = [
        dataclasses.replace(o, contribution_class=ContributionClass.NO_CTD, size_outlier=False)
        for o in observations
    ]
    parts = classify_by_ctd(obs, cfg)
    candidates = parts[ContributionClass.MODEL_CANDIDATE]
    warnings = []

    size_quartiles = None
    if len(candidates) >= MIN_CANDIDATES_FOR_FENCES:
        size_quartiles = iqr_fences([o.size_words for o in candidates])
    elif candidates:
        warnings.append(f"only {len(candidates)} model candidates; size fences skipped")
    kept, _ = remove_size_outliers(candidates)

    rate_quartiles = iqr_fences([o.rate_wpm for o in kept]) if kept else None
    model, _ = select_model_contributions(kept)
    if kept and not model:
        warnings.append("no candidate rate exceeds the third quartile")
    if kept and len(kept) < cfg.min_candidates_for_quartiles:
        warnings.append(
            f"{len(kept)} candidates after size filtering, fewer than "
            f"min_candidates_for_quartiles={cfg.min_candidates_for_quartiles}"
        )

    tally = Counter(o.contribution_class for o in obs)
    counts = {cls: tally.get(cls, 0) for cls in ContributionClass}
    return ClassifiedDataset(
        observations=obs,
        counts=counts,
        size_quartiles=size_quartiles,
        rate_quartiles=rate_quartiles,
        warnings=warnings,
    )
