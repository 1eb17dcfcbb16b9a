"""End-to-end analysis of a commit stream."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

from crim.classify import ClassifiedDataset, classify
from crim.config import AnalysisConfig
from crim.errors import EmptyInput, NoCandidates, ZeroRate
from crim.imputation import (
    ImputedEffort,
    McrEstimates,
    MethodComparison,
    compare_methods,
    compute_mcr,
    evaluate_ure,
    impute_effort,
)
from crim.ingest import RawCommit
from crim.report import CrimMetrics, build_crim_metrics, dataset_statistics
from crim.stats import DescriptiveStats
from crim.timeline import observe

logger = logging.getLogger(__name__)


@dataclass
class AnalysisResult:
    dataset: ClassifiedDataset
    estimates: Optional[McrEstimates]
    efforts: dict[str, list[ImputedEffort]]
    comparison: Optional[MethodComparison]
    metrics: CrimMetrics
    statistics: Optional[dict[str, DescriptiveStats]]
    notes: list[str] = field(default_factory=list)

    @property
    def ctd_invalid(self) -> int:
        return sum(o.invalid_delta for o in self.dataset.observations)

    @property
    def ctd_present(self) -> int:
        return sum(o.ctd_hours is not None for o in self.dataset.observations)


def analyze(commits: Iterable[RawCommit], cfg: AnalysisConfig | None = None) -> AnalysisResult:
    cfg = cfg or AnalysisConfig()
    dataset = classify(observe(commits), cfg)
    notes = list(dataset.warnings)

    try:
        estimates: Optional[McrEstimates] = compute_mcr(dataset, cfg)
    except NoCandidates as exc:
        logger.warning("%s; rates and URE counts left at zero", exc)
        notes.append(str(exc))
        estimates = None

    efforts: dict[str, list[ImputedEffort]] = {}
    comparison = None
    if estimates is not None:
        if estimates.fallback_used:
            notes.append("mhMCR fell back to mMCR")
        methods = ("mean", "mean_high") + tuple(m for m in cfg.methods if m == "median")
        try:
            for method in methods:
                efforts[method] = evaluate_ure(impute_effort(dataset, estimates, method, cfg), cfg)
        except ZeroRate as exc:
            logger.warning("%s; effort imputation skipped", exc)
            notes.append(str(exc))
            efforts = {}
        else:
            comparison = compare_methods(efforts["mean"], efforts["mean_high"])

    metrics = build_crim_metrics(dataset, estimates, comparison, efforts.get("mean"))
    try:
        stats = dataset_statistics(dataset.observations)
    except EmptyInput:
        stats = None
    return AnalysisResult(
        dataset=dataset,
        estimates=estimates,
        efforts={m: efforts[m] for m in cfg.methods if m in efforts},
        comparison=comparison,
        metrics=metrics,
        statistics=stats,
        notes=notes,
    )
