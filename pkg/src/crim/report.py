"""CRIM metric tables, descriptive statistics and chart data files."""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

from crim.classify import ClassifiedDataset
from crim.errors import EmptyInput, InternalInconsistency
from crim.imputation import IMPUTED_CLASSES, ImputedEffort, McrEstimates, MethodComparison
from crim.stats import DescriptiveStats, describe
from crim.timeline import CommitObservation, ContributionClass

CHART_COLUMNS = ["ctd_hours", "rate_wpm", "class"]
CANDIDATES_FILE = "candidates.csv"
IQ4_FILE = "iq4_model.csv"

METRIC_LABELS = {
    "mmcr_wpm": "Mean Model Contribution Rate (wpm)",
    "mhmcr_wpm": "Mean-High Model Contribution Rate (wpm)",
    "count_no_ctd": "Count of Commits without a CTD value",
    "count_quick_remedy": "Count of Quick Remedy Commits",
    "count_model": "Count of Model Contribution Commits",
    "count_disqualified": "Count of Disqualified Model Contribution Commits",
    "count_unbound": "Count of Unbound Commits",
    "count_imputed": "Count of Imputed Commits",
    "count_non_imputed": "Count of Non-Imputed Commits",
    "count_ure_mhmcr": "Count of mhMCR Based URE Commits",
    "count_ure_mmcr": "Count of mMCR Based URE Commits",
    "improvement_percent": "mhMCR over mMCR Improvement Percent",
}

STAT_COLUMNS = {
    "ctd_hours": "CTD Hours",
    "size_words": "Levenshtein Word Distance",
    "rate_wpm": "Contribution Rate (WPM)",
}
STAT_ROWS = [
    ("count", "count"),
    ("mean", "mean"),
    ("std", "std"),
    ("min", "min"),
    ("q1", "25%"),
    ("median", "50%"),
    ("q3", "75%"),
    ("max", "max"),
]


@dataclass(frozen=True)
class CrimMetrics:
    mmcr_wpm: float
    mhmcr_wpm: float
    count_no_ctd: int
    count_quick_remedy: int
    count_model: int
    count_disqualified: int
    count_unbound: int
    count_imputed: int
    count_non_imputed: int
    count_ure_mhmcr: int
    count_ure_mmcr: int
    improvement_percent: Optional[float]
    fallback_used: bool = False

    def check(self) -> None:
        """Raise InternalInconsistency when a structural identity is broken."""
        if self.count_imputed != self.count_no_ctd + self.count_disqualified + self.count_unbound:
            raise InternalInconsistency(f"imputed count {self.count_imputed} != NoCtd + dMCC + Unbound")
        if self.count_non_imputed != self.count_quick_remedy + self.count_model:
            raise InternalInconsistency(f"non-imputed count {self.count_non_imputed} != QuickRemedy + Model")
        if self.count_ure_mhmcr > self.count_ure_mmcr:
            raise InternalInconsistency("mhMCR produced more URE commits than mMCR")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ChartPoint:
    ctd_hours: float
    rate_wpm: float
    contribution_class: ContributionClass


def build_crim_metrics(
    dataset: ClassifiedDataset,
    estimates: Optional[McrEstimates],
    comparison: Optional[MethodComparison],
    efforts: Optional[Sequence[ImputedEffort]] = None,
) -> CrimMetrics:
    """Assemble the metrics table; ``efforts`` (any one method) cross-checks the imputed counts."""
    counts = dataset.counts
    if counts.get(ContributionClass.MODEL_CANDIDATE, 0):
        raise InternalInconsistency("unresolved ModelCandidate observations remain")
    if sum(counts.values()) != len(dataset.observations):
        raise InternalInconsistency("class tallies do not sum to the observation count")

    if efforts is not None:
        imputed = sum(e.was_imputed for e in efforts)
        non_imputed = len(efforts) - imputed
        if len(efforts) != len(dataset.observations):
            raise InternalInconsistency("effort list does not cover every observation")
    else:
        imputed = sum(o.contribution_class in IMPUTED_CLASSES for o in dataset.observations)
        non_imputed = len(dataset.observations) - imputed

    metrics = CrimMetrics(
        mmcr_wpm=estimates.mmcr_wpm if estimates else 0.0,
        mhmcr_wpm=estimates.mhmcr_wpm if estimates else 0.0,
        count_no_ctd=counts[ContributionClass.NO_CTD],
        count_quick_remedy=counts[ContributionClass.QUICK_REMEDY],
        count_model=counts[ContributionClass.MODEL],
        count_disqualified=counts[ContributionClass.DISQUALIFIED],
        count_unbound=counts[ContributionClass.UNBOUND],
        count_imputed=imputed,
        count_non_imputed=non_imputed,
        count_ure_mhmcr=comparison.ure_mean_high if comparison else 0,
        count_ure_mmcr=comparison.ure_mean if comparison else 0,
        improvement_percent=comparison.improvement_percent if comparison else None,
        fallback_used=estimates.fallback_used if estimates else False,
    )
    metrics.check()
    return metrics


def dataset_statistics(observations: Iterable[CommitObservation]) -> dict[str, DescriptiveStats]:
    """Describe CTD, size and rate over the observations that have a CTD."""
    with_ctd = [o for o in observations if o.ctd_hours is not None]
    if not with_ctd:
        raise EmptyInput("no observation has a commit time delta")
    return {
        "ctd_hours": describe([o.ctd_hours for o in with_ctd]),
        "size_words": describe([o.size_words for o in with_ctd]),
        "rate_wpm": describe([o.rate_wpm for o in with_ctd]),
    }


def chart_points(dataset: ClassifiedDataset) -> list[ChartPoint]:
    points = [
        ChartPoint(o.ctd_hours, o.rate_wpm, o.contribution_class)
        for o in dataset.observations
        if o.ctd_hours is not None
    ]
    points.sort(key=lambda p: (p.ctd_hours, p.rate_wpm, p.contribution_class.value))
    return points


def _write_points(points: Iterable[ChartPoint], path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CHART_COLUMNS)
        for p in points:
            writer.writerow([f"{p.ctd_hours:.6g}", f"{p.rate_wpm:.6g}", p.contribution_class.value])


def emit_chart_data(dataset: ClassifiedDataset, out_dir: str | Path) -> tuple[Path, Path]:
    """Write the scatter data behind the candidate and IQ4 model charts."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    points = chart_points(dataset)
    candidates_path = out / CANDIDATES_FILE
    iq4_path = out / IQ4_FILE
    _write_points(points, candidates_path)
    _write_points((p for p in points if p.contribution_class is ContributionClass.MODEL), iq4_path)
    return candidates_path, iq4_path


def _fmt_real(value: Optional[float], digits: int) -> str:
    return "n/a" if value is None else f"{value:.{digits}f}"


def statistics_table(stats: dict[str, DescriptiveStats]) -> str:
    lines = [
        "| | " + " | ".join(STAT_COLUMNS.values()) + " |",
        "| --- |" + " ---: |" * len(STAT_COLUMNS),
    ]
    for attr, label in STAT_ROWS:
        cells = []
        for key in STAT_COLUMNS:
            value = getattr(stats[key], attr)
            cells.append(str(value) if attr == "count" else _fmt_real(value, 6))
        lines.append(f"| {label} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def _markdown(metrics: CrimMetrics, stats: Optional[dict[str, DescriptiveStats]], notes: Sequence[str]) -> str:
    values = metrics.to_dict()
    lines = ["# CRIM Metrics", "", "| Metric | Value |", "| --- | ---: |"]
    for key, label in METRIC_LABELS.items():
        value = values[key]
        cell = str(value) if isinstance(value, int) else _fmt_real(value, 3)
        lines.append(f"| {label} | {cell} |")
    out = "\n".join(lines) + "\n"
    if metrics.fallback_used:
        out += "\nmhMCR fell back to the mean over filtered candidates.\n"
    if stats:
        out += "\n## Commit Statistics\n\n" + statistics_table(stats)
    if notes:
        out += "\n## Notes\n\n" + "".join(f"- {n}\n" for n in notes)
    return out


def render_report(
    metrics: CrimMetrics,
    stats: Optional[dict[str, DescriptiveStats]],
    fmt: str = "json",
    notes: Sequence[str] = (),
) -> bytes:
    """Serialize metrics (plus statistics) as JSON or as markdown tables."""
    if fmt == "markdown":
        return _markdown(metrics, stats, notes).encode("utf-8")
    if fmt != "json":
        raise ValueError(f"unknown report format {fmt!r}")
    payload = metrics.to_dict()
    payload["statistics"] = {k: v.to_dict() for k, v in stats.items()} if stats else None
    payload["notes"] = list(notes)
    return (json.dumps(payload, indent=2) + "\n").encode("utf-8")
