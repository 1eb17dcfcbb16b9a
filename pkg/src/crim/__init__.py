"""Commit-history contribution rate analysis and effort imputation."""

from crim.classify import AnalysisConfig, ClassifiedDataset, classify
from crim.ingest import RawCommit, extract_commits, read_commit_csv, write_commit_csv
from crim.pipeline import AnalysisResult, analyze
from crim.timeline import CommitObservation, ContributionClass

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "AnalysisResult",
    "ClassifiedDataset",
    "CommitObservation",
    "ContributionClass",
    "RawCommit",
    "analyze",
    "classify",
    "extract_commits",
    "read_commit_csv",
    "write_commit_csv",
]
