"""Per-author commit timelines and commit time deltas (CTD)."""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from datetime import datetime
from typing import Iterable, Mapping, Optional

from crim.errors import NonpositiveCtd
from crim.ingest import RawCommit

SECONDS_PER_HOUR = 3600.0


def contribution_rate(size_words: int, ctd_hours: float) -> float:
    """Words per minute: size / (CTD in minutes)."""
    if not ctd_hours > 0:
        raise NonpositiveCtd(f"CTD must be positive, got {ctd_hours}")
    return size_words / (ctd_hours * 60.0)


class ContributionClass(str, enum.Enum):
    NO_CTD = "NoCtd"
    QUICK_REMEDY = "QuickRemedy"
    MODEL_CANDIDATE = "ModelCandidate"
    MODEL = "Model"
    DISQUALIFIED = "DisqualifiedCandidate"
    UNBOUND = "Unbound"

    def __str__(self) -> str:
        return self.value


@dataclass
class CommitObservation:
    """One analysis row.

    ``ctd_hours`` is the gap since the author's previous commit; it is None for
    an author's first commit and for nonpositive gaps (``invalid_delta``).
    ``size_outlier`` marks candidates rejected by the size fences.
    """

    commit_id: str
    author_id: str
    author_timestamp: datetime
    size_words: int
    ctd_hours: Optional[float] = None
    rate_wpm: Optional[float] = None
    contribution_class: ContributionClass = ContributionClass.NO_CTD
    invalid_delta: bool = False
    size_outlier: bool = False


def build_timelines(commits: Iterable[RawCommit]) -> dict[str, list[RawCommit]]:
    timelines: dict[str, list[RawCommit]] = defaultdict(list)
    for commit in commits:
        timelines[commit.author_id].append(commit)
    for timeline in timelines.values():
        timeline.sort(key=lambda c: c.sort_key)
    return dict(sorted(timelines.items()))


def compute_ctds(timelines: Mapping[str, list[RawCommit]]) -> list[CommitObservation]:
    """Attach to each commit the delta since its author's previous commit.

    Observations come back in global (timestamp, commit id) order.
    """
    observations = []
    for timeline in timelines.values():
        prev: Optional[RawCommit] = None
        for commit in timeline:
            obs = CommitObservation(
                commit_id=commit.commit_id,
                author_id=commit.author_id,
                author_timestamp=commit.author_timestamp,
                size_words=commit.size_words,
            )
            if prev is not None:
                hours = (commit.author_timestamp - prev.author_timestamp).total_seconds() / SECONDS_PER_HOUR
                if hours > 0:
                    obs.ctd_hours = hours
                    obs.rate_wpm = contribution_rate(commit.size_words, hours)
                else:
                    obs.invalid_delta = True
            observations.append(obs)
            prev = commit
    observations.sort(key=lambda o: (o.author_timestamp, o.commit_id))
    return observations


def observe(commits: Iterable[RawCommit]) -> list[CommitObservation]:
    return compute_ctds(build_timelines(commits))
