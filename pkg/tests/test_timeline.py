from datetime import datetime, timedelta, timezone

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crim.errors import NonpositiveCtd
from crim.ingest import RawCommit
from crim.timeline import ContributionClass, build_timelines, compute_ctds, contribution_rate, observe
from synthetic import random_commits

T0 = datetime(2024, 5, 6, 9, 0, tzinfo=timezone.utc)


def c(cid, seconds, author="a", size=10):
    return RawCommit(cid, author, T0 + timedelta(seconds=seconds), size)


def test_single_author_timeline():
    tl = build_timelines([c("b", 3600), c("a", 0)])
    assert list(tl) == ["a"]
    assert [x.commit_id for x in tl["a"]] == ["a", "b"]


def test_interleaved_authors():
    tl = build_timelines([c("1", 0, "x"), c("2", 10, "y"), c("3", 20, "x"), c("4", 30, "y")])
    assert {k: [x.commit_id for x in v] for k, v in tl.items()} == {"x": ["1", "3"], "y": ["2", "4"]}


def test_equal_timestamps_tie_break_on_id():
    tl = build_timelines([c("f0", 0), c("a9", 0), c("c1", 0)])
    assert [x.commit_id for x in tl["a"]] == ["a9", "c1", "f0"]


def test_first_commit_has_no_ctd():
    [obs] = observe([c("a", 0)])
    assert obs.ctd_hours is None and obs.rate_wpm is None
    assert obs.contribution_class is ContributionClass.NO_CTD


def test_one_second_delta():
    obs = observe([c("a", 0), c("b", 1)])
    assert obs[1].ctd_hours == pytest.approx(0.000278, abs=1e-6)


def test_rate_words_per_minute():
    obs = observe([c("a", 0), c("b", 3600, size=120)])
    assert obs[1].ctd_hours == 1.0
    assert obs[1].rate_wpm == 2.0
    assert contribution_rate(120, 1.0) == 2.0
    assert contribution_rate(0, 3.0) == 0.0
    assert contribution_rate(10, 47.66) == pytest.approx(0.003497, abs=5e-7)
    with pytest.raises(NonpositiveCtd):
        contribution_rate(10, 0.0)


def test_delta_attaches_to_later_commit():
    obs = {o.commit_id: o for o in observe([c("a", 0, size=5), c("b", 7200, size=60)])}
    assert obs["a"].ctd_hours is None
    assert obs["b"].ctd_hours == 2.0 and obs["b"].rate_wpm == 0.5


def test_zero_delta_is_invalid_not_clamped():
    obs = {o.commit_id: o for o in observe([c("a", 0), c("b", 0), c("c", 60)])}
    assert obs["b"].ctd_hours is None and obs["b"].invalid_delta
    assert obs["c"].ctd_hours == pytest.approx(1 / 60)


def test_output_in_global_order():
    obs = compute_ctds(build_timelines([c("z", 50, "y"), c("m", 10, "x"), c("k", 30, "x")]))
    assert [o.commit_id for o in obs] == ["m", "k", "z"]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 300), st.integers(1, 8))
def test_ctd_count_properties(seed, n, authors):
    commits = random_commits(np.random.default_rng(seed), n, authors)
    obs = observe(commits)
    tl = build_timelines(commits)
    present = [o for o in obs if o.ctd_hours is not None]
    assert sum(o.ctd_hours is None for o in obs) >= len(tl)
    assert sum(len(v) - 1 for v in tl.values()) >= len(present)
    assert sum(len(v) - 1 for v in tl.values()) == len(present) + sum(o.invalid_delta for o in obs)
    for o in present:
        assert o.ctd_hours > 0
        assert o.rate_wpm == pytest.approx(o.size_words / (o.ctd_hours * 60))
        assert (o.rate_wpm == 0) == (o.size_words == 0)
