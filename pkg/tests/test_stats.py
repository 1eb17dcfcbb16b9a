import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from crim.errors import EmptyInput, NonFiniteValue
from crim.stats import describe, iqr_fences, quantile
from oracles import mean_reference, quantile_reference, std_reference

reals = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
vectors = st.lists(reals, min_size=1, max_size=60)
unit = st.floats(min_value=0.0, max_value=1.0)


def test_quantile_examples():
    assert quantile([5], 0.3) == 5
    v = [1, 2, 3, 4, 100]
    assert quantile(v, 0.25) == quantile_reference(v, 0.25) == 2
    assert quantile(v, 0.75) == quantile_reference(v, 0.75) == 4
    assert quantile([1, 2, 3, 4, 5, 6, 7, 8], 0.75) == 6.25
    assert quantile(v, 0) == 1 and quantile(v, 1) == 100


def test_quantile_errors():
    with pytest.raises(EmptyInput):
        quantile([], 0.5)
    with pytest.raises(NonFiniteValue):
        quantile([1.0, math.nan], 0.5)
    with pytest.raises(NonFiniteValue):
        iqr_fences([1.0, math.inf])
    with pytest.raises(ValueError):
        quantile([1.0], 1.5)


def test_fences():
    s = iqr_fences([1, 2, 3, 4, 100])
    assert (s.q1, s.q2, s.q3, s.iqr) == (2, 3, 4, 2)
    assert s.upper_fence == 7 and s.lower_fence == -1
    assert s.is_outlier(100) and not s.is_outlier(4)
    flat = iqr_fences([3, 3, 3])
    assert flat.iqr == 0 and flat.lower_fence == flat.upper_fence == 3
    assert iqr_fences([0, 0, 10, 10]).lower_fence < 0


def test_describe_examples():
    d = describe([2, 2, 2])
    assert (d.count, d.mean, d.std, d.q1, d.median, d.q3) == (3, 2, 0, 2, 2, 2)
    d = describe([0, 10])
    assert (d.mean, d.min, d.max, d.median) == (5, 0, 10, 5)
    assert describe([7]).std == 0
    with pytest.raises(EmptyInput):
        describe([])


def test_describe_matches_pandas_convention():
    rng = np.random.default_rng(3)
    v = rng.lognormal(2, 1.5, size=201).tolist()
    d = describe(v)
    assert math.isclose(d.std, float(np.std(v, ddof=1)), rel_tol=1e-12)
    assert math.isclose(d.q1, float(np.quantile(v, 0.25)), rel_tol=1e-12)
    assert math.isclose(d.mean, mean_reference(v), rel_tol=1e-12)
    assert math.isclose(d.std, std_reference(v), rel_tol=1e-12)


@given(vectors, unit)
def test_quantile_matches_reference(v, q):
    scale = max(abs(x) for x in v) or 1.0
    assert math.isclose(quantile(v, q), quantile_reference(v, q), rel_tol=1e-12, abs_tol=1e-12 * scale)


@given(vectors, unit, unit)
def test_quantile_monotone_in_q(v, q1, q2):
    lo, hi = sorted((q1, q2))
    assert quantile(v, lo) <= quantile(v, hi)


@given(vectors, unit)
def test_quantile_monotone_under_increasing_map(v, q):
    shifted = [x * 2 + 1 for x in v]
    bumped = [x + abs(x) * 0.5 + 1 for x in v]
    assert quantile(bumped, q) >= quantile(v, q) - 1e-9
    assert math.isclose(quantile(shifted, q), 2 * quantile(v, q) + 1, rel_tol=1e-9, abs_tol=1e-6)


@given(st.lists(reals, min_size=1, max_size=40), st.randoms())
def test_describe_permutation_invariant(v, rnd):
    w = list(v)
    rnd.shuffle(w)
    a, b = describe(v), describe(w)
    assert (a.count, a.min, a.q1, a.median, a.q3, a.max) == (b.count, b.min, b.q1, b.median, b.q3, b.max)
    assert math.isclose(a.mean, b.mean, rel_tol=1e-9, abs_tol=1e-9)


@given(vectors)
def test_describe_ordering_invariants(v):
    d = describe(v)
    assert d.min <= d.q1 <= d.median <= d.q3 <= d.max
    assert d.std >= 0


@given(st.lists(st.integers(0, 10_000), min_size=1, max_size=80))
def test_few_values_strictly_above_q3(v):
    q3 = iqr_fences(v).q3
    assert sum(x > q3 for x in v) <= math.ceil(len(v) / 4) + 1
