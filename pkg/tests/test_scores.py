import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from livingsom.errors import DataValidationError
from livingsom.reference import MONETARY_POVERTY_PERCENT, SCORE_PERCENT
from livingsom.scores import (calibrate_threshold, classify_bad, distribution,
                              distribution_from_scores, distribution_from_weights, score,
                              score_matrix)
from livingsom.survey_data import Dataset, HouseholdRecord


def record(codebook, negatives=()):
    r = np.zeros(codebook.n_items, dtype=np.int8)
    for code in negatives:
        r[codebook.index(code)] = 1
    return HouseholdRecord("h", r, None)


def table2():
    w = np.zeros(27)
    for s, p in SCORE_PERCENT.items():
        w[s] = p
    return distribution_from_weights(w)


def test_extreme_households(codebook):
    s = score(record(codebook), codebook)
    assert (s.total, s.partial) == (0, (0, 0, 0, 0, 0))
    s = score(record(codebook, codebook.codes), codebook)
    assert (s.total, s.partial) == (26, (5, 5, 4, 6, 6))


def test_one_negative_per_domain(codebook):
    # no bath, damp walls, noise outside, no car, cannot afford a holiday
    s = score(record(codebook, ["CLB", "PLE", "EB", "CAR", "NVAC"]), codebook)
    assert (s.total, s.partial) == (5, (1, 1, 1, 1, 1))


def test_score_matrix_agrees_with_record_scores(echp_small):
    cb = echp_small.codebook
    totals, partials = score_matrix(echp_small.responses, cb)
    for i in range(0, echp_small.n, 97):
        s = score(echp_small.record(i), cb)
        assert s.total == totals[i] and s.partial == tuple(partials[i])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=26, max_size=26), st.integers(0, 25))
def test_additivity_and_monotonicity(codebook, bits, flip):
    r = np.array(bits, dtype=np.int8)
    t, p = score_matrix(r, codebook)
    assert t[0] == p[0].sum() and (p[0] <= np.array(codebook.domain_sizes())).all()
    if r[flip] == 0:
        r2 = r.copy()
        r2[flip] = 1
        t2, p2 = score_matrix(r2, codebook)
        assert t2[0] == t[0] + 1
        diff = p2[0] - p[0]
        assert diff.sum() == 1 and diff.max() == 1 and diff.min() == 0


def test_distribution_examples(codebook):
    ds = Dataset(codebook, ("a", "b"), np.zeros((2, 26)))
    d = distribution(ds)
    assert d.percent[0] == 100 and d.descending[0] == 100
    ds = Dataset(codebook, ("a", "b"), np.vstack([np.zeros(26), np.ones(26)]))
    d = distribution(ds)
    assert d.percent[0] == 50 and d.percent[26] == 50 and d.descending[26] == 50
    assert d.scores.tolist() == list(range(27))
    with pytest.raises(DataValidationError):
        distribution(Dataset(codebook, (), np.zeros((0, 26))))


def test_table2_reproduction():
    d = table2()
    assert math.fsum(d.percent) == pytest.approx(100.0, abs=1e-9)
    assert d.descending[9] == 10.8
    assert calibrate_threshold(d, MONETARY_POVERTY_PERCENT) == 9
    assert calibrate_threshold(d, 100) == 0
    assert calibrate_threshold(d, 0) == 27


def test_tie_goes_to_higher_score():
    d = distribution_from_weights([50, 25, 25])   # descending 100, 50, 25
    assert calibrate_threshold(d, 37.5) == 2
    assert calibrate_threshold(d, 75) == 1
    with pytest.raises(DataValidationError):
        calibrate_threshold(d, 101)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 26), min_size=1, max_size=300), st.floats(0, 100))
def test_calibration_sandwich_and_consistency(totals, target):
    d = distribution_from_scores(totals, 26)
    assert math.fsum(d.percent) == pytest.approx(100.0, abs=1e-9)
    assert (np.diff(d.descending) <= 1e-12).all()
    s = calibrate_threshold(d, target)
    gap = abs(d.descending_at(s) - target)
    assert all(gap <= abs(d.descending_at(t) - target) for t in range(28))
    bad = classify_bad(totals, s)
    assert 100.0 * bad.sum() / len(totals) == d.descending_at(s)


def test_distribution_order_independent(rng):
    totals = rng.integers(0, 27, 500)
    a = distribution_from_scores(totals, 26)
    b = distribution_from_scores(totals[::-1], 26)
    assert a.descending.tobytes() == b.descending.tobytes()


def test_rate_50_on_uniform_scores(rng):
    totals = rng.integers(0, 27, 5000)
    s = calibrate_threshold(distribution_from_scores(totals, 26), 50)
    assert abs(s - np.median(totals)) <= 1
