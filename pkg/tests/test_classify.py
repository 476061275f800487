import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modefs.classify import Evaluator, ObjectivePair, evaluate, holdout_error, knn_predict

import oracles
from conftest import make

TRAIN_X = np.array([[0.0, 0.0], [1.0, 1.0], [0.9, 0.9]])
TRAIN_Y = np.array([0, 1, 1])


def test_knn_nearest_point():
    assert knn_predict(TRAIN_X, TRAIN_Y, [1.0, 0.9], k=1) == 1


def test_knn_majority():
    assert knn_predict(TRAIN_X, TRAIN_Y, [0.5, 0.5], k=3) == 1


def test_knn_distance_tie_prefers_lower_index():
    x = np.array([[1.0], [-1.0]])
    assert knn_predict(x, [0, 1], [0.0], k=1) == 0
    assert knn_predict(x[::-1], [1, 0], [0.0], k=1) == 1


def test_knn_vote_tie_goes_to_nearest_class():
    x = np.array([[0.3], [0.1], [0.5], [0.2]])
    y = np.array([0, 1, 0, 1])
    # k=4: two votes each; nearest to 0 is row 1 (class 1)
    assert knn_predict(x, y, [0.0], k=4) == 1


def test_knn_matches_sorting_oracle():
    rng = np.random.default_rng(20)
    x = rng.random((20, 4))
    y = rng.integers(0, 3, 20)
    for q in rng.random((15, 4)):
        assert knn_predict(x, y, q, k=5) == oracles.knn_label(x, y, q, 5)


def test_knn_errors():
    with pytest.raises(ValueError, match="exceeds"):
        knn_predict(TRAIN_X, TRAIN_Y, [0, 0], k=4)
    with pytest.raises(ValueError, match="empty"):
        knn_predict(np.zeros((3, 0)), TRAIN_Y, np.zeros(0), k=1)


def test_feature_ratio():
    rng = np.random.default_rng(0)
    d = make(rng.random((10, 30)), [0, 1] * 5)
    mask = np.zeros(30, bool)
    mask[[2, 7, 20]] = True
    assert evaluate(mask, d, k=1).fr == pytest.approx(0.1)


def test_empty_mask_convention(toy12):
    assert evaluate(np.zeros(3, bool), toy12) == ObjectivePair(0.0, 1.0)


def test_loocv_matches_oracle(toy12):
    full = np.ones(3, bool)
    expected = oracles.loocv_error(toy12.features, toy12.labels, 1)
    assert evaluate(full, toy12, k=1) == ObjectivePair(1.0, expected)
    for k in (3, 5):
        for mask in ([1, 0, 0], [0, 1, 1], [1, 0, 1]):
            m = np.array(mask, bool)
            got = evaluate(m, toy12, k=k).er
            assert got == oracles.loocv_error(toy12.features[:, m], toy12.labels, k)


def test_holdout_self_match(toy12):
    assert holdout_error(np.ones(3, bool), toy12, toy12, k=1) == 0.0


def test_holdout_flipped_labels():
    x = np.array([[0.0], [0.1], [0.9], [1.0]])
    train = make(x, [0, 0, 1, 1])
    test = make(x, [1, 1, 0, 0])
    assert holdout_error(np.ones(1, bool), train, test, k=1) == 1.0


def test_holdout_two_gaussians_matches_oracle():
    rng = np.random.default_rng(5)
    y = np.array([0, 1] * 25)
    x = rng.normal(0, 1, (50, 3)) + 1.2 * y[:, None]
    x = (x - x.min(0)) / (x.max(0) - x.min(0))
    train, test = make(x[:30], y[:30]), make(x[30:], y[30:])
    for mask in ([1, 1, 1], [1, 0, 0], [0, 1, 1]):
        m = np.array(mask, bool)
        expected = oracles.holdout_error(x[:30][:, m], y[:30], x[30:][:, m], y[30:], 5)
        assert holdout_error(m, train, test, k=5) == expected


def test_holdout_rejects_empty_mask(toy12):
    with pytest.raises(ValueError):
        holdout_error(np.zeros(3, bool), toy12, toy12)


def test_full_mask_ratio_is_one(toy12):
    assert evaluate(np.ones(3, bool), toy12).fr == 1.0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 5))
def test_error_invariant_under_row_permutation(seed, k):
    rng = np.random.default_rng(seed)
    x = rng.random((15, 3))  # continuous draws: no distance ties
    y = rng.integers(0, 2, 15)
    y[:2] = [0, 1]
    perm = rng.permutation(15)
    mask = np.ones(3, bool)
    assert evaluate(mask, make(x, y), k).er == evaluate(mask, make(x[perm], y[perm]), k).er


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31))
def test_duplicated_column_changes_ratio_only(seed):
    # uniform distance scaling needs every selected column duplicated; a
    # single duplicated column among several re-weights that feature
    rng = np.random.default_rng(seed)
    x = rng.random((15, 3))
    y = np.array([0, 1] * 7 + [0])
    doubled = make(np.column_stack([x, x]), y)
    base = evaluate(np.ones(3, bool), make(x, y), 3)
    dup = evaluate(np.ones(6, bool), doubled, 3)
    assert dup.er == base.er
    one = np.array([True, False, False])
    one_dup = np.array([True, False, False, True, False, False])
    assert evaluate(one_dup, doubled, 3).er == evaluate(one, make(x, y), 3).er
    assert evaluate(one_dup, doubled, 3).fr == pytest.approx(2 / 6)


def test_evaluator_caches(toy12):
    ev = Evaluator(toy12, k=1)
    m = np.array([1, 0, 1], bool)
    first = ev(m)
    assert ev(m.copy()) == first == evaluate(m, toy12, 1)
    assert ev.n_calls == 2 and ev.n_evaluations == 1
