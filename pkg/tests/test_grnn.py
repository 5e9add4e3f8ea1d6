import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boilrange.dataset import Dataset, Standardizer
from boilrange.exceptions import (
    ArityMismatchError,
    EmptyCandidatesError,
    NonPositiveSigmaError,
    TooFewRowsError,
)
from boilrange.grnn import GRNNRegressor, fit_grnn, loo_rms, predict_grnn, select_bandwidth

from conftest import IBP
from oracles import grnn_direct, mp


def _model(patterns, targets, sigma):
    return GRNNRegressor.from_params(Standardizer.identity(), patterns, targets, sigma)


def _unit_patterns(k):
    P = np.zeros((k, 9))
    P[np.arange(k), np.arange(k) % 9] = 1.0
    P[:, 0] += np.arange(k)  # pairwise distances >= 1
    return P


def test_fit_stores_patterns(synthetic22):
    m = fit_grnn(synthetic22.subset(range(14)), IBP, 0.5)
    assert m.patterns_.shape == (14, 9)
    np.testing.assert_array_equal(m.targets_, synthetic22.y(IBP)[:14])


def test_fit_is_deterministic(synthetic22):
    a = fit_grnn(synthetic22, IBP, 0.5)
    b = fit_grnn(synthetic22, IBP, 0.5)
    np.testing.assert_array_equal(a.patterns_, b.patterns_)
    assert a.sigma_ == b.sigma_


@pytest.mark.parametrize("sigma", [0.0, -1.0, float("inf"), float("nan")])
def test_bad_sigma(synthetic22, sigma):
    with pytest.raises(NonPositiveSigmaError):
        fit_grnn(synthetic22, IBP, sigma)


def test_single_pattern(rng):
    m = GRNNRegressor(sigma=0.3).fit(np.full((1, 9), 3.0), [139.2])
    for x in rng.normal(size=(5, 9)) * 50:
        assert predict_grnn(m, x) == 139.2


def test_equidistant_pair():
    P = np.zeros((2, 9))
    P[0, 0], P[1, 0] = -1.0, 1.0
    m = _model(P, [138.0, 142.0], 0.7)
    assert predict_grnn(m, np.zeros(9)) == pytest.approx(140.0, abs=1e-12)


def test_three_patterns_frozen():
    # value from the extended-precision direct formula (oracles.grnn_direct)
    P = np.zeros((3, 9))
    P[1, 0] = 1.0
    P[2, 1] = 2.0
    q = np.zeros(9)
    q[:2] = 0.5
    m = _model(P, [138.0, 141.0, 145.0], 1.0)
    assert abs(predict_grnn(m, q) - 140.35449321923329983736) < 1e-10
    assert abs(predict_grnn(m, q) - float(grnn_direct(P, [138, 141, 145], 1.0, q))) < 1e-10


def test_far_query_is_nearest_target():
    m = _model(_unit_patterns(3), [1.0, 2.0, 3.0], 0.05)
    q = np.zeros(9)
    q[0] = 1e4
    assert predict_grnn(m, q) == 3.0


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), k=st.integers(1, 8), sigma=st.floats(0.2, 5.0))
def test_stabilized_matches_direct(seed, k, sigma):
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(k, 9))
    y = rng.normal(140, 5, size=k)
    q = rng.normal(size=9)
    m = _model(P, y, sigma)
    assert abs(predict_grnn(m, q) - float(grnn_direct(P, y, sigma, q))) < 1e-10


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), sigma=st.floats(1e-4, 1e4), scale=st.floats(0.1, 1e3))
def test_range_containment(seed, sigma, scale):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(10, 9))
    y = rng.normal(140, 5, size=10)
    m = GRNNRegressor(sigma=sigma).fit(X, y)
    pred = m.predict(rng.normal(size=(20, 9)) * scale)
    assert np.all(pred >= y.min()) and np.all(pred <= y.max())


def test_small_sigma_limit():
    P = _unit_patterns(6)
    y = np.array([138.0, 139.5, 141.0, 140.2, 143.3, 137.1])
    m = _model(P, y, 1e-3)
    for p, t in zip(P, y):
        assert abs(predict_grnn(m, p) - t) < 1e-9


def test_large_sigma_limit(rng):
    P = rng.normal(size=(7, 9))
    y = rng.normal(140, 5, size=7)
    m = _model(P, y, 1e6)
    for q in rng.normal(size=(5, 9)):
        assert abs(predict_grnn(m, q) - y.mean()) < 1e-6


def _loo_brute(X, y, sigma):
    # refit a fresh model on n-1 rows for each held-out point
    s = Standardizer().fit(X)
    Z = s.transform(X)
    errs = []
    for i in range(len(y)):
        keep = [j for j in range(len(y)) if j != i]
        pred = grnn_direct(Z[keep], y[keep], sigma, Z[i])
        errs.append((float(pred) - y[i]) ** 2)
    return float(mp.sqrt(sum(errs) / len(errs)))


def test_bandwidth_selection_against_exhaustive_loo():
    rng = np.random.default_rng(8)
    X = rng.uniform(-2, 2, size=(14, 9))
    y = 140 + 3 * np.sin(X[:, 0]) + X[:, 1] ** 2
    ds = Dataset(X, {IBP: y})
    cands = [0.01, 1.0, 100.0]
    chosen = select_bandwidth(ds, IBP, cands)
    oracle = {s: _loo_brute(X, y, s) for s in cands}
    assert all(oracle[chosen] <= v for v in oracle.values())
    Z = Standardizer().fit_transform(X)
    for s in cands:
        assert loo_rms(Z, y, s) == pytest.approx(oracle[s], rel=1e-10)


def test_singleton_candidate(synthetic22):
    assert select_bandwidth(synthetic22, IBP, [0.37]) == 0.37


def test_tie_goes_to_smaller_sigma():
    # two rows: each LOO prediction is the other target, whatever sigma is
    ds = Dataset(np.array([[0.0] * 9, [1.0] * 9]), {IBP: np.array([1.0, 2.0])})
    assert select_bandwidth(ds, IBP, [2.0, 0.5, 1.0]) == 0.5


def test_selection_errors(synthetic22):
    with pytest.raises(EmptyCandidatesError):
        select_bandwidth(synthetic22, IBP, [])
    with pytest.raises(TooFewRowsError):
        select_bandwidth(synthetic22.subset([0]), IBP, [1.0])
    with pytest.raises(NonPositiveSigmaError):
        select_bandwidth(synthetic22, IBP, [1.0, 0.0])


def test_default_estimator_selects_sigma(synthetic22):
    m = GRNNRegressor().fit(synthetic22.X, synthetic22.y(IBP))
    assert m.sigma_selected_ and m.sigma_ in m.sigma_candidates
    with pytest.raises(ArityMismatchError):
        m.predict(np.ones((2, 8)))
