import math

import numpy as np
import pytest

import compsumm as cs


def blobs(per_group=12, dim=3, sep=3.0, groups=2, seed=0):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(groups * per_group, dim))
    pts[:, 0] += np.repeat(np.arange(groups) * sep, per_group)
    labels = [g for g in range(groups) for _ in range(per_group)]
    return cs.Dataset(pts, labels, [f"g{g}" for g in range(groups)])


def test_dataset_roundtrip():
    data = blobs()
    assert len(data) == 24
    assert data.num_groups == 2
    assert data.names == ["g0", "g1"]
    assert data.members(1)[0] == 12
    np.testing.assert_array_equal(data.points.shape, (24, 3))


def test_mmd2_against_numpy():
    rng = np.random.default_rng(1)
    X, Y = rng.normal(size=(7, 2)), rng.normal(size=(5, 2)) + 0.5
    gamma = 0.4

    def k(A, B):
        d = ((A[:, None, :] - B[None, :, :]) ** 2).sum(-1)
        return np.exp(-gamma * d)

    expected = k(X, X).mean() - 2 * k(X, Y).mean() + k(Y, Y).mean()
    assert cs.mmd2(X, Y, gamma) == pytest.approx(expected, abs=1e-12)
    np.testing.assert_allclose(cs.rbf_kernel(X, Y, gamma), k(X, Y), atol=1e-14)


def test_median_gamma_two_points():
    assert cs.median_gamma(np.array([[0.0], [2.0]])) == pytest.approx(0.25)


def test_greedy_and_gradient():
    data = blobs(seed=2)
    gamma = cs.median_gamma(data.points)
    protos = cs.greedy_select(data, "mmd-diff", 2, gamma, 1.0)
    assert [len(p) for p in protos] == [2, 2]
    assert all(r in data.members(g) for g, p in enumerate(protos) for r in p)

    r = cs.optimize_meta(data, "mmd-diff", 2, gamma, 1.0, init="greedy")
    assert r["final_value"] >= r["initial_value"] - 1e-10
    snapped = cs.snap(data, r["meta"])
    assert [len(set(p)) for p in snapped] == [2, 2]
    value, grad = cs.meta_utility(data, r["initial"], "mmd-diff", gamma, 1.0)
    assert value == pytest.approx(cs.utility(data, protos, "mmd-diff", gamma, 1.0), abs=1e-12)
    assert len(grad) == 2 and grad[0].shape == (2, 3)


def test_baselines_and_summarise():
    data = blobs(seed=3)
    assert [len(p) for p in cs.kmeans_summary(data, 3, seed=1)] == [3, 3]
    assert [len(p) for p in cs.kmedoids_summary(data, 3)] == [3, 3]
    assert sum(len(p) for p in cs.mmd_critic_summary(data, 4, 0.5)) == 4
    s = cs.summarise(data, "mmd-div-grad", 2, gamma=0.5, lam=1.0)
    assert s["optimizer"] == "gradient"
    assert math.isfinite(s["value"])
    with pytest.raises(ValueError):
        cs.summarise(data, "mmd-div-grad", 2)
    with pytest.raises(ValueError):
        cs.greedy_select(data, "nn", 50, 1.0)


def test_classifiers():
    data = blobs(per_group=20, dim=2, sep=8.0, seed=4)
    labels = data.groups
    assert cs.knn1_predict(data.points, labels, data.points) == labels
    model = cs.svm_train(data.points, labels, 10.0, 0.5)
    pred = model.predict(data.points)
    assert cs.balanced_accuracy(pred, labels) == 1.0
    assert model.decision_values(data.points).shape == (40, 2)
    assert cs.balanced_accuracy([0] * 4 + [1] * 4, [0, 0, 0, 0, 1, 1, 0, 0]) == pytest.approx(0.5 * (4 / 6 + 1.0))


def test_evaluate_full_reference():
    data = blobs(per_group=20, dim=2, sep=4.0, seed=5)
    reports = cs.evaluate(data, ["kmeans", "full"], [2], splits=2, seed=1)
    assert [r["method"] for r in reports] == ["kmeans", "full"]
    for r in reports:
        assert len(r["per_split"]) == 2
        assert 0.0 <= r["mean"] <= 1.0
        assert r["ci95"] is not None
