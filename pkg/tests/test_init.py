import numpy as np
import pytest

from bilevel.init import (data_bounds, init_kmeans, init_random_nodes, init_uniform,
                          initial_centers, kmeans)


def test_random_nodes(rng):
    data = rng.normal(size=(9, 2))
    X = init_random_nodes(data, 9, seed=1)
    assert sorted(map(tuple, X)) == sorted(map(tuple, data))
    one = init_random_nodes(data, 1, seed=1)
    assert one.shape == (1, 2) and any(np.array_equal(one[0], r) for r in data)
    np.testing.assert_array_equal(init_random_nodes(data, 4, seed=3), init_random_nodes(data, 4, seed=3))
    assert len({tuple(r) for r in init_random_nodes(data, 6, seed=5)}) == 6
    with pytest.raises(ValueError):
        init_random_nodes(data, 10)


def test_kmeans_finds_blobs():
    rng = np.random.default_rng(0)
    blobs = np.array([[0.0, 0.0], [50.0, 0.0], [0.0, 50.0]])
    data = np.vstack([b + rng.normal(scale=0.5, size=(20, 2)) for b in blobs])
    centers = init_kmeans(data, 3, seed=4)
    for b in blobs:
        assert np.linalg.norm(centers - b, axis=1).min() < 1.0


def test_kmeans_single_cluster_and_history(rng):
    data = rng.normal(size=(30, 3))
    np.testing.assert_allclose(init_kmeans(data, 1, seed=0)[0], data.mean(axis=0))
    _, _, history = kmeans(rng.normal(size=(200, 2)), 5, seed=2)
    assert all(b <= a + 1e-9 for a, b in zip(history, history[1:]))


def test_kmeans_duplicate_points():
    data = np.array([[1.0, 1.0]] * 6 + [[3.0, 3.0]])
    centers, labels, _ = kmeans(data, 3, seed=0)
    assert np.all(np.isfinite(centers))
    assert labels.shape == (7,)
    with pytest.raises(ValueError):
        kmeans(data, 8)


def test_uniform(rng):
    data = rng.uniform(-3, 7, size=(40, 3))
    lo, hi = data_bounds(data)
    X = init_uniform((lo, hi), 50, 3, seed=9)
    assert X.shape == (50, 3)
    assert np.all(X >= lo) and np.all(X <= hi)
    np.testing.assert_array_equal(X, init_uniform((lo, hi), 50, 3, seed=9))
    with pytest.raises(ValueError):
        init_uniform((1.0, 0.0), 2, 1)


def test_dispatch(rng):
    data = rng.normal(size=(10, 2))
    for name in ("random", "kmeans", "uniform"):
        assert initial_centers(name, data, 3, seed=0).shape == (3, 2)
    with pytest.raises(ValueError):
        initial_centers("genetic", data, 3)
