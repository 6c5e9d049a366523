"""Starting centers for the DCA solvers."""

from __future__ import annotations

import numpy as np


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def init_random_nodes(data, count: int, seed=None) -> np.ndarray:
    """``count`` distinct data rows drawn without replacement."""
    data = np.asarray(data, dtype=float)
    if not 1 <= count <= data.shape[0]:
        raise ValueError(f"cannot pick {count} distinct nodes out of {data.shape[0]}")
    idx = _rng(seed).choice(data.shape[0], size=count, replace=False)
    return data[idx].copy()


def _sq_dists(data, centers):
    diff = data[:, None, :] - centers[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _kmeans_pp(data, count, rng):
    m = data.shape[0]
    centers = [data[rng.integers(m)]]
    closest = _sq_dists(data, np.array(centers))[:, 0]
    for _ in range(1, count):
        total = closest.sum()
        if total > 0:
            i = rng.choice(m, p=closest / total)
        else:  # every point already coincides with a center
            i = rng.integers(m)
        centers.append(data[i])
        closest = np.minimum(closest, _sq_dists(data, data[i][None, :])[:, 0])
    return np.array(centers)


def kmeans(data, count: int, seed=None, max_iter: int = 100):
    """Lloyd's algorithm with k-means++ seeding.

    Returns ``(centers, labels, history)`` where ``history`` holds the
    sum of squared distances after every sweep. An empty cluster is
    re-seeded at the point farthest from its current center.
    """
    data = np.asarray(data, dtype=float)
    m = data.shape[0]
    if not 1 <= count <= m:
        raise ValueError(f"cannot form {count} clusters from {m} points")
    rng = _rng(seed)
    centers = _kmeans_pp(data, count, rng)
    labels = None
    history = []
    for _ in range(max_iter):
        d2 = _sq_dists(data, centers)
        new_labels = d2.argmin(axis=1)
        history.append(float(d2[np.arange(m), new_labels].sum()))
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for c in range(count):
            members = labels == c
            if members.any():
                centers[c] = data[members].mean(axis=0)
            else:
                far = int(d2[np.arange(m), labels].argmax())
                centers[c] = data[far]
                labels[far] = c
                d2[far, :] = 0.0
    return centers, labels, history


def init_kmeans(data, count: int, seed=None) -> np.ndarray:
    return kmeans(data, count, seed)[0]


def init_uniform(bounds, count: int, dim: int, seed=None) -> np.ndarray:
    """I.i.d. uniform points in the box ``bounds = (lower, upper)``."""
    lo, hi = (np.broadcast_to(np.asarray(b, dtype=float), (dim,)) for b in bounds)
    if np.any(hi < lo):
        raise ValueError("upper bounds must not be below lower bounds")
    return _rng(seed).uniform(lo, hi, size=(count, dim))


def data_bounds(data) -> tuple[np.ndarray, np.ndarray]:
    data = np.asarray(data, dtype=float)
    return data.min(axis=0), data.max(axis=0)


STRATEGIES = ("random", "kmeans", "uniform")


def initial_centers(strategy: str, data, count: int, seed=None) -> np.ndarray:
    if strategy == "random":
        return init_random_nodes(data, count, seed)
    if strategy == "kmeans":
        return init_kmeans(data, count, seed)
    if strategy == "uniform":
        data = np.asarray(data, dtype=float)
        return init_uniform(data_bounds(data), count, data.shape[1], seed)
    raise ValueError(f"unknown init strategy {strategy!r}; choose from {STRATEGIES}")
