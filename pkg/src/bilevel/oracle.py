"""Discrete costs with centers restricted to data nodes, and exhaustive search.

Model I cost of a node subset ``C`` (the cluster centers): the total center
``t`` is the node with the smallest summed distance to the centers, and

    cost = sum_{i != t} min_{c in C} s(c, i) + sum_{c in C} s(c, t)

where ``s(c, i) = sigma_F(a^c - a^i)``. Node ``t`` is wired straight to every
center, so its own nearest-center link is not counted again. Model II cost of
``k + 1`` node centers: the clustering term plus the smallest linkage sum
``min_c sum_{c'} s(c, c')``; the total center is itself a center.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .gauges import Gauge

DEFAULT_CAP = 10**7
_CHUNK_FLOATS = 4_000_000


class TooManyCombinations(ValueError):
    def __init__(self, count: int, cap: int):
        super().__init__(
            f"brute force needs {count:,} subsets, above the cap of {cap:,}"
        )
        self.count = count
        self.cap = cap


@dataclass(frozen=True)
class BruteForceResult:
    indices: tuple[int, ...]
    cost: float
    total_center: int
    count: int


def pairwise_costs(data, gauge: Gauge) -> np.ndarray:
    """``P[c, i] = sigma_F(a^c - a^i)`` for all node pairs."""
    data = np.asarray(data, dtype=float)
    return gauge.support(data[:, None, :] - data[None, :, :])


def _center_count(model: int, k: int) -> int:
    if model == 1:
        return k
    if model == 2:
        return k + 1
    raise ValueError(f"model must be 1 or 2, got {model!r}")


def _costs_model1(P, combos):
    Dc = P[combos]  # (C, k, m)
    nearest = Dc.min(axis=1)
    sums = Dc.sum(axis=1)
    t = sums.argmin(axis=1)
    rows = np.arange(len(combos))
    cost = nearest.sum(axis=1) - nearest[rows, t] + sums[rows, t]
    return cost, t


def _costs_model2(P, combos):
    clustering = P[combos].min(axis=1).sum(axis=1)
    link = P[combos[:, :, None], combos[:, None, :]].sum(axis=2)
    t = link.argmin(axis=1)
    cost = clustering + link[np.arange(len(combos)), t]
    return cost, combos[np.arange(len(combos)), t]


def _evaluate(model, P, combos):
    if model == 1:
        return _costs_model1(P, combos)
    return _costs_model2(P, combos)


def discrete_cost_model1(data, center_indices, gauge: Gauge) -> tuple[float, int]:
    combo = np.asarray([list(center_indices)], dtype=np.intp)
    cost, t = _costs_model1(pairwise_costs(data, gauge), combo)
    return float(cost[0]), int(t[0])


def discrete_cost_model2(data, center_indices, gauge: Gauge) -> tuple[float, int]:
    combo = np.asarray([list(center_indices)], dtype=np.intp)
    cost, t = _costs_model2(pairwise_costs(data, gauge), combo)
    return float(cost[0]), int(t[0])


def discrete_cost(model: int, data, center_indices, gauge: Gauge) -> tuple[float, int]:
    if model == 1:
        return discrete_cost_model1(data, center_indices, gauge)
    if model == 2:
        return discrete_cost_model2(data, center_indices, gauge)
    raise ValueError(f"model must be 1 or 2, got {model!r}")


def _search_prefix(model, P, r, first):
    """Best subset among those whose smallest index is ``first``."""
    m = P.shape[0]
    rest = m - first - 1
    if r == 1:
        combos = np.array([[first]], dtype=np.intp)
        cost, t = _evaluate(model, P, combos)
        return float(cost[0]), (first,), int(t[0])
    chunk = max(1, _CHUNK_FLOATS // (r * m))
    it = combinations(range(first + 1, m), r - 1)
    best = (math.inf, None, None)
    remaining = math.comb(rest, r - 1)
    while remaining > 0:
        size = min(chunk, remaining)
        tail = np.fromiter(it, dtype=np.dtype((np.intp, r - 1)), count=size)
        remaining -= size
        combos = np.empty((size, r), dtype=np.intp)
        combos[:, 0] = first
        combos[:, 1:] = tail
        cost, t = _evaluate(model, P, combos)
        j = int(cost.argmin())
        if cost[j] < best[0]:
            best = (float(cost[j]), tuple(int(c) for c in combos[j]), int(t[j]))
    return best


def brute_force(
    model: int,
    data,
    k: int,
    gauge: Gauge,
    cap: int = DEFAULT_CAP,
    threads: int = 1,
) -> BruteForceResult:
    """Exact minimum of the discrete cost over every node subset.

    Subsets are scanned in lexicographic order; among equal costs the first
    (lexicographically smallest) subset wins.
    """
    data = np.asarray(data, dtype=float)
    m = data.shape[0]
    r = _center_count(model, k)
    if not 1 <= r <= m:
        raise ValueError(f"{r} centers cannot be chosen from {m} nodes")
    count = math.comb(m, r)
    if count > cap:
        raise TooManyCombinations(count, cap)

    P = pairwise_costs(data, gauge)
    firsts = range(m - r + 1)
    if threads > 1 and count > 50_000:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(
                pool.map(_search_prefix, [model] * len(firsts), [P] * len(firsts),
                         [r] * len(firsts), firsts)
            )
    else:
        parts = [_search_prefix(model, P, r, f) for f in firsts]

    best = (math.inf, None, None)
    for part in parts:  # already in lexicographic order of the first index
        if part[0] < best[0]:
            best = part
    cost, indices, total = best
    return BruteForceResult(indices=indices, cost=cost, total_center=total, count=count)
