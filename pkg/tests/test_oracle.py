import itertools
import math

import numpy as np
import pytest

from bilevel import model1, model2, oracle
from bilevel.gauges import EuclideanBall, UnitBox


def naive_cost(model, data, centers, gauge):
    """Loop-based reimplementation used as an independent reference."""
    s = lambda i, j: float(gauge.support(data[i] - data[j]))
    m = len(data)
    if model == 1:
        sums = [sum(s(c, i) for c in centers) for i in range(m)]
        t = min(range(m), key=lambda i: (sums[i], i))
        cost = sum(min(s(c, i) for c in centers) for i in range(m) if i != t) + sums[t]
        return cost, t
    link = [sum(s(c, d) for d in centers) for c in centers]
    t = min(range(len(centers)), key=lambda j: (link[j], j))
    return sum(min(s(c, i) for c in centers) for i in range(m)) + link[t], centers[t]


def naive_brute(model, data, k, gauge):
    r = k if model == 1 else k + 1
    best = None
    for combo in itertools.combinations(range(len(data)), r):
        cost, t = naive_cost(model, data, list(combo), gauge)
        if best is None or cost < best[0] - 1e-12:
            best = (cost, combo, t)
    return best


def test_hand_examples():
    data = np.array([[0.0, 0.0], [2.0, 0.0]])
    assert oracle.discrete_cost_model1(data, [1], EuclideanBall(2)) == (pytest.approx(2.0), 1)
    line = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [7.0, 1.0]])
    assert oracle.discrete_cost_model2(line, [0, 1, 2], EuclideanBall(2))[1] == 1
    cost, t = oracle.discrete_cost_model2(line, [3], EuclideanBall(2))
    assert t == 3 and cost == pytest.approx(sum(np.linalg.norm(line - line[3], axis=1)))


def test_all_nodes_as_centers(rng):
    data = rng.uniform(size=(5, 2))
    cost, t = oracle.discrete_cost_model1(data, range(5), EuclideanBall(2))
    P = oracle.pairwise_costs(data, EuclideanBall(2))
    assert cost == pytest.approx(P[:, t].sum())  # clustering term is zero


@pytest.mark.parametrize("model", [1, 2])
@pytest.mark.parametrize("gcls", [EuclideanBall, UnitBox])
def test_brute_force_matches_naive(rng, model, gcls):
    for _ in range(6):
        m, n = int(rng.integers(3, 7)), int(rng.integers(1, 4))
        k = int(rng.integers(1, m - (model == 2) + 1))
        data = rng.integers(0, 4, size=(m, n)).astype(float)  # integer grid: many ties
        g = gcls(n)
        res = oracle.brute_force(model, data, k, g)
        cost, combo, t = naive_brute(model, data, k, g)
        assert res.cost == pytest.approx(cost)
        assert res.indices == combo  # lexicographically first optimum
        assert res.total_center == t
        assert res.count == math.comb(m, k if model == 1 else k + 1)


def test_threaded_search_matches_sequential(rng):
    data = rng.uniform(0, 10, size=(60, 2))
    seq = oracle.brute_force(1, data, 3, EuclideanBall(2))
    par = oracle.brute_force(1, data, 3, EuclideanBall(2), threads=2)
    assert seq == par


def test_cap_refusal():
    with pytest.raises(oracle.TooManyCombinations) as info:
        oracle.brute_force(2, np.zeros((30, 2)), 3, EuclideanBall(2), cap=1000)
    assert info.value.count == math.comb(30, 4)
    assert "27,405" in str(info.value)


def test_optimum_beats_random_subsets(rng):
    data = rng.uniform(0, 10, size=(14, 2))
    g = EuclideanBall(2)
    for model in (1, 2):
        best = oracle.brute_force(model, data, 3, g).cost
        r = 3 if model == 1 else 4
        for _ in range(1000):
            combo = rng.choice(14, size=r, replace=False)
            assert oracle.discrete_cost(model, data, combo, g)[0] >= best - 1e-12


def test_relation_to_continuous_objective(rng):
    g = EuclideanBall(2)
    for _ in range(50):
        data = rng.uniform(0, 10, size=(8, 2))
        c = rng.choice(8, size=3, replace=False)
        p2 = model2.Model2Problem(data, 2, g, 1.0, 1.0)
        assert model2.exact_objective2(p2, data[c]) == pytest.approx(
            oracle.discrete_cost_model2(data, c, g)[0], abs=1e-9)
        # Model I: the total-center node's own nearest-center link is not charged
        p1 = model1.Model1Problem(data, 3, g, 1.0, 1.0)
        cost, t = oracle.discrete_cost_model1(data, c, g)
        skipped = np.linalg.norm(data[c] - data[t], axis=1).min()
        assert model1.exact_objective(p1, data[c]) == pytest.approx(cost + skipped, abs=1e-9)


def test_bad_arguments():
    with pytest.raises(ValueError):
        oracle.brute_force(3, np.zeros((4, 2)), 1, EuclideanBall(2))
    with pytest.raises(ValueError):
        oracle.brute_force(2, np.zeros((4, 2)), 4, EuclideanBall(2))
