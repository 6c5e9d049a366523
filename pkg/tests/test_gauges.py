import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bilevel.gauges import EuclideanBall, UnitBox, make_gauge, subgradient

ball2, box2, box3 = EuclideanBall(2), UnitBox(2), UnitBox(3)
vectors = arrays(np.float64, 3, elements=st.floats(-50, 50))


def test_norm_bound():
    assert EuclideanBall(5).norm_bound == 1.0
    assert UnitBox(4).norm_bound == pytest.approx(2.0)


def test_support_examples():
    assert ball2.support(np.array([3.0, 4.0])) == pytest.approx(5.0)
    assert box2.support(np.array([3.0, -4.0])) == pytest.approx(7.0)
    for g in (ball2, box2):
        assert g.support(np.zeros(2)) == 0.0


def test_project_examples():
    np.testing.assert_allclose(ball2.project(np.array([3.0, 4.0])), [0.6, 0.8])
    np.testing.assert_allclose(box3.project(np.array([2.0, -0.5, -3.0])), [1.0, -0.5, -1.0])
    for g in (ball2, box2):
        np.testing.assert_array_equal(g.project(np.zeros(2)), np.zeros(2))


def test_distance_examples():
    assert ball2.distance_sq(np.array([3.0, 4.0])) == pytest.approx(16.0)
    assert box2.distance_sq(np.array([2.0, 0.0])) == pytest.approx(1.0)
    for g in (ball2, box2):
        assert g.distance_sq(np.array([0.1, 0.2])) == 0.0


def test_subgradient_examples():
    np.testing.assert_allclose(subgradient(ball2, np.array([4.0, 4.0]), np.array([1.0, 0.0])),
                               [0.6, 0.8])
    a = np.array([1.5, -2.0])
    np.testing.assert_array_equal(subgradient(ball2, a, a), [0.0, 0.0])
    np.testing.assert_array_equal(box3.select_subgradient(np.array([2.0, 0.0, -5.0])),
                                  [1.0, 0.0, -1.0])


def test_dimension_mismatch():
    for fn in (ball2.support, ball2.project, ball2.distance_sq, box2.support):
        with pytest.raises(ValueError):
            fn(np.zeros(3))
    with pytest.raises(ValueError):
        make_gauge("linf", 2)


def test_broadcasting_over_leading_axes(rng):
    z = rng.normal(size=(4, 5, 3)) * 3
    for g in (EuclideanBall(3), box3):
        vals = g.support(z)
        assert vals.shape == (4, 5)
        assert vals[2, 3] == pytest.approx(g.support(z[2, 3]))


@settings(max_examples=200, deadline=None)
@given(vectors, vectors)
def test_projection_properties(z, w):
    for g in (EuclideanBall(3), box3):
        p = g.project(z)
        np.testing.assert_allclose(g.project(p), p, atol=1e-12)  # idempotent
        assert np.linalg.norm(p) <= g.norm_bound + 1e-12
        # nonexpansive
        assert np.linalg.norm(p - g.project(w)) <= np.linalg.norm(z - w) + 1e-9
        # support is the max of <x, y> over F; the projection of x scaled out is a maximiser
        assert g.support(z) >= float(z @ p) - 1e-9


@settings(max_examples=200, deadline=None)
@given(vectors, vectors, vectors)
def test_subgradient_inequality(x, a, z):
    for g in (EuclideanBall(3), box3):
        u = subgradient(g, x, a)
        assert g.support(z - a) >= g.support(x - a) + float(u @ (z - x)) - 1e-9 * (1 + np.abs(z).sum())
