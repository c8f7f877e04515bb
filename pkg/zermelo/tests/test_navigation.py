# tests/test_navigation.py

import numpy as np
import pytest
from zermelo.errors import ConvexityError
from zermelo.models.catalog import get_example
from zermelo.models.navigation import NavigationMetric, RandersData, perturb, randers_norm, unperturb
from zermelo.tests.utils.model_utils import create_spec, random_interior_point


def _random_navigation_data(rng, n):
    m = rng.standard_normal((n, n))
    h = m @ m.T + n * np.eye(n)
    w = rng.standard_normal(n)
    w *= rng.uniform(0.05, 0.9) / np.sqrt(w @ h @ w)
    return h, w


@pytest.mark.parametrize("n", [2, 3, 4])
def test_perturb_unperturb_round_trip(rng, trials, n):
    for _ in range(trials):
        h, w = _random_navigation_data(rng, n)
        data = perturb(h, w)
        h_back, w_back = unperturb(data)
        np.testing.assert_allclose(h_back, h, rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(w_back, w, rtol=1e-12, atol=1e-12)
        again = perturb(h_back, w_back)
        np.testing.assert_allclose(again.a, data.a, rtol=1e-12, atol=1e-12)
        assert data.bnorm2 == pytest.approx(float(w @ h @ w), abs=1e-12)


def test_randers_norm_agrees_with_navigation_formula(rng, trials):
    for _ in range(trials):
        h, w = _random_navigation_data(rng, 3)
        y = rng.standard_normal(3)
        assert randers_norm(perturb(h, w), y) == pytest.approx(randers_norm((h, w), y), rel=1e-12)


def test_one_dimensional_wind_speeds():
    h, w = np.eye(2), np.array([0.5, 0.0])
    # with the wind: ground speed 1.5; against it: 0.5
    assert randers_norm((h, w), [1.0, 0.0]) == pytest.approx(2.0 / 3.0)
    assert randers_norm((h, w), [-1.0, 0.0]) == pytest.approx(2.0)
    data = perturb(h, w)
    assert randers_norm(data, [1.0, 0.0]) == pytest.approx(2.0 / 3.0)


def test_unit_ball_is_translated_by_the_wind(rng, trials):
    h, w = _random_navigation_data(rng, 3)
    data = perturb(h, w)
    for _ in range(trials):
        u = rng.standard_normal(3)
        u /= np.sqrt(u @ h @ u)
        # F(u + W) = 1 for every h-unit u
        assert randers_norm(data, u + w) == pytest.approx(1.0, abs=1e-12)


def test_strong_convexity_violations():
    with pytest.raises(ConvexityError):
        perturb(np.eye(2), [1.0, 0.0])
    with pytest.raises(ConvexityError):
        unperturb(RandersData.from_pair(np.eye(2), [0.0, 1.2]))
    with pytest.raises(ConvexityError):
        randers_norm((np.eye(2), [0.0, 2.0]), [1.0, 0.0])


def test_navigation_metric_domain():
    metric = NavigationMetric(get_example("3.2.1").build())
    assert metric.contains(np.array([0.5, 0.0, 0.0]))
    assert not metric.contains(np.array([1.2, 0.0, 0.0]))
    assert metric.norm([0.0, 0.0, 0.0], [1.0, 0.0, 0.0]) == pytest.approx(1.0)


def test_navigation_data_recovers_background(rng):
    spec = create_spec("klein", Q=np.array([[0.0, 0.2, 0.0], [-0.2, 0.0, 0.0], [0.0, 0.0, 0.0]]), C=[0.1, 0.0, 0.2])
    metric = NavigationMetric(spec)
    x = random_interior_point(rng, 3, radius=0.5)
    h, w = metric.navigation_data(x)
    np.testing.assert_allclose(h, spec.model.metric_at(x), atol=1e-12)
    np.testing.assert_allclose(metric.background_metric(x), h, atol=1e-12)
    np.testing.assert_allclose(metric.randers_riemannian.background_metric(x), metric.randers_data(x).a)
