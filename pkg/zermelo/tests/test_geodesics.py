# tests/test_geodesics.py

import numpy as np
import pytest
from scipy.linalg import expm
from zermelo.errors import DomainError, SearchFailureError, ValidationError
from zermelo.models.catalog import get_example
from zermelo.models.geodesics import geodesic_ivp, shortest_time, straight_line_time
from zermelo.models.navigation import NavigationMetric
from zermelo.models.wind import wind_at
from zermelo.tests.utils.model_utils import create_spec

X0 = np.array([0.3, 0.0, 0.0])
U = np.array([-0.6, 0.0, 0.8])


def _tank():
    spec = get_example("3.2.1").build()
    return spec, NavigationMetric(spec)


def _exact_tank_path(spec, t):
    # h-geodesic with unit speed u, carried along by the rotation flow
    return expm(t * spec.Q) @ (X0 + t * U)


def test_tank_geodesic_follows_the_drifted_straight_line():
    spec, metric = _tank()
    y0 = U + wind_at(spec, X0)
    assert metric.norm(X0, y0) == pytest.approx(1.0, abs=1e-12)
    trajectory = geodesic_ivp(metric, X0, y0, t_end=0.5, dt=1e-2)
    assert not trajectory.exited
    for t, x in zip(trajectory.times, trajectory.positions):
        np.testing.assert_allclose(x, _exact_tank_path(spec, t), atol=1e-7)
    assert trajectory.drift() <= 1e-6


def test_rk4_error_shrinks_with_fourth_order():
    spec, metric = _tank()
    y0 = U + wind_at(spec, X0)
    exact = _exact_tank_path(spec, 1.0)
    errors = [
        np.linalg.norm(geodesic_ivp(metric, X0, y0, t_end=1.0, dt=dt).positions[-1] - exact) for dt in (0.2, 0.1)
    ]
    assert 10.0 < errors[0] / errors[1] < 22.0


def test_constant_wind_geodesics_are_straight():
    metric = NavigationMetric(get_example("3.2.3").build())
    x0 = np.array([0.1, -0.2, 0.3])
    y0 = np.array([0.5, 0.2, -0.4])
    trajectory = geodesic_ivp(metric, x0, y0, t_end=1.0, dt=0.05)
    expected = x0 + np.outer(trajectory.times, y0)
    np.testing.assert_allclose(trajectory.positions, expected, atol=1e-12)
    assert trajectory.drift() <= 1e-12


def test_norm_is_conserved_on_the_rotating_sphere():
    metric = NavigationMetric(get_example("3.1.1").build())
    trajectory = geodesic_ivp(metric, [0.1, 0.2, 0.0], [0.3, -0.1, 0.5], t_end=0.5, dt=1e-2)
    assert trajectory.drift() <= 1e-6
    assert len(trajectory.states) == len(trajectory.times) == 51


def test_geodesic_leaving_the_convex_region_is_truncated():
    spec, metric = _tank()
    x0 = np.array([0.9, 0.0, 0.0])
    y0 = np.array([1.0, 0.0, 0.0]) + wind_at(spec, x0)
    trajectory = geodesic_ivp(metric, x0, y0, t_end=1.0, dt=1e-2)
    assert trajectory.exited
    assert trajectory.times[-1] < 1.0
    assert all(metric.contains(x) for x in trajectory.positions)


def test_trajectory_csv():
    metric = NavigationMetric(get_example("3.2.3").build())
    trajectory = geodesic_ivp(metric, [0.0, 0.0, 0.0], [1.0, 0.0, 0.0], t_end=0.1, dt=0.05)
    lines = trajectory.to_csv().splitlines()
    assert lines[0] == "t,x1,x2,x3,F"
    assert len(lines) == 4
    assert float(lines[-1].split(",")[0]) == pytest.approx(0.1)


def test_geodesic_ivp_errors():
    metric = NavigationMetric(get_example("3.3.1").build())
    with pytest.raises(ValidationError):
        geodesic_ivp(metric, [0.0, 0.0, 0.0], [0.0, 0.0, 0.0])
    with pytest.raises(ValidationError):
        geodesic_ivp(metric, [0.0, 0.0, 0.0], [1.0, 0.0, 0.0], dt=0.0)
    with pytest.raises(ValidationError):
        geodesic_ivp(metric, [0.0, 0.0, 0.0], [1.0, 0.0, 0.0], t_end=-1.0)
    with pytest.raises(DomainError):
        geodesic_ivp(metric, [1.5, 0.0, 0.0], [1.0, 0.0, 0.0])


def test_straight_line_time_under_constant_wind():
    metric = NavigationMetric(create_spec("euclidean", C=[0.5, 0.0], n=2))
    assert straight_line_time(metric, [0.0, 0.0], [1.0, 0.0]) == pytest.approx(2.0 / 3.0, rel=1e-12)
    assert straight_line_time(metric, [1.0, 0.0], [0.0, 0.0]) == pytest.approx(2.0, rel=1e-12)


@pytest.mark.parametrize("start,goal,expected", [([0.0, 0.0], [1.0, 0.0], 2.0 / 3.0), ([1.0, 0.0], [0.0, 0.0], 2.0)])
def test_shortest_time_with_and_against_the_wind(start, goal, expected):
    metric = NavigationMetric(create_spec("euclidean", C=[0.5, 0.0], n=2))
    direction, arrival = shortest_time(metric, start, goal)
    assert arrival == pytest.approx(expected, rel=1e-6)
    np.testing.assert_allclose(direction, np.subtract(goal, start), atol=1e-6)


def test_shortest_time_without_wind_is_the_distance():
    metric = NavigationMetric(create_spec("euclidean"))
    direction, arrival = shortest_time(metric, [0.0, 0.0, 0.0], [0.3, 0.4, 0.0])
    assert arrival == pytest.approx(0.5, rel=1e-6)
    np.testing.assert_allclose(direction, [0.6, 0.8, 0.0], atol=1e-6)


def test_shortest_time_errors():
    metric = NavigationMetric(create_spec("euclidean", n=2))
    with pytest.raises(ValidationError):
        shortest_time(metric, [0.0, 0.0], [0.0, 0.0])
    with pytest.raises(ValidationError):
        shortest_time(NavigationMetric(create_spec("euclidean", n=4)), np.zeros(4), np.ones(4))
    with pytest.raises(SearchFailureError):
        shortest_time(metric, [0.0, 0.0], [1.0, 0.0], budget=0)
    with pytest.raises(DomainError):
        shortest_time(NavigationMetric(get_example("3.3.1").build()), [0.0, 0.0, 0.0], [2.0, 0.0, 0.0])
