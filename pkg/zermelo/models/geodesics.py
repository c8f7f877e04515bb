# models/geodesics.py

"""
Geodesics of Finsler metrics, which for navigation metrics are the paths of
shortest travel time.

``geodesic_ivp`` integrates ẍ = −2G(x, ẋ) with fixed-step classic Runge–Kutta;
``shortest_time`` shoots unit-speed geodesics from a start point and adjusts
the initial direction until the trajectory passes through the goal.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple
import attrs
import numpy as np
import pandas as pd
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import minimize, minimize_scalar
from zermelo.errors import ConvexityError, DomainError, SearchFailureError, ValidationError
from zermelo.models.finsler import FinslerMetric, spray_coefficients
from zermelo.utils.finite_differences import DEFAULT_STEP

DEFAULT_DT = 1.0e-3
SHOOTING_BUDGET = 500
SHOOTING_STEPS = 100
QUADRATURE_NODES = 32
COARSE_ANGLES = 24


@attrs.frozen(eq=False)
class Trajectory:
    """
    A sampled geodesic.

    Attributes:
        times (np.ndarray): Increasing sample times.
        positions (np.ndarray): Positions x(t), one row per time.
        velocities (np.ndarray): Velocities ẋ(t), one row per time.
        F_values (np.ndarray): F(x, ẋ) at each sample.
        exited (bool): The integration stopped early on leaving the strongly convex domain.
    """

    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    F_values: np.ndarray
    exited: bool = False

    @property
    def states(self) -> List[Tuple[np.ndarray, np.ndarray]]:
        return list(zip(self.positions, self.velocities))

    def drift(self) -> float:
        """Largest deviation of F from its initial value."""
        return float(np.max(np.abs(self.F_values - self.F_values[0])))

    def to_dataframe(self) -> pd.DataFrame:
        """Table with columns t, x1..xn, F."""
        columns = {"t": self.times}
        for i in range(self.positions.shape[1]):
            columns[f"x{i + 1}"] = self.positions[:, i]
        columns["F"] = self.F_values
        return pd.DataFrame(columns)

    def to_csv(self, path=None, float_format: str = "%.17g") -> Optional[str]:
        """
        Write the trajectory as CSV (header ``t,x1..xn,F``); returns the text when path is None.
        """
        return self.to_dataframe().to_csv(path, index=False, float_format=float_format)


def _rk4_step(metric: FinslerMetric, x: np.ndarray, v: np.ndarray, dt: float, step: float):
    def accel(xx, vv):
        return -2.0 * spray_coefficients(metric, xx, vv, step)

    k1x, k1v = v, accel(x, v)
    k2x, k2v = v + 0.5 * dt * k1v, accel(x + 0.5 * dt * k1x, v + 0.5 * dt * k1v)
    k3x, k3v = v + 0.5 * dt * k2v, accel(x + 0.5 * dt * k2x, v + 0.5 * dt * k2v)
    k4x, k4v = v + dt * k3v, accel(x + dt * k3x, v + dt * k3v)
    return (
        x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
    )


def _integrate(metric, x0, y0, t_end, dt, step, stop=None) -> Trajectory:
    n_steps = max(1, int(round(t_end / dt)))
    dt = t_end / n_steps
    x, v = np.asarray(x0, dtype=float), np.asarray(y0, dtype=float)
    times, xs, vs, fs = [0.0], [x], [v], [metric.norm(x, v)]
    exited = False
    for k in range(1, n_steps + 1):
        try:
            x_next, v_next = _rk4_step(metric, x, v, dt, step)
            if not metric.contains(x_next):
                raise DomainError("geodesic left the strongly convex domain", x_next)
            f_next = metric.norm(x_next, v_next)
        except (DomainError, ConvexityError) as exc:
            logging.info("Truncating geodesic at t = %.6g: %s", times[-1], exc)
            exited = True
            break
        x, v = x_next, v_next
        times.append(k * dt)
        xs.append(x)
        vs.append(v)
        fs.append(f_next)
        if stop is not None and stop(xs, vs):
            break
    return Trajectory(
        times=np.array(times),
        positions=np.array(xs),
        velocities=np.array(vs),
        F_values=np.array(fs),
        exited=exited,
    )


def geodesic_ivp(
    metric: FinslerMetric,
    x0,
    y0,
    t_end: float = 1.0,
    dt: float = DEFAULT_DT,
    step: float = DEFAULT_STEP,
) -> Trajectory:
    """
    Integrate the geodesic with x(0) = x0, ẋ(0) = y0 up to t_end.

    Args:
        metric (FinslerMetric): The metric.
        x0: Initial point inside the strongly convex domain.
        y0: Nonzero initial velocity.
        t_end (float): Final time.
        dt (float): Step size (rounded so that t_end is a whole number of steps).
        step (float): Relative finite-difference step of the spray.

    Returns:
        Trajectory: The sampled geodesic; ``exited`` is set if it was truncated.

    Raises:
        ValidationError: If y0 is zero or dt, t_end are not positive.
        DomainError: If x0 is outside the domain.
    """
    y0 = np.asarray(y0, dtype=float)
    if not np.any(y0):
        raise ValidationError("initial velocity must be nonzero")
    if dt <= 0.0 or t_end <= 0.0:
        raise ValidationError(f"dt and t_end must be positive, got dt={dt}, t_end={t_end}")
    if not metric.contains(np.asarray(x0, dtype=float)):
        raise DomainError("initial point is outside the strongly convex domain", x0)
    return _integrate(metric, x0, y0, t_end, dt, step)


def straight_line_time(metric: FinslerMetric, x_start, x_goal, nodes: int = QUADRATURE_NODES) -> float:
    """
    Travel time ∫₀¹ F(x(s), x_goal − x_start) ds along the chart segment, by Gauss–Legendre quadrature.
    """
    x_start = np.asarray(x_start, dtype=float)
    x_goal = np.asarray(x_goal, dtype=float)
    delta = x_goal - x_start
    s, w = np.polynomial.legendre.leggauss(nodes)
    s = 0.5 * (s + 1.0)
    return float(0.5 * sum(wi * metric.norm(x_start + si * delta, delta) for si, wi in zip(s, w)))


def _unit_direction(angles: Sequence[float]) -> np.ndarray:
    if len(angles) == 1:
        return np.array([math.cos(angles[0]), math.sin(angles[0])])
    theta, phi = angles
    return np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])


def _angles_of(direction: np.ndarray) -> List[float]:
    if direction.shape[0] == 2:
        return [math.atan2(direction[1], direction[0])]
    r = np.linalg.norm(direction)
    return [math.acos(direction[2] / r), math.atan2(direction[1], direction[0])]


class _Shooter:
    """Distance of closest approach to the goal as a function of the launch angles."""

    def __init__(self, metric, x_start, x_goal, t_max, dt, step, budget):
        self.metric = metric
        self.x_start = x_start
        self.x_goal = x_goal
        self.t_max = t_max
        self.dt = dt
        self.step = step
        self.budget = budget
        self.evaluations = 0
        self.best: Tuple[float, float, Optional[np.ndarray]] = (math.inf, math.nan, None)

    def _closest_approach(self, trajectory: Trajectory) -> Tuple[float, float]:
        distances = np.linalg.norm(trajectory.positions - self.x_goal, axis=1)
        k = int(np.argmin(distances))
        if k == 0 or k == len(distances) - 1:
            return float(distances[k]), float(trajectory.times[k])
        lo, hi = k - 1, k + 1
        spline = CubicHermiteSpline(
            trajectory.times[lo : hi + 1], trajectory.positions[lo : hi + 1], trajectory.velocities[lo : hi + 1]
        )
        result = minimize_scalar(
            lambda t: float(np.linalg.norm(spline(t) - self.x_goal)),
            bounds=(trajectory.times[lo], trajectory.times[hi]),
            method="bounded",
            options={"xatol": 1.0e-14},
        )
        return float(result.fun), float(result.x)

    def __call__(self, angles) -> float:
        if self.evaluations >= self.budget:
            return self.best[0]
        self.evaluations += 1
        direction = _unit_direction(np.atleast_1d(angles))
        y0 = direction / self.metric.norm(self.x_start, direction)

        def passed_goal(xs, vs):
            if len(xs) < 3:
                return False
            d = [np.linalg.norm(p - self.x_goal) for p in xs[-3:]]
            return d[1] <= d[0] and d[2] > d[1]

        trajectory = _integrate(self.metric, self.x_start, y0, self.t_max, self.dt, self.step, stop=passed_goal)
        distance, arrival = self._closest_approach(trajectory)
        if distance < self.best[0]:
            self.best = (distance, arrival, direction)
        return distance


def shortest_time(
    metric: FinslerMetric,
    x_start,
    x_goal,
    tol_pos: float = 1.0e-6,
    budget: int = SHOOTING_BUDGET,
    steps: int = SHOOTING_STEPS,
    step: float = DEFAULT_STEP,
) -> Tuple[np.ndarray, float]:
    """
    Time-optimal path between two points by shooting unit-speed geodesics.

    In two dimensions the launch angle is scanned coarsely and then refined by
    golden-section search; in three dimensions Nelder–Mead runs over the
    direction sphere. Each shot stops at its first closest approach to the goal,
    refined by cubic Hermite interpolation between steps.

    Args:
        metric (FinslerMetric): The metric.
        x_start: Start point.
        x_goal: Goal point.
        tol_pos (float): Required distance between the best shot and the goal.
        budget (int): Maximum number of shots.
        steps (int): Integration steps per straight-line travel time.
        step (float): Relative finite-difference step of the spray.

    Returns:
        Tuple[np.ndarray, float]: Unit initial direction (Euclidean norm 1) and the arrival time.

    Raises:
        ValidationError: If the dimension is not 2 or 3, or the points coincide.
        DomainError: If an endpoint lies outside the domain.
        SearchFailureError: If no shot reaches the goal within tol_pos.
    """
    x_start = np.asarray(x_start, dtype=float)
    x_goal = np.asarray(x_goal, dtype=float)
    n = x_start.shape[0]
    if n not in (2, 3):
        raise ValidationError(f"shortest_time supports dimensions 2 and 3, got {n}")
    if np.allclose(x_start, x_goal, rtol=0.0, atol=tol_pos):
        raise ValidationError("start and goal coincide")
    for point in (x_start, x_goal):
        if not metric.contains(point):
            raise DomainError("endpoint is outside the strongly convex domain", point)

    reference = straight_line_time(metric, x_start, x_goal)
    shooter = _Shooter(metric, x_start, x_goal, 3.0 * reference, reference / steps, step, budget)
    straight = _angles_of(x_goal - x_start)

    if n == 2:
        width = 2.0 * math.pi / COARSE_ANGLES
        grid = [straight[0] + k * width for k in range(COARSE_ANGLES)]
        values = [shooter([theta]) for theta in grid]
        center = grid[int(np.argmin(values))]
        try:
            minimize_scalar(
                lambda theta: shooter([theta]),
                bracket=(center - width, center, center + width),
                method="golden",
                options={"xtol": 1.0e-12, "maxiter": budget},
            )
        except ValueError as exc:
            # flat bracket: the coarse minimum is shared with a neighbour
            logging.debug("golden bracket rejected (%s), using bounded search", exc)
            minimize_scalar(
                lambda theta: shooter([theta]),
                bounds=(center - width, center + width),
                method="bounded",
                options={"xatol": 1.0e-12, "maxiter": budget},
            )
    else:
        start = np.array(straight)
        simplex = np.array([start, start + [0.1, 0.0], start + [0.0, 0.1]])
        minimize(
            shooter,
            start,
            method="Nelder-Mead",
            options={"xatol": 1.0e-12, "fatol": 1.0e-13, "maxfev": budget, "initial_simplex": simplex},
        )

    distance, arrival, direction = shooter.best
    logging.info(
        "shortest_time: %d shots, residual %.3e, arrival time %.10f", shooter.evaluations, distance, arrival
    )
    if direction is None or distance > tol_pos:
        raise SearchFailureError("shooting did not reach the goal", best_residual=distance)
    return direction, arrival
