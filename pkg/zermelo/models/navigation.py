# models/navigation.py

"""
The Zermelo navigation transform between navigation data (h, W) and Randers
data (a, b), pointwise, plus the navigation metric of a WindSpec.

With λ = 1 − h(W, W) and W_i = h_ij Wʲ:

    a_ij = h_ij/λ + W_i W_j/λ²,   b_i = −W_i/λ,
    F(y) = (√(h(W,y)² + |y|²λ) − h(W,y))/λ = √(a(y,y)) + b(y),

and conversely, with ε = 1 − ‖b‖²_a,

    h_ij = ε(a_ij − b_i b_j),   Wⁱ = −bⁱ/ε.
"""

from typing import Tuple, Union
import attrs
import numpy as np
from zermelo.errors import ConvexityError
from zermelo.models.finsler import RandersMetric, RiemannianMetric
from zermelo.models.wind import WindSpec, convexity_margin, wind_at


@attrs.frozen(eq=False)
class RandersData:
    """
    Pointwise Randers data: the Riemannian metric a, the 1-form b and ‖b‖²_a.
    """

    a: np.ndarray
    b: np.ndarray
    bnorm2: float

    @classmethod
    def from_pair(cls, a, b) -> "RandersData":
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return cls(a=a, b=b, bnorm2=float(b @ np.linalg.solve(a, b)))

    @property
    def b_sharp(self) -> np.ndarray:
        return np.linalg.solve(self.a, self.b)


def perturb(h, W) -> RandersData:
    """
    Randers data of the navigation problem (h, W).

    Args:
        h: Positive definite metric matrix at the point.
        W: Contravariant wind at the point.

    Returns:
        RandersData: (a, b) with ‖b‖²_a = h(W, W).

    Raises:
        ConvexityError: If h(W, W) ≥ 1.
    """
    h = np.asarray(h, dtype=float)
    W = np.asarray(W, dtype=float)
    w_flat = h @ W
    lam = 1.0 - float(W @ w_flat)
    if lam <= 0.0:
        raise ConvexityError("wind is not slower than the ship: h(W, W) >= 1", margin=lam)
    a = h / lam + np.outer(w_flat, w_flat) / lam**2
    return RandersData.from_pair(a, -w_flat / lam)


def unperturb(data: RandersData) -> Tuple[np.ndarray, np.ndarray]:
    """
    Navigation data (h, W) of Randers data (a, b).

    Raises:
        ConvexityError: If ‖b‖_a ≥ 1.
    """
    a = np.asarray(data.a, dtype=float)
    b = np.asarray(data.b, dtype=float)
    b_sharp = np.linalg.solve(a, b)
    eps = 1.0 - float(b @ b_sharp)
    if eps <= 0.0:
        raise ConvexityError("Randers 1-form is too long: ||b|| >= 1", margin=eps)
    return eps * (a - np.outer(b, b)), -b_sharp / eps


def randers_norm(data: Union[RandersData, Tuple[np.ndarray, np.ndarray]], y) -> float:
    """
    F(y) from Randers data, or from navigation data (h, W) via the navigation formula.
    """
    y = np.asarray(y, dtype=float)
    if isinstance(data, RandersData):
        return float(np.sqrt(y @ data.a @ y) + data.b @ y)
    h, W = (np.asarray(part, dtype=float) for part in data)
    lam = 1.0 - float(W @ h @ W)
    if lam <= 0.0:
        raise ConvexityError("wind is not slower than the ship: h(W, W) >= 1", margin=lam)
    hwy = float(W @ h @ y)
    return (np.sqrt(hwy**2 + float(y @ h @ y) * lam) - hwy) / lam


class NavigationMetric(RandersMetric):
    """
    The Randers metric solving Zermelo's problem on a space form under a WindSpec.
    """

    def __init__(self, spec: WindSpec):
        self.spec = spec
        super().__init__(self.randers_data, spec.dim, contains_fn=self.contains)

    def randers_data(self, x) -> RandersData:
        return perturb(self.spec.model.metric_at(x), wind_at(self.spec, x))

    def navigation_data(self, x) -> Tuple[np.ndarray, np.ndarray]:
        """(h, W) recovered from the Randers data at x."""
        return unperturb(self.randers_data(x))

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        if not self.spec.model.contains(x):
            return False
        return convexity_margin(self.spec, x) > 0.0

    @property
    def background(self) -> RiemannianMetric:
        """The Riemannian metric h of the space form."""
        model = self.spec.model
        return RiemannianMetric(model.metric_at, model.dim, contains_fn=model.contains)

    @property
    def randers_riemannian(self) -> RiemannianMetric:
        """The Riemannian part a of the Randers metric."""
        return RiemannianMetric(lambda x: self.randers_data(x).a, self.dim, contains_fn=self.contains)

    def background_metric(self, x) -> np.ndarray:
        return self.spec.model.metric_at(x)
