# models/finsler.py

"""
Generic numerical Finsler machinery.

A FinslerMetric only has to evaluate F²(x, y) with y given as a list whose
entries may be jets. From that single method this module derives

  - the fundamental tensor g_ij = ½ (F²)_{yⁱyʲ} (jets),
  - the spray coefficients Gⁱ = ¼ gⁱˡ [(F²)_{xᵏyˡ} yᵏ − (F²)_{xˡ}]
    (jets in y, finite differences in x; Randers metrics differentiate
    α + β in y in closed form),
  - the spray curvature Kⁱ_j and the flag curvature
    K(x, y, V) = g(V, K·V) / (g(y,y) g(V,V) − g(y,V)²),
    with finite differences taken over the spray coefficients.

The sign of the spray curvature is the one for which the unit round sphere
has flag curvature +1.
"""

import logging
from abc import ABC, abstractmethod
from typing import Callable, List, Optional, Sequence
import attrs
import numpy as np
from zermelo.errors import ConvexityError, FlagError
from zermelo.models.wind import WindSpec, covariant_wind_at, derived_tensors_at
from zermelo.utils.finite_differences import DEFAULT_STEP, central_fd
from zermelo.utils.jets import jet2_eval, linear_form, quadratic_form, sqrt

SPRAY_STEP = 5.0e-3
FLAG_DEGENERACY_TOL = 1.0e-10


class FinslerMetric(ABC):
    """
    Abstract base class for a Finsler metric on an open subset of Rⁿ.
    """

    def __init__(self, dim: int):
        self.dim = dim

    @abstractmethod
    def squared_norm(self, x: np.ndarray, y: Sequence):
        """
        F²(x, y). The entries of y may be Jet2 objects; the result is then a Jet2.
        """

    def contains(self, x: np.ndarray) -> bool:
        """Whether x lies in the domain where the metric is defined and strongly convex."""
        return True

    def norm(self, x, y) -> float:
        return float(sqrt(self.squared_norm(np.asarray(x, dtype=float), np.asarray(y, dtype=float))))

    def spray(self, x: np.ndarray, y: np.ndarray, step: float = DEFAULT_STEP) -> np.ndarray:
        """Spray coefficients Gⁱ(x, y), from jets of F² unless a subclass knows better."""
        return jet_spray(self, x, y, step)

    def background_metric(self, x) -> np.ndarray:
        """Riemannian metric used to draw random flags; the fundamental tensor at a fixed y by default."""
        e = np.zeros(self.dim)
        e[0] = 1.0
        return fundamental_tensor(self, x, e)


class RiemannianMetric(FinslerMetric):
    """
    F = √(a(y, y)) for a metric field a(x).
    """

    def __init__(self, metric_fn: Callable[[np.ndarray], np.ndarray], dim: int, contains_fn=None):
        super().__init__(dim)
        self.metric_fn = metric_fn
        self._contains_fn = contains_fn

    def squared_norm(self, x, y):
        return quadratic_form(self.metric_fn(np.asarray(x, dtype=float)), y)

    def contains(self, x) -> bool:
        return True if self._contains_fn is None else bool(self._contains_fn(x))

    def background_metric(self, x) -> np.ndarray:
        return self.metric_fn(np.asarray(x, dtype=float))


class RandersMetric(FinslerMetric):
    """
    F = √(a(y, y)) + b(y) for a field of Randers data (anything with ``a`` and ``b`` attributes).
    """

    def __init__(self, data_fn: Callable, dim: int, contains_fn=None):
        super().__init__(dim)
        self.data_fn = data_fn
        self._contains_fn = contains_fn

    def squared_norm(self, x, y):
        data = self.data_fn(np.asarray(x, dtype=float))
        value = sqrt(quadratic_form(data.a, y)) + linear_form(data.b, y)
        return value * value

    def contains(self, x) -> bool:
        return True if self._contains_fn is None else bool(self._contains_fn(x))

    def background_metric(self, x) -> np.ndarray:
        return self.data_fn(np.asarray(x, dtype=float)).a

    def _packed_data(self, x: np.ndarray) -> np.ndarray:
        data = self.data_fn(x)
        return np.concatenate((np.ravel(data.a), data.b))

    def spray(self, x: np.ndarray, y: np.ndarray, step: float = DEFAULT_STEP) -> np.ndarray:
        """
        Closed-form y-derivatives of F = α + β; only ∂a and ∂b are taken numerically.

        Raises:
            ConvexityError: If the fundamental tensor is singular at (x, y).
        """
        n = self.dim
        data = self.data_fn(x)
        a, b = data.a, data.b
        d = central_fd(self._packed_data, x, order=1, step=step)
        da = d[: n * n].reshape(n, n, n)  # [i, j, k] = ∂_k a_ij
        db = d[n * n :]  # [i, k] = ∂_k b_i

        ay = a @ y
        alpha = float(np.sqrt(y @ ay))
        F = alpha + float(b @ y)
        ell = ay / alpha
        F_y = ell + b
        d_alpha = np.einsum("ijk,i,j->k", da, y, y) / (2.0 * alpha)
        d_F = d_alpha + y @ db
        d_F_y = np.einsum("ljk,j->lk", da, y) / alpha - np.outer(ay, d_alpha) / alpha**2 + db
        mixed = 2.0 * (np.outer(F_y, d_F) + F * d_F_y)  # [l, k] = ∂_k (F²)_{yˡ}
        rhs = mixed @ y - 2.0 * F * d_F
        g = (F / alpha) * (a - np.outer(ell, ell)) + np.outer(F_y, F_y)
        try:
            return 0.25 * np.linalg.solve(g, rhs)
        except np.linalg.LinAlgError as exc:
            raise ConvexityError("fundamental tensor is singular") from exc


@attrs.frozen(eq=False)
class FinslerPoint:
    """
    A point (x, y) of the slit tangent bundle together with the metric it refers to.
    """

    x: np.ndarray = attrs.field(converter=lambda v: np.asarray(v, dtype=float))
    y: np.ndarray = attrs.field(converter=lambda v: np.asarray(v, dtype=float))
    F: FinslerMetric = attrs.field(repr=False)

    @y.validator
    def _check_y(self, attribute, value):
        if not np.any(value):
            raise FlagError("flagpole y must be nonzero")

    @property
    def norm(self) -> float:
        return self.F.norm(self.x, self.y)


@attrs.frozen(eq=False)
class FlagSample:
    """
    A flag (y, V) at x and its flag curvature.
    """

    x: np.ndarray
    y: np.ndarray
    V: np.ndarray
    K_value: float


def fundamental_tensor(metric: FinslerMetric, x, y) -> np.ndarray:
    """
    g_ij = ½ (F²)_{yⁱyʲ} at (x, y).

    Raises:
        DomainError: Propagated when F cannot be evaluated.
    """
    x = np.asarray(x, dtype=float)
    jet = jet2_eval(lambda yy: metric.squared_norm(x, yy), y)
    return 0.5 * jet.hess


def _packed_derivatives(metric: FinslerMetric, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    jet = jet2_eval(lambda yy: metric.squared_norm(x, yy), y)
    return np.concatenate(([jet.value], jet.grad))


def spray_coefficients(metric: FinslerMetric, x, y, step: float = DEFAULT_STEP) -> np.ndarray:
    """
    Geodesic spray coefficients Gⁱ(x, y); geodesics satisfy ẍⁱ + 2Gⁱ(x, ẋ) = 0.
    """
    return metric.spray(np.asarray(x, dtype=float), np.asarray(y, dtype=float), step)


def jet_spray(metric: FinslerMetric, x, y, step: float = DEFAULT_STEP) -> np.ndarray:
    """
    Spray coefficients Gⁱ = ¼ gⁱˡ [(F²)_{xᵏyˡ} yᵏ − (F²)_{xˡ}] from jets of F².

    Args:
        metric (FinslerMetric): The metric.
        x: Base point.
        y: Nonzero tangent vector.
        step (float): Relative finite-difference step in x.

    Returns:
        np.ndarray: The vector Gⁱ.

    Raises:
        ConvexityError: If the fundamental tensor is singular at (x, y).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    # d[0, l] = ∂_l F², d[1 + l, k] = ∂_k (F²)_{yˡ}
    d = central_fd(lambda xx: _packed_derivatives(metric, xx, y), x, order=1, step=step)
    rhs = d[1:, :] @ y - d[0, :]
    g = fundamental_tensor(metric, x, y)
    try:
        return 0.25 * np.linalg.solve(g, rhs)
    except np.linalg.LinAlgError as exc:
        raise ConvexityError("fundamental tensor is singular") from exc


def spray_curvature(
    metric: FinslerMetric,
    x,
    y,
    step: float = DEFAULT_STEP,
    spray_step: float = SPRAY_STEP,
) -> np.ndarray:
    """
    Spray (Riemann) curvature Kⁱ_j at (x, y):

        Kⁱ_j = 2∂_{xʲ}Gⁱ − yˢ ∂²Gⁱ/∂xˢ∂yʲ + 2Gˢ ∂²Gⁱ/∂yˢ∂yʲ − (∂Gⁱ/∂yˢ)(∂Gˢ/∂yʲ).

    The mixed term is evaluated as ∂_{yʲ}(yˢ∂_{xˢ}Gⁱ) − ∂_{xʲ}Gⁱ. Derivatives of G use
    the coarser ``spray_step`` since G itself carries finite-difference noise.

    Returns:
        np.ndarray: ``K[i, j]``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)

    def spray_in_x(xx):
        return spray_coefficients(metric, xx, y, step)

    def spray_in_y(yy):
        return spray_coefficients(metric, x, yy, step)

    def transported(yy):
        along = lambda t: spray_coefficients(metric, x + t[0] * yy, yy, step)
        return central_fd(along, [0.0], order=1, step=spray_step)[:, 0]

    G = spray_in_y(y)
    dG_dx = central_fd(spray_in_x, x, order=1, step=spray_step)
    dG_dy = central_fd(spray_in_y, y, order=1, step=spray_step)
    ddG_dydy = central_fd(spray_in_y, y, order=2, step=spray_step)
    mixed = central_fd(transported, y, order=1, step=spray_step) - dG_dx
    return (
        2.0 * dG_dx
        - mixed
        + 2.0 * np.einsum("s,isj->ij", G, ddG_dydy)
        - dG_dy @ dG_dy
    )


def flag_curvature(
    metric: FinslerMetric,
    x,
    y,
    V,
    step: float = DEFAULT_STEP,
    spray_step: float = SPRAY_STEP,
) -> float:
    """
    Flag curvature of the flag with flagpole y and transverse edge V at x.

    y is rescaled to unit length first; the value does not depend on the scale.

    Raises:
        FlagError: If y is zero or V is (numerically) parallel to y.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    V = np.asarray(V, dtype=float)
    y_norm = np.linalg.norm(y)
    if y_norm == 0.0:
        raise FlagError("flagpole y must be nonzero")
    y = y / y_norm
    g = fundamental_tensor(metric, x, y)
    gyy, gvv, gyv = y @ g @ y, V @ g @ V, y @ g @ V
    gram = gyy * gvv - gyv**2
    if gram < FLAG_DEGENERACY_TOL * gyy * gvv:
        logging.warning("Rejecting degenerate flag, Gram determinant %.3e", gram)
        raise FlagError(f"degenerate flag: Gram determinant {gram:.3e} is too small")
    curvature = spray_curvature(metric, x, y, step, spray_step)
    return float(V @ g @ (curvature @ V) / gram)


def _random_unit(rng: np.random.Generator, metric_matrix: np.ndarray) -> np.ndarray:
    v = rng.standard_normal(metric_matrix.shape[0])
    return v / np.sqrt(v @ metric_matrix @ v)


def random_flag(
    rng: np.random.Generator, metric_matrix: np.ndarray, max_cosine: float = 0.95
):
    """
    Draw (y, V) uniformly on the unit sphere of ``metric_matrix``, rejecting near-parallel pairs.
    """
    while True:
        y = _random_unit(rng, metric_matrix)
        V = _random_unit(rng, metric_matrix)
        if abs(y @ metric_matrix @ V) <= max_cosine:
            return y, V


def sample_flags(
    metric: FinslerMetric,
    points: Sequence[np.ndarray],
    rng: np.random.Generator,
    step: float = DEFAULT_STEP,
    spray_step: float = SPRAY_STEP,
) -> List[FlagSample]:
    """
    Evaluate the flag curvature of one random flag at each point.
    """
    samples = []
    for x in points:
        y, V = random_flag(rng, metric.background_metric(x))
        value = flag_curvature(metric, x, y, V, step, spray_step)
        logging.debug("flag curvature at %s: %.10f", np.round(x, 4), value)
        samples.append(FlagSample(x=np.asarray(x, dtype=float), y=y, V=V, K_value=value))
    return samples


def zeta_at(spec: WindSpec, x, y) -> np.ndarray:
    """
    Difference ζⁱ = aGⁱ − hGⁱ between the sprays of the Riemannian metrics a and h:

        ζⁱ = yⁱ(𝒯₀ − σW₀)/(2λ) − 𝒯ⁱ(h₀₀/(4λ) + W₀W₀/(2λ²)) + 𝒞ⁱ₀ W₀/(2λ),

    where a subscript 0 means contraction with y and indices move with h.

    Raises:
        DomainError: If x is outside the chart.
    """
    model = spec.model
    x = model.check_point(x)
    y = np.asarray(y, dtype=float)
    tensors = derived_tensors_at(spec, x)
    lam = tensors.lam
    h = model.metric_at(x)
    h_inv = model.inverse_metric_at(x)
    w0 = float(covariant_wind_at(spec, x) @ y)
    t0 = float(tensors.T_j @ y)
    h00 = float(y @ h @ y)
    t_up = h_inv @ tensors.T_j
    c_up0 = h_inv @ (tensors.C_ij @ y)
    return (
        y * (t0 - spec.sigma * w0) / (2.0 * lam)
        - t_up * (h00 / (4.0 * lam) + w0 * w0 / (2.0 * lam**2))
        + c_up0 * w0 / (2.0 * lam)
    )


def flag_statistics(samples: Sequence[FlagSample]) -> Optional[tuple]:
    """Mean and sample standard deviation of the flag curvatures, or None without samples."""
    if not samples:
        return None
    values = np.array([s.K_value for s in samples])
    std = float(values.std(ddof=1)) if values.size > 1 else 0.0
    return float(values.mean()), std


