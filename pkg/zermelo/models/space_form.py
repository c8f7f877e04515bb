# models/space_form.py

"""
The three standard Riemannian space forms used as navigation backgrounds.

Curved models share one chart formula with ψ = K/|K| and ρ = 1 + ψ x·x:

    h_ij = (1/|K|) (δ_ij/ρ − ψ x_i x_j/ρ²),   Γᵏ_ij = −ψ (x_i δᵏ_j + x_j δᵏ_i)/ρ.

The sphere uses the projective chart of one hemisphere (``hemisphere_sign``
s = ±1, lift p = (s, x)/√(1 + x·x)); the Klein model is the unit ball with
straight-line geodesics. Models register themselves with
``@register_space_form`` and are built by ``SpaceFormFactory``.

Numerical curvature helpers (Christoffel symbols from an arbitrary metric
function and the lowered Riemann tensor) live here as well, since every
curvature check in the package goes through them.
"""

import logging
from abc import ABC, abstractmethod
from typing import Callable, Dict, Type
import attrs
import numpy as np
from zermelo.errors import DomainError, ValidationError
from zermelo.utils.finite_differences import DEFAULT_STEP, central_fd

KLEIN_BOUNDARY_MARGIN = 1.0e-12

_space_form_registry: Dict[str, Type["SpaceFormModel"]] = {}


def register_space_form(model_class: Type["SpaceFormModel"]) -> Type["SpaceFormModel"]:
    """
    Register a space-form class under its ``kind``.

    Args:
        model_class (Type[SpaceFormModel]): The class to register.

    Returns:
        Type[SpaceFormModel]: The registered class.
    """
    _space_form_registry[model_class.kind] = model_class
    return model_class


def get_space_form(kind: str) -> Type["SpaceFormModel"]:
    """
    Get a space-form class by kind ("sphere", "euclidean" or "klein").
    """
    if kind not in _space_form_registry:
        raise ValueError(f"Space form {kind} is not registered.")
    return _space_form_registry[kind]


@attrs.frozen
class SpaceFormModel(ABC):
    """
    Abstract base class for a space form of dimension ``dim`` and sectional curvature ``curvature``.
    """

    kind = "abstract"

    dim: int = attrs.field(converter=int)
    curvature: float = attrs.field(converter=float)
    hemisphere_sign: int = attrs.field(default=1, converter=int)

    def __attrs_post_init__(self):
        if self.dim < 2:
            raise ValidationError(f"Space-form dimension must be at least 2, got {self.dim}")
        if self.hemisphere_sign not in (1, -1):
            raise ValidationError(f"hemisphere_sign must be +1 or -1, got {self.hemisphere_sign}")
        self._validate_curvature()

    @abstractmethod
    def _validate_curvature(self) -> None:
        """Raise ValidationError if the curvature sign does not match the model."""

    @property
    def psi(self) -> float:
        """Sign of the curvature (0 for the flat model)."""
        return float(np.sign(self.curvature))

    @property
    def is_curved(self) -> bool:
        return self.curvature != 0.0

    def contains(self, x: np.ndarray) -> bool:
        return True

    def check_point(self, x) -> np.ndarray:
        """
        Return x as a float vector of the right dimension, inside the chart.

        Raises:
            ValidationError: If x has the wrong shape.
            DomainError: If x lies outside the chart domain.
        """
        point = np.asarray(x, dtype=float)
        if point.shape != (self.dim,):
            raise ValidationError(f"Expected a point of dimension {self.dim}, got shape {point.shape}")
        if not self.contains(point):
            raise DomainError(f"point outside the {self.kind} chart", point)
        return point

    def rho(self, x: np.ndarray) -> float:
        return 1.0 + self.psi * float(x @ x)

    def metric_at(self, x) -> np.ndarray:
        """
        Evaluate h_ij at a chart point.
        """
        x = self.check_point(x)
        if not self.is_curved:
            return np.eye(self.dim)
        rho = self.rho(x)
        return (np.eye(self.dim) / rho - self.psi * np.outer(x, x) / rho**2) / abs(self.curvature)

    def inverse_metric_at(self, x) -> np.ndarray:
        x = self.check_point(x)
        if not self.is_curved:
            return np.eye(self.dim)
        return self.rho(x) * abs(self.curvature) * (np.eye(self.dim) + self.psi * np.outer(x, x))

    def christoffel_at(self, x) -> np.ndarray:
        """
        Christoffel symbols as an array ``gamma[k, i, j]`` = Γᵏ_ij.
        """
        x = self.check_point(x)
        n = self.dim
        if not self.is_curved:
            return np.zeros((n, n, n))
        eye = np.eye(n)
        gamma = np.einsum("i,kj->kij", x, eye) + np.einsum("j,ki->kij", x, eye)
        return -self.psi * gamma / self.rho(x)

    def riemann_residual(self, x, step: float = DEFAULT_STEP) -> float:
        """
        Frobenius norm of hR_hijk − κ(h_ij h_hk − h_ik h_hj) at x, with hR computed by
        differentiating ``christoffel_at`` numerically.
        """
        x = self.check_point(x)
        if not self.is_curved:
            return 0.0
        h = self.metric_at(x)
        lowered = riemann_tensor(self.metric_at, self.christoffel_at, x, step=step)
        return float(np.linalg.norm(lowered - constant_curvature_tensor(h, self.curvature)))


@register_space_form
@attrs.frozen
class Sphere(SpaceFormModel):
    """
    Round sphere of curvature K > 0 in the projective chart of one hemisphere.
    """

    kind = "sphere"

    def _validate_curvature(self) -> None:
        if self.curvature <= 0.0:
            raise ValidationError(f"Sphere requires K > 0, got {self.curvature}")

    def lift(self, x) -> np.ndarray:
        """Point of the unit sphere in R^(n+1) corresponding to the chart point x."""
        x = self.check_point(x)
        return np.concatenate(([float(self.hemisphere_sign)], x)) / np.sqrt(1.0 + x @ x)


@register_space_form
@attrs.frozen
class Euclidean(SpaceFormModel):
    """
    Flat Euclidean space, K = 0.
    """

    kind = "euclidean"

    def _validate_curvature(self) -> None:
        if self.curvature != 0.0:
            raise ValidationError(f"Euclidean space requires K = 0, got {self.curvature}")


@register_space_form
@attrs.frozen
class Klein(SpaceFormModel):
    """
    Klein model of hyperbolic space of curvature K < 0 on the open unit ball.
    """

    kind = "klein"

    def _validate_curvature(self) -> None:
        if self.curvature >= 0.0:
            raise ValidationError(f"Klein model requires K < 0, got {self.curvature}")

    def contains(self, x: np.ndarray) -> bool:
        return float(x @ x) < 1.0 - KLEIN_BOUNDARY_MARGIN


class SpaceFormFactory:
    """
    Factory class for creating space-form models.
    """

    @staticmethod
    def create_model(kind: str, K: float, n: int, hemisphere_sign: int = 1) -> SpaceFormModel:
        """
        Create a space-form model.

        Args:
            kind (str): "sphere", "euclidean" or "klein".
            K (float): Sectional curvature, whose sign must match kind.
            n (int): Dimension, at least 2.
            hemisphere_sign (int): Chart sign, meaningful for the sphere only.

        Returns:
            SpaceFormModel: The model.

        Raises:
            ValidationError: If kind is unknown or K does not match it.
        """
        try:
            model_class = get_space_form(kind)
        except ValueError as exc:
            logging.error("Unsupported space form: %s", kind)
            raise ValidationError(str(exc)) from exc
        return model_class(dim=n, curvature=K, hemisphere_sign=hemisphere_sign)


def metric_at(model: SpaceFormModel, x) -> np.ndarray:
    return model.metric_at(x)


def christoffel_at(model: SpaceFormModel, x) -> np.ndarray:
    return model.christoffel_at(x)


def riemann_residual(model: SpaceFormModel, x, step: float = DEFAULT_STEP) -> float:
    return model.riemann_residual(x, step=step)


def christoffel_from_metric(
    metric_fn: Callable[[np.ndarray], np.ndarray], x, step: float = DEFAULT_STEP
) -> np.ndarray:
    """
    Christoffel symbols Γᵏ_ij = ½ gᵏˡ(∂_i g_lj + ∂_j g_li − ∂_l g_ij) of an arbitrary metric field.

    Args:
        metric_fn (Callable): Maps a point to the metric matrix there.
        x: The point.
        step (float): Relative finite-difference step.

    Returns:
        np.ndarray: ``gamma[k, i, j]``.
    """
    x = np.asarray(x, dtype=float)
    g = metric_fn(x)
    dg = central_fd(metric_fn, x, order=1, step=step)  # dg[l, j, i] = ∂_i g_lj
    lowered = 0.5 * (
        np.einsum("lji->lij", dg) + np.einsum("lij->lij", dg) - np.einsum("ijl->lij", dg)
    )
    return np.einsum("kl,lij->kij", np.linalg.inv(g), lowered)


def riemann_tensor(
    metric_fn: Callable[[np.ndarray], np.ndarray],
    christoffel_fn: Callable[[np.ndarray], np.ndarray],
    x,
    step: float = DEFAULT_STEP,
) -> np.ndarray:
    """
    Lowered curvature tensor R[h, i, j, k], indexed so that a space of constant
    curvature κ gives κ(g_ij g_hk − g_ik g_hj).

    Args:
        metric_fn (Callable): Maps a point to the metric matrix.
        christoffel_fn (Callable): Maps a point to ``gamma[k, i, j]``.
        x: The point.
        step (float): Relative finite-difference step for ∂Γ.

    Returns:
        np.ndarray: Array of shape (n, n, n, n).
    """
    x = np.asarray(x, dtype=float)
    gamma = christoffel_fn(x)
    d_gamma = central_fd(christoffel_fn, x, order=1, step=step)  # [a, b, c, d] = ∂_d Γ^a_bc
    # R^a_bcd = ∂_c Γ^a_db − ∂_d Γ^a_cb + Γ^a_ce Γ^e_db − Γ^a_de Γ^e_cb
    upper = (
        np.einsum("adbc->abcd", d_gamma)
        - np.einsum("acbd->abcd", d_gamma)
        + np.einsum("ace,edb->abcd", gamma, gamma)
        - np.einsum("ade,ecb->abcd", gamma, gamma)
    )
    lowered = np.einsum("ae,ebcd->abcd", metric_fn(x), upper)
    return np.swapaxes(lowered, 0, 1)


def constant_curvature_tensor(g: np.ndarray, kappa: float) -> np.ndarray:
    """κ(g_ij g_hk − g_ik g_hj) as an array indexed [h, i, j, k]."""
    return kappa * (np.einsum("ij,hk->hijk", g, g) - np.einsum("ik,hj->hijk", g, g))
