# models/wind.py

"""
Infinitesimal homotheties of the space forms and their derived tensors.

A WindSpec (σ, Q, C) on a model describes

    Euclidean:  W = −½σx + Qx + C
    Sphere:     W = Qx + C + (x·C)x        (C replaced by s·C on the chart of sign s)
    Klein:      W = Qx + C − (x·C)x

with Q skew. Each field is the image of a constant matrix Ω in the isometry
(or similarity) algebra of the model, see ``WindSpec.to_embedding``; the
classifier works on Ω and ``push_forward`` moves a wind by a group element.
"""

from typing import Tuple
import attrs
import numpy as np
from zermelo.errors import DomainError, ValidationError
from zermelo.models.space_form import Sphere, SpaceFormModel
from zermelo.utils.linalg import TOL_EIG, check_skew, negligible

SKEW_TOL = 1.0e-12


def _as_float_array(value) -> np.ndarray:
    return np.array(value, dtype=float)


@attrs.frozen(eq=False)
class WindSpec:
    """
    Parametric wind (σ, Q, C) on a space-form model.

    Attributes:
        model (SpaceFormModel): The background metric h.
        sigma (float): Homothety constant, L_W h = −σh; nonzero only on Euclidean space.
        Q (np.ndarray): n×n skew matrix.
        C (np.ndarray): n-vector (eastern-chart data on the sphere).
    """

    model: SpaceFormModel
    sigma: float = attrs.field(converter=float)
    Q: np.ndarray = attrs.field(converter=_as_float_array)
    C: np.ndarray = attrs.field(converter=_as_float_array)

    @Q.validator
    def _check_q(self, attribute, value):
        n = self.model.dim
        if value.shape != (n, n):
            raise ValidationError(f"Q must be {n}x{n}, got shape {value.shape}")
        if np.max(np.abs(value + value.T), initial=0.0) > SKEW_TOL:
            raise ValidationError("Q must be skew-symmetric within 1e-12")

    @C.validator
    def _check_c(self, attribute, value):
        if value.shape != (self.model.dim,):
            raise ValidationError(f"C must have length {self.model.dim}, got shape {value.shape}")

    @sigma.validator
    def _check_sigma(self, attribute, value):
        if value != 0.0 and self.model.is_curved:
            raise ValidationError(
                f"sigma must vanish on a curved model ({self.model.kind}), got {value}"
            )

    @property
    def dim(self) -> int:
        return self.model.dim

    @property
    def chart_C(self) -> np.ndarray:
        """C as seen in the chart of the model: −C on the sphere's western chart."""
        if isinstance(self.model, Sphere):
            return self.model.hemisphere_sign * self.C
        return self.C

    def on_chart(self, hemisphere_sign: int) -> "WindSpec":
        """The same global field described on the sphere chart of the given sign."""
        model = attrs.evolve(self.model, hemisphere_sign=hemisphere_sign)
        return WindSpec(model=model, sigma=self.sigma, Q=self.Q, C=self.C)

    def is_zero(self, tol: float = 0.0) -> bool:
        return (
            abs(self.sigma) <= tol
            and np.max(np.abs(self.Q), initial=0.0) <= tol
            and np.max(np.abs(self.C), initial=0.0) <= tol
        )

    def to_embedding(self) -> np.ndarray:
        """
        Constant matrix Ω of the model's algebra whose row action pᵗΩ is the wind.

        Sphere: [[0, Cᵗ], [−C, −Q]] in 𝔬(n+1); Euclidean: [[−½σI − Q, 0], [Cᵗ, 0]]
        acting on (x, 1); Klein: [[0, Cᵗ], [C, −Q]] in 𝔬(1, n).
        """
        n = self.dim
        omega = np.zeros((n + 1, n + 1))
        if self.model.kind == "sphere":
            omega[0, 1:] = self.C
            omega[1:, 0] = -self.C
            omega[1:, 1:] = -self.Q
        elif self.model.kind == "klein":
            omega[0, 1:] = self.C
            omega[1:, 0] = self.C
            omega[1:, 1:] = -self.Q
        else:
            omega[:n, :n] = -0.5 * self.sigma * np.eye(n) - self.Q
            omega[n, :n] = self.C
        return omega

    @classmethod
    def from_embedding(cls, model: SpaceFormModel, omega, tol_eig: float = TOL_EIG) -> "WindSpec":
        """
        Inverse of ``to_embedding``. A similarity rate σ within tol_eig·(1 + ‖Ω‖) of zero
        is set to exactly 0, so rigid motions of a σ = 0 wind stay rigid.

        Raises:
            ValidationError: If omega does not have the block shape of the model's algebra.
        """
        omega = np.asarray(omega, dtype=float)
        n = model.dim
        if omega.shape != (n + 1, n + 1):
            raise ValidationError(f"Expected a {n + 1}x{n + 1} matrix, got shape {omega.shape}")
        scale = 1.0 + np.linalg.norm(omega)
        if model.kind == "sphere":
            check_skew(omega, tol=1.0e-10, name="sphere embedding")
            q = -omega[1:, 1:]
            return cls(model=model, sigma=0.0, Q=0.5 * (q - q.T), C=omega[0, 1:])
        if model.kind == "klein":
            if np.linalg.norm(omega[0, 1:] - omega[1:, 0]) > 1.0e-10 * scale or abs(omega[0, 0]) > 1.0e-10 * scale:
                raise ValidationError("matrix is not in the Lorentz algebra o(1,n)")
            q = -omega[1:, 1:]
            check_skew(q, tol=1.0e-10, name="Lorentz spatial block")
            return cls(model=model, sigma=0.0, Q=0.5 * (q - q.T), C=0.5 * (omega[0, 1:] + omega[1:, 0]))
        if np.linalg.norm(omega[:, n]) > 1.0e-10 * scale:
            raise ValidationError("matrix is not in the affine similarity algebra (last column must vanish)")
        block = omega[:n, :n]
        sigma = -2.0 * np.trace(block) / n
        if negligible(sigma, np.linalg.norm(omega), tol_eig):
            sigma = 0.0
        q = -(block + 0.5 * sigma * np.eye(n))
        check_skew(q, tol=1.0e-10, name="similarity linear part")
        return cls(model=model, sigma=sigma, Q=0.5 * (q - q.T), C=omega[n, :n])


def push_forward(spec: WindSpec, g) -> WindSpec:
    """
    Transport a wind by a group element g of the model's isometry (or similarity) group.

    The transported wind has embedding gΩg⁻¹; on points the isometry acts as pᵗ ↦ pᵗg⁻¹.
    """
    g = np.asarray(g, dtype=float)
    omega = g @ spec.to_embedding() @ np.linalg.inv(g)
    return WindSpec.from_embedding(spec.model, omega)


def wind_at(spec: WindSpec, x) -> np.ndarray:
    """
    Contravariant wind Wⁱ at a chart point.

    Raises:
        DomainError: If x is outside the chart.
    """
    x = spec.model.check_point(x)
    if not spec.model.is_curved:
        return -0.5 * spec.sigma * x + spec.Q @ x + spec.C
    c = spec.chart_C
    return spec.Q @ x + c + spec.model.psi * float(x @ c) * x


def covariant_wind_at(spec: WindSpec, x) -> np.ndarray:
    """
    Covariant wind W_i = h_ij Wʲ; on curved models (Qx + C)/(ρ|K|).
    """
    x = spec.model.check_point(x)
    if not spec.model.is_curved:
        return wind_at(spec, x)
    return (spec.Q @ x + spec.chart_C) / (spec.model.rho(x) * abs(spec.model.curvature))


def wind_jacobian(spec: WindSpec, x) -> np.ndarray:
    """Partial derivatives ``jac[i, j]`` = ∂_j Wⁱ in closed form."""
    x = spec.model.check_point(x)
    n = spec.dim
    if not spec.model.is_curved:
        return -0.5 * spec.sigma * np.eye(n) + spec.Q
    c = spec.chart_C
    return spec.Q + spec.model.psi * (np.outer(x, c) + float(x @ c) * np.eye(n))


def covariant_derivative(spec: WindSpec, x) -> np.ndarray:
    """
    Lowered covariant derivative ``nabla[i, j]`` = W_{i:j} = h_ik(∂_j Wᵏ + Γᵏ_jl Wˡ).
    """
    x = spec.model.check_point(x)
    gamma = spec.model.christoffel_at(x)
    nabla_up = wind_jacobian(spec, x) + np.einsum("kjl,l->kj", gamma, wind_at(spec, x))
    return spec.model.metric_at(x) @ nabla_up


def homothety_residual(spec: WindSpec, x) -> np.ndarray:
    """
    W_{i:j} + W_{j:i} + σh_ij, which vanishes for an infinitesimal homothety.
    """
    nabla = covariant_derivative(spec, x)
    return nabla + nabla.T + spec.sigma * spec.model.metric_at(x)


def convexity_margins(spec: WindSpec, x) -> Tuple[float, float]:
    """
    The margin 1 − h(W, W) computed two ways: directly, and from the closed-form
    case expression (Euclidean: |Qx+C|² + σx·(¼σx − C); curved: (|Qx+C|² + ψ(x·C)²)/(ρ|K|)).

    Returns:
        Tuple[float, float]: (direct, case formula).
    """
    x = spec.model.check_point(x)
    w = wind_at(spec, x)
    direct = 1.0 - float(w @ spec.model.metric_at(x) @ w)
    model = spec.model
    if not model.is_curved:
        rotated = spec.Q @ x + spec.C
        norm2 = rotated @ rotated + spec.sigma * x @ (0.25 * spec.sigma * x - spec.C)
    else:
        c = spec.chart_C
        rotated = spec.Q @ x + c
        norm2 = (rotated @ rotated + model.psi * float(x @ c) ** 2) / (model.rho(x) * abs(model.curvature))
    return direct, 1.0 - float(norm2)


def convexity_margin(spec: WindSpec, x) -> float:
    """
    1 − |W|²_h at x; positive exactly where the navigation metric is strongly convex.

    Raises:
        DomainError: If x is outside the chart.
    """
    direct, _ = convexity_margins(spec, x)
    return direct


@attrs.frozen(eq=False)
class WindDerivedTensors:
    """
    𝒞_ij = W_{i:j} − W_{j:i}, 𝒯_j = Wⁱ𝒞_ij and λ = 1 − h(W, W) at one point.
    """

    C_ij: np.ndarray
    T_j: np.ndarray
    lam: float


def derived_tensors_at(spec: WindSpec, x) -> WindDerivedTensors:
    nabla = covariant_derivative(spec, x)
    curl = nabla - nabla.T
    w = wind_at(spec, x)
    return WindDerivedTensors(
        C_ij=curl,
        T_j=w @ curl,
        lam=convexity_margin(spec, x),
    )


def embedded_wind_norm2(spec: WindSpec, p) -> float:
    """
    |W|² at a point p of the unit sphere in R^(n+1) (equator included): |pᵗΩ|²/K.

    Raises:
        ValidationError: If the model is not a sphere or p is not a unit vector.
    """
    if spec.model.kind != "sphere":
        raise ValidationError("embedded norms are defined for sphere winds only")
    p = np.asarray(p, dtype=float)
    if p.shape != (spec.dim + 1,) or abs(p @ p - 1.0) > 1.0e-9:
        raise ValidationError("p must be a unit vector in R^(n+1)")
    velocity = p @ spec.to_embedding()
    return float(velocity @ velocity) / spec.model.curvature


def embedded_wind(spec: WindSpec, p) -> np.ndarray:
    """Velocity pᵗΩ of the sphere wind at p, as a vector of R^(n+1)."""
    return np.asarray(p, dtype=float) @ spec.to_embedding()


def chart_point(p) -> Tuple[np.ndarray, int]:
    """
    Project a unit vector p of R^(n+1) to (chart point, hemisphere sign).

    Raises:
        DomainError: If p lies on the equator p₀ = 0, which no chart covers.
    """
    p = np.asarray(p, dtype=float)
    if p[0] == 0.0:
        raise DomainError("equator points are not covered by a hemisphere chart", p)
    return p[1:] / abs(p[0]), int(np.sign(p[0]))


def chart_velocity(p, velocity) -> np.ndarray:
    """Chart components of an ambient tangent vector at p (derivative of p ↦ p[1:]/|p₀|)."""
    p = np.asarray(p, dtype=float)
    velocity = np.asarray(velocity, dtype=float)
    p0 = p[0]
    return np.sign(p0) * (velocity[1:] / p0 - p[1:] * velocity[0] / p0**2)
