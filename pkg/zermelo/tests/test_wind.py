# tests/test_wind.py

import numpy as np
import pytest
from zermelo.errors import DomainError, ValidationError
from zermelo.models.wind import (
    WindSpec,
    chart_point,
    chart_velocity,
    convexity_margins,
    covariant_wind_at,
    derived_tensors_at,
    embedded_wind,
    embedded_wind_norm2,
    homothety_residual,
    push_forward,
    wind_at,
)
from zermelo.tests.utils.model_utils import (
    create_model,
    create_spec,
    random_interior_point,
    random_lorentz,
    random_orthogonal,
    random_skew,
)


def test_spec_validation():
    with pytest.raises(ValidationError):
        create_spec("sphere", Q=np.ones((3, 3)))
    with pytest.raises(ValidationError):
        create_spec("sphere", C=np.zeros(2))
    with pytest.raises(ValidationError):
        create_spec("klein", sigma=1.0)
    spec = create_spec("euclidean", sigma=1.0)
    assert spec.sigma == 1.0


def test_euclidean_wind_formula():
    Q = np.array([[0.0, 1.0], [-1.0, 0.0]])
    spec = create_spec("euclidean", n=2, Q=Q, C=[0.5, 0.0], sigma=2.0)
    np.testing.assert_allclose(wind_at(spec, [1.0, 2.0]), [-1.0 + 2.0 + 0.5, -2.0 - 1.0])


def test_embedding_round_trip(rng):
    for kind in ("sphere", "euclidean", "klein"):
        sigma = 0.7 if kind == "euclidean" else 0.0
        spec = create_spec(kind, Q=random_skew(rng, 3), C=rng.standard_normal(3), sigma=sigma)
        back = WindSpec.from_embedding(spec.model, spec.to_embedding())
        np.testing.assert_allclose(back.Q, spec.Q, atol=1e-14)
        np.testing.assert_allclose(back.C, spec.C, atol=1e-14)
        assert back.sigma == pytest.approx(sigma)


def test_from_embedding_rejects_wrong_algebra():
    model = create_model("klein")
    with pytest.raises(ValidationError):
        WindSpec.from_embedding(model, np.eye(4))


@pytest.mark.parametrize("kind", ["sphere", "euclidean", "klein"])
def test_wind_is_killing(rng, kind):
    spec = create_spec(kind, Q=random_skew(rng, 3, 0.4), C=0.3 * rng.standard_normal(3))
    for _ in range(5):
        x = random_interior_point(rng, 3, radius=0.5)
        assert np.linalg.norm(homothety_residual(spec, x)) < 1e-12


def test_radial_field_is_a_homothety(rng):
    spec = create_spec("euclidean", sigma=-2.0)
    x = random_interior_point(rng, 3)
    assert np.linalg.norm(homothety_residual(spec, x)) < 1e-12
    np.testing.assert_allclose(wind_at(spec, x), x)


@pytest.mark.parametrize("kind", ["sphere", "euclidean", "klein"])
def test_convexity_margin_closed_form(rng, kind):
    sigma = -0.5 if kind == "euclidean" else 0.0
    spec = create_spec(kind, Q=random_skew(rng, 3, 0.3), C=0.2 * rng.standard_normal(3), sigma=sigma)
    for _ in range(5):
        direct, closed = convexity_margins(spec, random_interior_point(rng, 3, radius=0.7))
        assert direct == pytest.approx(closed, abs=1e-12)


def test_curl_of_rotating_tank():
    Q = np.zeros((3, 3))
    Q[0, 1], Q[1, 0] = 1.0, -1.0
    spec = create_spec("euclidean", Q=Q)
    tensors = derived_tensors_at(spec, [0.3, 0.0, 0.0])
    # W♭ = (x2, -x1, 0): curl_ij = ∂_j W_i - ∂_i W_j
    assert tensors.C_ij[0, 1] == pytest.approx(2.0)
    assert tensors.C_ij[1, 0] == pytest.approx(-2.0)
    assert tensors.lam == pytest.approx(1.0 - 0.09)


def test_push_forward_preserves_wind_norm_on_sphere(rng):
    spec = create_spec("sphere", Q=random_skew(rng, 3, 0.3), C=0.2 * rng.standard_normal(3))
    g = random_orthogonal(rng, 4)
    moved = push_forward(spec, g)
    p = spec.model.lift(random_interior_point(rng, 3))
    # the isometry sends p to g p
    assert embedded_wind_norm2(moved, g @ p) == pytest.approx(embedded_wind_norm2(spec, p), abs=1e-12)


def test_push_forward_stays_in_lorentz_algebra(rng):
    spec = create_spec("klein", Q=random_skew(rng, 3, 0.3), C=0.2 * rng.standard_normal(3))
    moved = push_forward(spec, random_lorentz(rng, 3, 0.3))
    assert moved.model.kind == "klein"
    assert np.linalg.norm(moved.Q + moved.Q.T) < 1e-12


def test_embedded_norm_matches_chart_norm(rng):
    spec = create_spec("sphere", K=2.0, Q=random_skew(rng, 3, 0.3), C=0.2 * rng.standard_normal(3))
    x = random_interior_point(rng, 3, radius=0.8)
    p = spec.model.lift(x)
    direct, _ = convexity_margins(spec, x)
    assert 1.0 - embedded_wind_norm2(spec, p) == pytest.approx(direct, abs=1e-12)
    np.testing.assert_allclose(chart_velocity(p, embedded_wind(spec, p)), wind_at(spec, x), atol=1e-12)


def test_chart_point_projection_and_equator():
    x, sign = chart_point(np.array([-0.6, 0.8, 0.0, 0.0]))
    np.testing.assert_allclose(x, [0.8 / 0.6, 0.0, 0.0])
    assert sign == -1
    with pytest.raises(DomainError):
        chart_point(np.array([0.0, 1.0, 0.0, 0.0]))


def test_embedded_norm_requires_unit_vector():
    spec = create_spec("sphere")
    with pytest.raises(ValidationError):
        embedded_wind_norm2(spec, np.ones(4))


@pytest.mark.parametrize("kind,K", [("sphere", 2.0), ("klein", -1.5), ("euclidean", 0.0)])
def test_covariant_wind_lowers_the_index(rng, kind, K):
    n = 3
    sigma = 0.4 if kind == "euclidean" else 0.0
    spec = create_spec(kind, Q=random_skew(rng, n), C=rng.standard_normal(n), sigma=sigma, K=K, n=n)
    x = random_interior_point(rng, n, radius=0.4)
    expected = spec.model.metric_at(x) @ wind_at(spec, x)
    np.testing.assert_allclose(covariant_wind_at(spec, x), expected, atol=1e-12)


def test_from_embedding_rounds_tiny_sigma_to_zero():
    tank = create_spec("euclidean", Q=np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]))
    omega = tank.to_embedding()
    omega[:3, :3] -= 1.0e-17 * np.eye(3)
    assert WindSpec.from_embedding(tank.model, omega).sigma == 0.0
    omega[:3, :3] -= 1.0e-3 * np.eye(3)
    assert WindSpec.from_embedding(tank.model, omega).sigma == pytest.approx(2.0e-3)


def test_hemisphere_charts_describe_one_field(rng):
    spec = create_spec("sphere", Q=random_skew(rng, 3, 0.5), C=rng.standard_normal(3))
    east = spec.model.lift(random_interior_point(rng, 3, radius=0.8))
    for p in (east, -east):
        x, sign = chart_point(p)
        chart_spec = spec.on_chart(sign)
        assert chart_spec.model.hemisphere_sign == sign
        np.testing.assert_allclose(
            chart_velocity(p, embedded_wind(spec, p)), wind_at(chart_spec, x), atol=1e-12
        )
