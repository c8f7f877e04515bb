# models/catalog.py

"""
Registry of worked constant-flag-curvature examples.

Each example is a builder function returning a WindSpec, registered with its
expected flag curvature and a sample region where the navigation metric is
strongly convex:

@register_example("3.2.1", expected_K=0.0, description="...")
def rotating_tank(n: int = 3) -> WindSpec:
    ...

The ids follow the usual numbering of these fixtures (spheres 3.1.x, Euclidean
space 3.2.x, the Klein model 3.3.x); "zero-wind" is the Riemannian round sphere.
"""

import math
from typing import Callable, Dict, List, Optional, Tuple
import attrs
import numpy as np
from zermelo.errors import ValidationError
from zermelo.models.normal_forms import J
from zermelo.models.space_form import SpaceFormFactory
from zermelo.models.wind import WindSpec


@attrs.frozen
class Example:
    """
    A registered example.

    Attributes:
        example_id (str): Registry key.
        builder (Callable[..., WindSpec]): Builds the wind; keyword arguments are the free parameters.
        expected_K (float): Flag curvature at the builder's default parameters.
        description (str): One-line description.
        sample_center (Optional[Tuple[float, ...]]): Center of the verification region (origin if None).
        sample_radius (float): Radius of the verification region.
    """

    example_id: str
    builder: Callable[..., WindSpec]
    expected_K: float
    description: str
    sample_center: Optional[Tuple[float, ...]] = None
    sample_radius: float = 0.6

    def build(self, **params) -> WindSpec:
        return self.builder(**params)


_example_registry: Dict[str, Example] = {}


def register_example(
    example_id: str,
    expected_K: float,
    description: str = "",
    sample_center: Optional[Tuple[float, ...]] = None,
    sample_radius: float = 0.6,
) -> Callable[[Callable[..., WindSpec]], Callable[..., WindSpec]]:
    """
    Decorator registering a WindSpec builder under example_id.

    Args:
        example_id (str): The id to register under.
        expected_K (float): Flag curvature at the default parameters.
        description (str): One-line description.
        sample_center (Optional[Tuple[float, ...]]): Center of the verification region.
        sample_radius (float): Radius of the verification region.

    Returns:
        Callable: Decorator returning the builder unchanged.
    """

    def decorator(builder: Callable[..., WindSpec]) -> Callable[..., WindSpec]:
        _example_registry[example_id] = Example(
            example_id=example_id,
            builder=builder,
            expected_K=float(expected_K),
            description=description or (builder.__doc__ or "").strip().splitlines()[0],
            sample_center=sample_center,
            sample_radius=sample_radius,
        )
        return builder

    return decorator


def get_example(example_id: str) -> Example:
    """
    Get a registered example by id.

    Raises:
        ValueError: If no example is registered under example_id.
    """
    if example_id not in _example_registry:
        raise ValueError(f"Example {example_id} is not registered.")
    return _example_registry[example_id]


def list_examples() -> List[str]:
    return sorted(_example_registry)


def _rotation(n: int, offset: int, rate: float) -> np.ndarray:
    if n < offset + 2:
        raise ValidationError(f"a rotation in coordinates {offset},{offset + 1} needs n >= {offset + 2}, got {n}")
    q = np.zeros((n, n))
    q[offset : offset + 2, offset : offset + 2] = rate * J
    return q


def _vector(n: int, head: Tuple[float, ...]) -> np.ndarray:
    c = np.zeros(n)
    c[: len(head)] = head
    return c


@register_example("zero-wind", expected_K=1.0, description="Round unit sphere without wind")
def zero_wind(K: float = 1.0, n: int = 3) -> WindSpec:
    model = SpaceFormFactory.create_model("sphere", K, n)
    return WindSpec(model=model, sigma=0.0, Q=np.zeros((n, n)), C=np.zeros(n))


@register_example("3.1.1", expected_K=1.0, description="Unit sphere rotated about an axis at rate tau")
def rotating_sphere(tau: float = 0.5, n: int = 3) -> WindSpec:
    model = SpaceFormFactory.create_model("sphere", 1.0, n)
    return WindSpec(model=model, sigma=0.0, Q=_rotation(n, 0, tau), C=np.zeros(n))


@register_example(
    "3.1.2", expected_K=2.0, description="Sphere of curvature K > 1 under a Hopf-type Killing field"
)
def hopf_sphere(K: float = 2.0) -> WindSpec:
    if K <= 1.0:
        raise ValidationError(f"this family needs K > 1, got {K}")
    rate = math.sqrt(K - 1.0)
    model = SpaceFormFactory.create_model("sphere", K, 3)
    return WindSpec(model=model, sigma=0.0, Q=_rotation(3, 1, rate), C=_vector(3, (-rate,)))


@register_example("3.2.1", expected_K=0.0, description="Rotating tank: Euclidean space spun about an axis")
def rotating_tank(n: int = 3) -> WindSpec:
    model = SpaceFormFactory.create_model("euclidean", 0.0, n)
    return WindSpec(model=model, sigma=0.0, Q=_rotation(n, 0, 1.0), C=np.zeros(n))


@register_example("3.2.2", expected_K=-0.25, description="Euclidean space under the radial homothety W = tau x")
def radial_homothety(tau: float = -1.0, n: int = 3) -> WindSpec:
    model = SpaceFormFactory.create_model("euclidean", 0.0, n)
    return WindSpec(model=model, sigma=-2.0 * tau, Q=np.zeros((n, n)), C=np.zeros(n))


@register_example("3.2.3", expected_K=0.0, description="Constant wind on Euclidean space (Minkowski metric)")
def constant_wind(p: float = 0.3, q: float = 0.2, r: float = 0.1) -> WindSpec:
    model = SpaceFormFactory.create_model("euclidean", 0.0, 3)
    return WindSpec(model=model, sigma=0.0, Q=np.zeros((3, 3)), C=np.array([p, q, r]))


@register_example("3.3.1", expected_K=-1.0, description="Klein model rotated about an axis")
def rotating_klein(n: int = 3) -> WindSpec:
    model = SpaceFormFactory.create_model("klein", -1.0, n)
    return WindSpec(model=model, sigma=0.0, Q=_rotation(n, 0, 1.0), C=np.zeros(n))


@register_example("3.3.2", expected_K=-1.0, description="Klein model under a boost combined with a rotation")
def boosted_klein(tau: float = 0.3) -> WindSpec:
    model = SpaceFormFactory.create_model("klein", -1.0, 3)
    return WindSpec(model=model, sigma=0.0, Q=_rotation(3, 1, tau), C=_vector(3, (tau,)))


@register_example(
    "3.3.3",
    expected_K=-1.0,
    description="Klein model under a parabolic Killing field",
    sample_center=(0.0, -0.5, 0.0),
    sample_radius=0.2,
)
def parabolic_klein() -> WindSpec:
    model = SpaceFormFactory.create_model("klein", -1.0, 3)
    return WindSpec(model=model, sigma=0.0, Q=_rotation(3, 0, 1.0), C=_vector(3, (1.0,)))
