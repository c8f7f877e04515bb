# zermelo/models/__init__.py
"""
Models for zermelo.
"""

from .space_form import SpaceFormFactory, SpaceFormModel, Sphere, Euclidean, Klein
from .wind import WindSpec, push_forward, wind_at, convexity_margin
from .finsler import FinslerMetric, RiemannianMetric, RandersMetric, flag_curvature
from .navigation import NavigationMetric, RandersData, perturb, unperturb, randers_norm
from .normal_forms import (
    BlockNormalForm,
    skew_normal_form,
    euclidean_normal_form,
    lorentz_classify,
    lorentz_normal_form,
)
from .classifier import ModuliPoint, classify, cfc_residuals, moduli_dimension, verify_spec
from .geodesics import Trajectory, geodesic_ivp, shortest_time, straight_line_time
from .catalog import Example, get_example, list_examples, register_example
