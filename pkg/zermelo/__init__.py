# zermelo/__init__.py

"""
zermelo is a Python package for Zermelo navigation on the standard space forms
and for the Randers metrics it produces. It converts navigation data into
Randers data, computes flag curvature numerically, classifies constant flag
curvature Randers metrics through Lie-algebra normal forms, and integrates
their geodesics, which are the paths of shortest travel time.
"""

from .config import ConfigManager
from .errors import (
    ZermeloError,
    ValidationError,
    DomainError,
    ConvexityError,
    ClassificationError,
    DegeneracyError,
    FlagError,
    SearchFailureError,
    VerificationFailure,
)
from .models import *
