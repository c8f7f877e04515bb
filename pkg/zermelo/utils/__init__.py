# zermelo/utils/__init__.py
"""
Numerical utilities for zermelo. The JSON helpers in ``json_utils`` depend on
the models and are imported from their module directly.
"""

from .jets import Jet2, jet2_eval
from .finite_differences import central_fd
from .linalg import check_skew, check_symmetric, skew_eigen, spd_check
