# utils/finite_differences.py

"""
Central finite differences with one level of Richardson extrapolation.

The step for coordinate i is ``step * (1 + |x_i|)``. First and second
derivatives use the standard central stencils, whose leading error is O(h²);
combining h and h/2 as (4 D(h/2) - D(h)) / 3 cancels it, leaving O(h⁴).

Functions may return scalars or arrays; derivative indices are appended last,
so for f: Rᵏ -> R^(p, q) the first derivative has shape (p, q, k).
"""

from typing import Callable, Sequence
import numpy as np
from zermelo.errors import DomainError

DEFAULT_STEP = 1.0e-4


def _evaluate(f: Callable, z: np.ndarray) -> np.ndarray:
    try:
        return np.asarray(f(z), dtype=float)
    except DomainError as exc:
        raise DomainError(f"finite-difference stencil left the domain ({exc})", z) from exc


def _first(f: Callable, x: np.ndarray, h: np.ndarray) -> np.ndarray:
    columns = []
    for i in range(x.shape[0]):
        e = np.zeros_like(x)
        e[i] = h[i]
        columns.append((_evaluate(f, x + e) - _evaluate(f, x - e)) / (2.0 * h[i]))
    return np.stack(columns, axis=-1)


def _second(f: Callable, x: np.ndarray, h: np.ndarray) -> np.ndarray:
    k = x.shape[0]
    center = _evaluate(f, x)
    out = np.zeros(center.shape + (k, k))
    for i in range(k):
        ei = np.zeros_like(x)
        ei[i] = h[i]
        out[..., i, i] = (_evaluate(f, x + ei) - 2.0 * center + _evaluate(f, x - ei)) / h[i] ** 2
        for j in range(i + 1, k):
            ej = np.zeros_like(x)
            ej[j] = h[j]
            mixed = (
                _evaluate(f, x + ei + ej)
                - _evaluate(f, x + ei - ej)
                - _evaluate(f, x - ei + ej)
                + _evaluate(f, x - ei - ej)
            ) / (4.0 * h[i] * h[j])
            out[..., i, j] = mixed
            out[..., j, i] = mixed
    return out


def central_fd(
    f: Callable[[np.ndarray], np.ndarray],
    point: Sequence[float],
    order: int = 1,
    step: float = DEFAULT_STEP,
) -> np.ndarray:
    """
    Differentiate f at point by Richardson-extrapolated central differences.

    Args:
        f (Callable): Scalar- or array-valued function of a real vector.
        point (Sequence[float]): Where to differentiate.
        order (int): 1 for the gradient/Jacobian, 2 for the Hessian.
        step (float): Relative step size.

    Returns:
        np.ndarray: Derivative array with the derivative indices last.

    Raises:
        ValueError: If order is not 1 or 2 or step is not positive.
        DomainError: If a stencil point lies outside f's domain.
    """
    if step <= 0.0:
        raise ValueError(f"Finite-difference step must be positive, got {step}.")
    x = np.atleast_1d(np.asarray(point, dtype=float))
    h = step * (1.0 + np.abs(x))
    if order == 1:
        stencil = _first
    elif order == 2:
        stencil = _second
    else:
        raise ValueError(f"Finite-difference order {order} is not supported.")
    return (4.0 * stencil(f, x, 0.5 * h) - stencil(f, x, h)) / 3.0
