# utils/jets.py

"""
Second-order forward-mode jets.

A Jet2 carries a value together with its gradient and Hessian with respect to
a fixed set of active variables. Arithmetic propagates both derivative orders
exactly (product, quotient and chain rules), so

    jet2_eval(lambda y: metric.squared_norm(x, y), y0)

returns F², its y-gradient and its y-Hessian at y0 to roundoff.

Jets mix freely with Python floats and numpy scalars. ``__array_ufunc__`` is
disabled so numpy defers to the reflected operators instead of building
object arrays.
"""

import math
from typing import Callable, Sequence, Union
import numpy as np
from zermelo.errors import DomainError

Number = Union[float, int, np.floating]


class Jet2:
    """
    Value, gradient and symmetric Hessian of a scalar in k active variables.
    """

    __slots__ = ("value", "grad", "hess")
    __array_ufunc__ = None

    def __init__(self, value: float, grad: np.ndarray, hess: np.ndarray):
        self.value = float(value)
        self.grad = np.asarray(grad, dtype=float)
        hess = np.asarray(hess, dtype=float)
        self.hess = 0.5 * (hess + hess.T)

    @classmethod
    def variable(cls, value: float, index: int, size: int) -> "Jet2":
        """
        Create the jet of the active variable ``index`` out of ``size``.
        """
        grad = np.zeros(size)
        grad[index] = 1.0
        return cls(value, grad, np.zeros((size, size)))

    @classmethod
    def constant(cls, value: float, size: int) -> "Jet2":
        return cls(value, np.zeros(size), np.zeros((size, size)))

    @property
    def size(self) -> int:
        return self.grad.shape[0]

    def _lift(self, other: Union["Jet2", Number]) -> "Jet2":
        if isinstance(other, Jet2):
            return other
        return Jet2.constant(float(other), self.size)

    def _chain(self, f0: float, f1: float, f2: float) -> "Jet2":
        """Compose a scalar function with derivatives (f0, f1, f2) at self.value."""
        grad = f1 * self.grad
        hess = f1 * self.hess + f2 * np.outer(self.grad, self.grad)
        return Jet2(f0, grad, hess)

    def __add__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(self.value + float(other), self.grad, self.hess)
        return Jet2(self.value + other.value, self.grad + other.grad, self.hess + other.hess)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.value, -self.grad, -self.hess)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            c = float(other)
            return Jet2(c * self.value, c * self.grad, c * self.hess)
        cross = np.outer(self.grad, other.grad)
        return Jet2(
            self.value * other.value,
            self.value * other.grad + other.value * self.grad,
            self.value * other.hess + other.value * self.hess + cross + cross.T,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "Jet2":
        if self.value == 0.0:
            raise DomainError("division by zero in jet arithmetic")
        inv = 1.0 / self.value
        return self._chain(inv, -inv * inv, 2.0 * inv * inv * inv)

    def __truediv__(self, other):
        if not isinstance(other, Jet2):
            c = float(other)
            if c == 0.0:
                raise DomainError("division by zero in jet arithmetic")
            return self * (1.0 / c)
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * float(other)

    def __pow__(self, exponent: Number):
        p = float(exponent)
        if p == 0.0:
            return Jet2.constant(1.0, self.size)
        if p == 1.0:
            return self
        if p == 2.0:
            return self * self
        u = self.value
        if not p.is_integer() and u <= 0.0:
            raise DomainError(f"non-integer power {p} of non-positive value {u:.6g}")
        if p < 2.0 and u == 0.0:
            raise DomainError(f"power {p} has no second derivative at zero")
        return self._chain(u**p, p * u ** (p - 1.0), p * (p - 1.0) * u ** (p - 2.0))

    def sqrt(self) -> "Jet2":
        if self.value <= 0.0:
            raise DomainError(f"sqrt of non-positive value {self.value:.6g} in jet arithmetic")
        root = math.sqrt(self.value)
        return self._chain(root, 0.5 / root, -0.25 / (root * self.value))

    def __repr__(self) -> str:
        return f"Jet2(value={self.value!r}, grad={self.grad.tolist()!r})"


def sqrt(u: Union[Jet2, Number]) -> Union[Jet2, float]:
    """
    Square root for jets and plain numbers alike.

    Raises:
        DomainError: If a plain number is negative or a jet value is non-positive.
    """
    if isinstance(u, Jet2):
        return u.sqrt()
    if u < 0.0:
        raise DomainError(f"sqrt of negative value {float(u):.6g}")
    return math.sqrt(u)


def quadratic_form(matrix: np.ndarray, vector: Sequence) -> Union[Jet2, float]:
    """
    Evaluate vᵗ M v where the entries of v may be jets.
    """
    if not any(isinstance(v, Jet2) for v in vector):
        v = np.asarray(vector, dtype=float)
        return float(v @ matrix @ v)
    total = 0.0
    n = len(vector)
    for i in range(n):
        row = 0.0
        for j in range(n):
            if matrix[i, j] != 0.0:
                row = row + float(matrix[i, j]) * vector[j]
        total = total + vector[i] * row
    return total


def linear_form(covector: np.ndarray, vector: Sequence) -> Union[Jet2, float]:
    """
    Evaluate b(v) = b_i vⁱ where the entries of v may be jets.
    """
    if not any(isinstance(v, Jet2) for v in vector):
        return float(np.dot(covector, np.asarray(vector, dtype=float)))
    total = 0.0
    for b_i, v_i in zip(covector, vector):
        if b_i != 0.0:
            total = total + float(b_i) * v_i
    return total


def jet2_eval(f: Callable[[list], Union[Jet2, Number]], point: Sequence[float]) -> Jet2:
    """
    Evaluate f at point with every coordinate seeded as an active variable.

    Args:
        f (Callable): Function of a list of coordinates built from jet arithmetic.
        point (Sequence[float]): The evaluation point.

    Returns:
        Jet2: Value, gradient and Hessian of f at point.

    Raises:
        DomainError: Propagated from a jet operation outside its domain.
    """
    coords = np.atleast_1d(np.asarray(point, dtype=float))
    size = coords.shape[0]
    seeds = [Jet2.variable(c, i, size) for i, c in enumerate(coords)]
    result = f(seeds)
    if not isinstance(result, Jet2):
        return Jet2.constant(float(result), size)
    return result
