# utils/linalg.py

"""
Small dense linear-algebra helpers: symmetry and skewness guards, the
positive-definiteness check, and the eigenvalue pairing of real skew matrices.
"""

import logging
from typing import List, Tuple
import attrs
import numpy as np
from scipy import linalg as sla
from zermelo.errors import ValidationError

SYMMETRY_TOL = 1.0e-12
TOL_EIG = 1.0e-9


def frobenius(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(matrix))


def negligible(value: float, scale: float, tol: float = TOL_EIG) -> bool:
    """True when |value| <= tol·(1 + scale), i.e. value is roundoff relative to scale."""
    return abs(value) <= tol * (1.0 + scale)


def check_symmetric(matrix: np.ndarray, tol: float = SYMMETRY_TOL, name: str = "matrix") -> np.ndarray:
    """
    Return matrix as a square float array after checking Mᵗ = M within tol·(1+‖M‖).

    Raises:
        ValidationError: If the matrix is not square or not symmetric.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {m.shape}")
    if frobenius(m - m.T) > tol * (1.0 + frobenius(m)):
        raise ValidationError(f"{name} is not symmetric (asymmetry {frobenius(m - m.T):.3e})")
    return m


def check_skew(matrix: np.ndarray, tol: float = SYMMETRY_TOL, name: str = "matrix") -> np.ndarray:
    """
    Return matrix as a square float array after checking Mᵗ = -M within tol·(1+‖M‖).

    Raises:
        ValidationError: If the matrix is not square or not skew-symmetric.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {m.shape}")
    if frobenius(m + m.T) > tol * (1.0 + frobenius(m)):
        raise ValidationError(f"{name} is not skew-symmetric (defect {frobenius(m + m.T):.3e})")
    return m


def spd_check(matrix: np.ndarray, tol: float = 0.0) -> Tuple[bool, float]:
    """
    Decide positive definiteness of a symmetric matrix.

    Args:
        matrix (np.ndarray): Symmetric matrix.
        tol (float): Eigenvalues must exceed tol.

    Returns:
        Tuple[bool, float]: The verdict and the smallest eigenvalue (the margin).

    Raises:
        ValidationError: If the matrix is not symmetric.
    """
    m = check_symmetric(matrix, tol=max(tol, SYMMETRY_TOL))
    smallest = float(np.linalg.eigvalsh(0.5 * (m + m.T))[0])
    return smallest > tol, smallest


@attrs.frozen(eq=False)
class EigenPairing:
    """
    Eigen-structure of a real skew matrix Ω.

    Each plane (û, v̂) carries a value a ≥ 0 with ûᵗΩv̂ = a, so that Ω acts on
    the plane as aJ with J = [[0, 1], [-1, 0]]; the kernel basis spans the rest.
    """

    values: Tuple[float, ...]
    plane_bases: Tuple[Tuple[np.ndarray, np.ndarray], ...]
    kernel_basis: np.ndarray

    def reconstruct(self) -> np.ndarray:
        dim = self.kernel_basis.shape[0]
        omega = np.zeros((dim, dim))
        for a, (u, v) in zip(self.values, self.plane_bases):
            omega += a * (np.outer(u, v) - np.outer(v, u))
        return omega

    def basis(self) -> np.ndarray:
        """Orthonormal basis with the planes first (in value order) and the kernel last."""
        columns: List[np.ndarray] = []
        for u, v in self.plane_bases:
            columns.extend([u, v])
        columns.extend(self.kernel_basis.T)
        return np.column_stack(columns) if columns else np.zeros((0, 0))


def skew_eigen(omega: np.ndarray, tol_eig: float = TOL_EIG) -> EigenPairing:
    """
    Pair the eigenvalues ±ia of a real skew matrix into invariant planes.

    Uses the real Schur decomposition, which for a normal matrix is block
    diagonal with 2×2 rotation blocks and 1×1 zero blocks.

    Args:
        omega (np.ndarray): Real skew-symmetric matrix.
        tol_eig (float): Relative tolerance; values below tol_eig·(1+‖Ω‖_F) count as zero.

    Returns:
        EigenPairing: Values sorted descending (ties keep the order of appearance).

    Raises:
        ValidationError: If omega is not skew-symmetric.
    """
    om = check_skew(omega, tol=max(tol_eig, SYMMETRY_TOL), name="Omega")
    om = 0.5 * (om - om.T)
    dim = om.shape[0]
    threshold = tol_eig * (1.0 + frobenius(om))
    schur_form, z = sla.schur(om, output="real")

    planes = []
    kernel: List[np.ndarray] = []
    k = 0
    while k < dim:
        if k + 1 < dim and schur_form[k + 1, k] != 0.0:
            u, v = z[:, k].copy(), z[:, k + 1].copy()
            a = 0.5 * (u @ om @ v - v @ om @ u)
            if a < 0.0:
                v, a = -v, -a
            if a > threshold:
                planes.append((a, u, v))
            else:
                kernel.extend([u, v])
            k += 2
        else:
            kernel.append(z[:, k].copy())
            k += 1

    planes.sort(key=lambda item: -item[0])
    logging.debug("skew_eigen: values %s, kernel dimension %d", [p[0] for p in planes], len(kernel))
    kernel_basis = np.column_stack(kernel) if kernel else np.zeros((dim, 0))
    return EigenPairing(
        values=tuple(float(p[0]) for p in planes),
        plane_bases=tuple((p[1], p[2]) for p in planes),
        kernel_basis=kernel_basis,
    )
