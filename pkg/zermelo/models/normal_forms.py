# models/normal_forms.py

"""
Adjoint-orbit normal forms for the three symmetry groups behind the space forms.

- O(ℓ) acting on skew matrices: a₁J ⊕ … ⊕ a_mJ (⊕ 0).
- The Euclidean similarity group acting on affine block matrices
  [[−½σI − Q, 0], [Cᵗ, 0]].
- O₊(1, n) acting on the Lorentz algebra 𝔬(1, n), which splits into the three
  families J (timelike kernel vector), S (real eigenvalue ±a with null
  eigenvectors) and T (nilpotent 3×3 block).

Every routine returns a BlockNormalForm whose conjugator g satisfies
gΩg⁻¹ = canonical(); matrices act on column vectors throughout.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple
import attrs
import numpy as np
from scipy import linalg as sla
from scipy.optimize import brentq
from zermelo.errors import DegeneracyError, ValidationError
from zermelo.utils.linalg import TOL_EIG, check_skew, negligible, skew_eigen

TOL_RECON = 1.0e-9
KERNEL_RTOL = 1.0e-10
LORENTZ_ALGEBRA_TOL = 1.0e-10

J = np.array([[0.0, 1.0], [-1.0, 0.0]])
S = np.array([[0.0, 1.0], [1.0, 0.0]])
T = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, -1.0, 0.0]])

ORTHOGONAL = "O"
EUCLIDEAN = "E"
LORENTZ = "Lorentz"


def minkowski_metric(n: int) -> np.ndarray:
    """E = −1 ⊕ I_n."""
    eta = np.eye(n + 1)
    eta[0, 0] = -1.0
    return eta


def _place_blocks(matrix: np.ndarray, start: int, values: Sequence[float]) -> np.ndarray:
    size = matrix.shape[0]
    for value in values:
        if start + 2 > size:
            break
        matrix[start : start + 2, start : start + 2] = value * J
        start += 2
    return matrix


def block_matrix(values: Sequence[float], size: int) -> np.ndarray:
    """a₁J ⊕ a₂J ⊕ … padded with zeros to size×size."""
    return _place_blocks(np.zeros((size, size)), 0, values)


def _pad(values: Sequence[float], length: int) -> np.ndarray:
    padded = np.zeros(length)
    padded[: len(values)] = list(values)[:length]
    return padded


def _householder_to_last(vector: np.ndarray) -> Tuple[np.ndarray, float]:
    """Orthogonal r with r·vector = (0, …, 0, |vector|)."""
    k = vector.shape[0]
    length = float(np.linalg.norm(vector))
    target = np.zeros(k)
    target[-1] = length
    v = vector - target
    if np.linalg.norm(v) <= 1.0e-15 * (1.0 + length):
        return np.eye(k), length
    return np.eye(k) - 2.0 * np.outer(v, v) / (v @ v), length


@attrs.frozen(eq=False)
class BlockNormalForm:
    """
    Canonical representative of an adjoint orbit together with the conjugator reaching it.

    Attributes:
        family (str): "O", "E" or "Lorentz".
        subtype (Optional[str]): "J", "S" or "T" for Lorentz; "flat-sigma0" or "flat-sigma" for E.
        a (np.ndarray): Block parameters, relabeled per family (see the module functions).
        extra (float): Translation residue ξ ≥ 0 of the E(n) reduction with σ = 0.
        conjugator (np.ndarray): Group element g with gΩg⁻¹ = canonical().
        dim (int): Size ℓ (O) or n (E, Lorentz) of the underlying space.
        sigma (float): Homothety constant (E only).
        rho (np.ndarray): Rotation parameters ρ₁ ≥ … of the linear part (E only).
        branch (Optional[str]): "rotational" or "translational" for E(n), σ = 0, n even.
    """

    family: str
    subtype: Optional[str]
    a: np.ndarray
    conjugator: np.ndarray
    dim: int
    extra: float = 0.0
    sigma: float = 0.0
    rho: np.ndarray = attrs.field(factory=lambda: np.zeros(0))
    branch: Optional[str] = None

    def canonical(self) -> np.ndarray:
        """The block matrix rebuilt from (subtype, a, ξ)."""
        if self.family == ORTHOGONAL:
            return block_matrix(self.a, self.dim)
        n = self.dim
        if self.family == EUCLIDEAN:
            omega = np.zeros((n + 1, n + 1))
            omega[:n, :n] = -0.5 * self.sigma * np.eye(n) + block_matrix(self.rho, n)
            omega[n, n - 1] = self.extra
            return omega
        omega = np.zeros((n + 1, n + 1))
        if self.subtype == "J":
            return _place_blocks(omega, 1, self.a)
        if self.subtype == "S":
            omega[:2, :2] = self.a[0] * S
            return _place_blocks(omega, 2, self.a[1:])
        omega[:3, :3] = self.a[0] * T
        return _place_blocks(omega, 3, self.a[1:])

    def inverse_conjugator(self) -> np.ndarray:
        g = self.conjugator
        if self.family == ORTHOGONAL:
            return g.T
        if self.family == LORENTZ:
            eta = minkowski_metric(self.dim)
            return eta @ g.T @ eta
        return np.linalg.inv(g)

    def reconstruction_residual(self, omega) -> float:
        """‖gΩg⁻¹ − canonical()‖_F."""
        omega = np.asarray(omega, dtype=float)
        conjugated = self.conjugator @ omega @ self.inverse_conjugator()
        return float(np.linalg.norm(conjugated - self.canonical()))

    def group_residual(self) -> float:
        """Distance of the conjugator from its group (0 for an exact group element)."""
        g = self.conjugator
        if self.family == ORTHOGONAL:
            return float(np.linalg.norm(g.T @ g - np.eye(g.shape[0])))
        if self.family == LORENTZ:
            eta = minkowski_metric(self.dim)
            return float(np.linalg.norm(g.T @ eta @ g - eta))
        n = self.dim
        linear = g[:n, :n]
        last_column = np.zeros(n + 1)
        last_column[n] = 1.0
        return float(np.linalg.norm(linear.T @ linear - np.eye(n)) + np.linalg.norm(g[:, n] - last_column))

    def to_dict(self, omega=None) -> Dict:
        data = {
            "family": self.family,
            "subtype": self.subtype,
            "a": self.a.tolist(),
            "canonical": self.canonical().tolist(),
            "conjugator": self.conjugator.tolist(),
            "group_residual": self.group_residual(),
        }
        if self.family == EUCLIDEAN:
            data.update(xi=self.extra, sigma=self.sigma, rho=self.rho.tolist(), branch=self.branch)
        if omega is not None:
            data["reconstruction_residual"] = self.reconstruction_residual(omega)
        return data


def skew_normal_form(omega, tol_eig: float = TOL_EIG) -> BlockNormalForm:
    """
    Orthogonal normal form of a real skew matrix.

    Args:
        omega: ℓ×ℓ skew-symmetric matrix.
        tol_eig (float): Relative tolerance below which a block value counts as zero.

    Returns:
        BlockNormalForm: family "O", a = (a₁ ≥ … ≥ a_m ≥ 0) with m = ⌊ℓ/2⌋ and
        conjugator g = Bᵗ, B the orthonormal basis of invariant planes then kernel.

    Raises:
        ValidationError: If omega is not skew-symmetric.
    """
    omega = np.asarray(omega, dtype=float)
    pairing = skew_eigen(omega, tol_eig=tol_eig)
    size = omega.shape[0]
    basis = pairing.basis()
    return BlockNormalForm(
        family=ORTHOGONAL,
        subtype=None,
        a=_pad(pairing.values, size // 2),
        conjugator=basis.T,
        dim=size,
    )


def _affine_conjugator(linear: np.ndarray, translation_row: np.ndarray) -> np.ndarray:
    n = linear.shape[0]
    g = np.zeros((n + 1, n + 1))
    g[:n, :n] = linear
    g[n, :n] = translation_row
    g[n, n] = 1.0
    return g


def similarity_norm(Q: np.ndarray, C: np.ndarray, sigma: float) -> float:
    """Frobenius norm of [[−½σI − Q, 0], [Cᵗ, 0]] from its parts."""
    n = Q.shape[0]
    return float(np.sqrt(np.linalg.norm(Q) ** 2 + np.dot(C, C) + 0.25 * n * sigma**2))


def euclidean_normal_form(Q, C, sigma: float, tol_eig: float = TOL_EIG) -> BlockNormalForm:
    """
    Normal form of W = −½σx + Qx + C under rigid motions x ↦ Aᵗx + b.

    σ = 0: the linear part is rotated to ρ₁J ⊕ … ⊕ ρ_hJ ⊕ 0, the component of C in
    Range Q is removed by a translation, and the kernel component is rotated onto
    the last axis with length ξ (ξ = 0 iff C ∈ Range Q). The reported a-vector is
    (ξ, ρ₁, …) for odd n; for even n it is ρ (branch "rotational") or, when ξ > 0,
    (ξ, ρ₁, …, ρ_{m−1}) (branch "translational").

    σ ≠ 0: the translation b = −(Q − ½σI)⁻¹C moves the fixed point to the origin,
    so C̃ = 0 and a is the normal form of Q. A σ within tol_eig·(1 + ‖Ω‖) of zero
    counts as 0, with Ω the embedding [[−½σI − Q, 0], [Cᵗ, 0]].

    Raises:
        ValidationError: If Q is not skew or C has the wrong length.
    """
    Q = check_skew(np.asarray(Q, dtype=float), name="Q")
    C = np.asarray(C, dtype=float)
    n = Q.shape[0]
    if C.shape != (n,):
        raise ValidationError(f"C must have length {n}, got shape {C.shape}")
    sigma = float(sigma)
    if negligible(sigma, similarity_norm(Q, C, sigma), tol_eig):
        sigma = 0.0
    rotation = skew_normal_form(-Q, tol_eig=tol_eig)
    R = rotation.conjugator
    m = (n + 1) // 2

    if sigma != 0.0:
        b = -np.linalg.solve(Q - 0.5 * sigma * np.eye(n), C)
        return BlockNormalForm(
            family=EUCLIDEAN,
            subtype="flat-sigma",
            a=rotation.a.copy(),
            conjugator=_affine_conjugator(R, b),
            dim=n,
            sigma=sigma,
            rho=rotation.a.copy(),
        )

    h = int(np.count_nonzero(rotation.a))
    rho = rotation.a[:h]
    c_rotated = R @ C
    shift = np.zeros(n)
    for i, value in enumerate(rho):
        shift[2 * i : 2 * i + 2] = -J @ c_rotated[2 * i : 2 * i + 2] / value
    A = R.copy()
    xi = 0.0
    if 2 * h < n:
        reflection, xi = _householder_to_last(c_rotated[2 * h :])
        A[2 * h :, :] = reflection @ R[2 * h :, :]
    threshold = tol_eig * (1.0 + np.linalg.norm(Q) + np.linalg.norm(C))

    if n % 2:
        a = _pad([xi, *rho], m)
        branch = None
    elif xi > threshold:
        a = _pad([xi, *rho], m)
        branch = "translational"
    else:
        a = _pad(rho, m)
        branch = "rotational"
    logging.debug("euclidean_normal_form: rho %s, xi %.6g", rho, xi)
    return BlockNormalForm(
        family=EUCLIDEAN,
        subtype="flat-sigma0",
        a=a,
        conjugator=_affine_conjugator(A, shift @ A),
        dim=n,
        extra=xi,
        rho=_pad(rho, n // 2),
        branch=branch,
    )


def check_lorentz_algebra(omega) -> np.ndarray:
    """
    Return omega as a float array after checking Ωᵗ = −EΩE.

    Raises:
        ValidationError: If omega is not square or not in 𝔬(1, n).
    """
    omega = np.asarray(omega, dtype=float)
    if omega.ndim != 2 or omega.shape[0] != omega.shape[1] or omega.shape[0] < 2:
        raise ValidationError(f"Lorentz algebra element must be square of size >= 2, got shape {omega.shape}")
    eta = minkowski_metric(omega.shape[0] - 1)
    defect = float(np.linalg.norm(omega.T + eta @ omega @ eta))
    if defect > LORENTZ_ALGEBRA_TOL * (1.0 + np.linalg.norm(omega)):
        logging.debug("Matrix is not in o(1,n): defect %.3e", defect)
        raise ValidationError(f"matrix is not in the Lorentz algebra o(1,n) (defect {defect:.3e})")
    return omega


@attrs.frozen(eq=False)
class _LorentzReduction:
    """Pre-simplified Ω₁ = g_pre Ω g_pre⁻¹ with spatial block ⊕q_iJ ⊕ 0 and C' = (D, 0, …, 0, ξ)."""

    omega: np.ndarray
    g_pre: np.ndarray
    q: np.ndarray
    c_prime: np.ndarray
    xi: float
    zeta: float
    tol: float

    @property
    def n(self) -> int:
        return self.omega.shape[0] - 1

    def spatial_block(self) -> np.ndarray:
        return block_matrix(self.q, self.n)


def _reduce_lorentz(omega: np.ndarray, tol_eig: float) -> _LorentzReduction:
    n = omega.shape[0] - 1
    rotation = skew_normal_form(omega[1:, 1:], tol_eig=tol_eig)
    h = int(np.count_nonzero(rotation.a))
    q = rotation.a[:h]
    A = rotation.conjugator.copy()
    c_rotated = A @ omega[1:, 0]
    xi = 0.0
    c_prime = np.zeros(n)
    c_prime[: 2 * h] = c_rotated[: 2 * h]
    if 2 * h < n:
        reflection, xi = _householder_to_last(c_rotated[2 * h :])
        A[2 * h :, :] = reflection @ A[2 * h :, :]
        c_prime[-1] = xi
    g_pre = np.eye(n + 1)
    g_pre[1:, 1:] = A
    zeta = -1.0
    for i, value in enumerate(q):
        zeta += float(c_prime[2 * i : 2 * i + 2] @ c_prime[2 * i : 2 * i + 2]) / value**2
    return _LorentzReduction(
        omega=g_pre @ omega @ g_pre.T,
        g_pre=g_pre,
        q=q,
        c_prime=c_prime,
        xi=xi,
        zeta=zeta,
        tol=tol_eig * (1.0 + float(np.linalg.norm(omega))),
    )


def _kernel_gram_minimum(omega: np.ndarray, kernel_rtol: float) -> float:
    """Smallest eigenvalue of the Lorentz Gram matrix on the numerical kernel of Ω (inf if trivial)."""
    _, singular, vh = np.linalg.svd(omega)
    cutoff = kernel_rtol * max(float(singular[0]), np.finfo(float).tiny)
    kernel = vh[singular <= cutoff].T
    if kernel.shape[1] == 0:
        return float("inf")
    gram = kernel.T @ minkowski_metric(omega.shape[0] - 1) @ kernel
    return float(np.linalg.eigvalsh(0.5 * (gram + gram.T))[0])


def _subtype(reduction: _LorentzReduction) -> str:
    if reduction.xi > reduction.tol:
        return "S"
    if reduction.zeta < -reduction.tol:
        return "J"
    if reduction.zeta > reduction.tol:
        return "S"
    return "T"


def lorentz_classify(
    omega, tol_eig: float = TOL_EIG, kernel_rtol: float = KERNEL_RTOL
) -> str:
    """
    Decide the O₊(1, n) family of Ω ∈ 𝔬(1, n).

    After rotating the spatial block to ⊕q_iJ ⊕ 0 and the kernel part of C onto the
    last axis (length ξ), the kernel of Ω contains (1, z) with z_i = JD_i/q_i whenever
    ξ = 0, and ζ = |z|² − 1 is its Lorentz norm. Hence J iff ξ = 0 and ζ < 0,
    S iff ξ > 0 or ζ > 0 (real eigenvalue a solving Σ|D_i|²/(a² + q_i²) + ξ²/a² = 1),
    T otherwise. The J verdict is cross-checked against the Gram matrix of the
    numerical kernel.

    Returns:
        str: "J", "S" or "T".

    Raises:
        ValidationError: If omega is not in 𝔬(1, n).
        DegeneracyError: If the two J tests disagree.
    """
    omega = check_lorentz_algebra(omega)
    reduction = _reduce_lorentz(omega, tol_eig)
    subtype = _subtype(reduction)
    gram_min = _kernel_gram_minimum(omega, kernel_rtol)
    timelike_kernel = gram_min < -0.25 * reduction.tol
    if timelike_kernel != (subtype == "J"):
        margins = {"xi": reduction.xi, "zeta": reduction.zeta, "kernel_gram_min": gram_min, "tol": reduction.tol}
        logging.warning("Lorentz subtype tests disagree: %s", margins)
        raise DegeneracyError("Lorentz subtype is numerically ambiguous", margins=margins)
    logging.debug("lorentz_classify: %s (xi %.3e, zeta %.3e)", subtype, reduction.xi, reduction.zeta)
    return subtype


def _lorentz_inner(u: np.ndarray, v: np.ndarray) -> float:
    return float(-u[0] * v[0] + u[1:] @ v[1:])


def _complete_lorentz_basis(
    omega: np.ndarray, head: List[np.ndarray], tol_eig: float
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Extend a Lorentz-orthonormal Ω-invariant head (timelike vector first) to a
    Lorentz-orthonormal basis whose spatial complement is in skew normal form.

    Returns:
        Tuple[np.ndarray, np.ndarray]: (basis matrix with columns head + complement, complement a-vector).
    """
    eta = minkowski_metric(omega.shape[0] - 1)
    cleaned: List[np.ndarray] = []
    for vector in head:
        v = vector.copy()
        for e in cleaned:
            v -= _lorentz_inner(e, v) / _lorentz_inner(e, e) * e
        cleaned.append(v / np.sqrt(abs(_lorentz_inner(v, v))))
    head_matrix = np.column_stack(cleaned)
    complement = sla.null_space(head_matrix.T @ eta)
    if complement.shape[1] == 0:
        return head_matrix, np.zeros(0)
    gram = complement.T @ eta @ complement
    lower = sla.cholesky(0.5 * (gram + gram.T), lower=True)
    complement = sla.solve_triangular(lower, complement.T, lower=True).T
    restricted = complement.T @ eta @ omega @ complement
    rotation = skew_normal_form(0.5 * (restricted - restricted.T), tol_eig=tol_eig)
    basis = np.column_stack([head_matrix, complement @ rotation.conjugator.T])
    return basis, rotation.a


def _s_eigenvalue(reduction: _LorentzReduction) -> float:
    q = reduction.q
    d2 = np.array([reduction.c_prime[2 * i : 2 * i + 2] @ reduction.c_prime[2 * i : 2 * i + 2] for i in range(len(q))])
    xi2 = reduction.xi**2 if reduction.xi > reduction.tol else 0.0

    def excess(a: float) -> float:
        return float(np.sum(d2 / (a**2 + q**2)) + xi2 / a**2 - 1.0)

    upper = float(np.sqrt(d2.sum() + xi2)) + 1.0
    lower = upper
    for _ in range(2000):
        lower *= 0.5
        if excess(lower) > 0.0:
            break
    else:
        raise DegeneracyError("no real eigenvalue found for a type S element", {"zeta": reduction.zeta})
    return float(brentq(excess, lower, upper, xtol=1.0e-15, rtol=4.0 * np.finfo(float).eps))


def _type_head(subtype: str, reduction: _LorentzReduction) -> Tuple[List[np.ndarray], List[float]]:
    n = reduction.n
    q = reduction.q
    c_prime = reduction.c_prime.copy()
    if subtype != "S" or reduction.xi <= reduction.tol:
        c_prime[2 * len(q) :] = 0.0
    planes = range(len(q))
    if subtype == "J":
        z = np.zeros(n)
        for i in planes:
            z[2 * i : 2 * i + 2] = J @ c_prime[2 * i : 2 * i + 2] / q[i]
        u = np.concatenate(([1.0], z)) / np.sqrt(1.0 - z @ z)
        return [u], []
    if subtype == "S":
        a = _s_eigenvalue(reduction)
        spatial = reduction.spatial_block()
        x = np.linalg.solve(a * np.eye(n) - spatial, c_prime)
        y = -np.linalg.solve(a * np.eye(n) + spatial, c_prime)
        scale = np.sqrt(2.0 * (1.0 - x @ y))
        u_hat = np.concatenate(([2.0], x + y)) / scale
        v_hat = np.concatenate(([0.0], x - y)) / scale
        return [u_hat, v_hat], [a]
    z = np.zeros(n)
    z1 = np.zeros(n)
    z2 = np.zeros(n)
    for i in planes:
        d = c_prime[2 * i : 2 * i + 2]
        z[2 * i : 2 * i + 2] = J @ d / q[i]
        z1[2 * i : 2 * i + 2] = d / q[i] ** 2
        z2[2 * i : 2 * i + 2] = J @ d / q[i] ** 3
    len1, len2 = np.linalg.norm(z1), np.linalg.norm(z2)
    x1 = np.concatenate(([0.0], z1)) / len1
    x2 = -np.concatenate(([0.0], z2)) / len2
    x0 = (len2 / len1**2) * np.concatenate(([1.0], z)) + x2
    return [x0, x1, x2], [len1 / len2]


def lorentz_normal_form(
    omega,
    tol_eig: float = TOL_EIG,
    tol_recon: float = TOL_RECON,
    kernel_rtol: float = KERNEL_RTOL,
) -> BlockNormalForm:
    """
    O₊(1, n) normal form of Ω ∈ 𝔬(1, n).

    Canonical forms: 0 ⊕ a₁J ⊕ … (J), a₁S ⊕ a₂J ⊕ … (S), a₁T ⊕ a₂J ⊕ … (T), with
    a padded by zeros to ⌈n/2⌉ entries. J and T carry only (n − 1)/2 parameters for odd n,
    so their last entry is then always 0. The conjugator is Lorentz with a
    future-pointing first column.

    Args:
        omega: (n+1)×(n+1) element of 𝔬(1, n).
        tol_eig (float): Relative tolerance of the block and subtype decisions.
        tol_recon (float): Relative reconstruction tolerance; larger residuals are logged.
        kernel_rtol (float): Singular-value cutoff of the numerical kernel.

    Returns:
        BlockNormalForm: family "Lorentz", subtype J, S or T.

    Raises:
        ValidationError: If omega is not in 𝔬(1, n).
        DegeneracyError: If the subtype cannot be decided reliably.
    """
    subtype = lorentz_classify(omega, tol_eig=tol_eig, kernel_rtol=kernel_rtol)
    omega = np.asarray(omega, dtype=float)
    reduction = _reduce_lorentz(omega, tol_eig)
    n = reduction.n
    head, head_values = _type_head(subtype, reduction)
    basis, rest = _complete_lorentz_basis(reduction.omega, head, tol_eig)
    eta = minkowski_metric(n)
    conjugator = eta @ basis.T @ eta @ reduction.g_pre
    form = BlockNormalForm(
        family=LORENTZ,
        subtype=subtype,
        a=_pad([*head_values, *rest], (n + 1) // 2),
        conjugator=conjugator,
        dim=n,
    )
    residual = form.reconstruction_residual(omega)
    if residual > tol_recon * (1.0 + np.linalg.norm(omega)):
        logging.warning("Lorentz normal form %s reconstructs with residual %.3e", subtype, residual)
    return form
