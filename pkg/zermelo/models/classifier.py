# models/classifier.py

"""
Classification of constant flag curvature Randers metrics given in navigation form.

A strongly convex Randers metric has constant flag curvature K exactly when its
navigation data is a space form h perturbed by an infinitesimal homothety W
(Killing unless h is flat). ``classify`` reduces W to its normal form under the
isometry group of h and reports the moduli point; ``cfc_residuals`` checks the
Basic and Curvature equations directly on the Randers data (a, b).
"""

import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Union
import attrs
import numpy as np
from zermelo.errors import ClassificationError, ConvexityError
from zermelo.models.finsler import flag_statistics, sample_flags, SPRAY_STEP
from zermelo.models.navigation import NavigationMetric, RandersData
from zermelo.models.normal_forms import (
    KERNEL_RTOL,
    TOL_RECON,
    euclidean_normal_form,
    lorentz_normal_form,
    skew_normal_form,
)
from zermelo.models.space_form import christoffel_from_metric, riemann_tensor
from zermelo.models.wind import (
    WindSpec,
    convexity_margin,
    derived_tensors_at,
    embedded_wind_norm2,
    homothety_residual,
    wind_at,
)
from zermelo.utils.finite_differences import DEFAULT_STEP, central_fd
from zermelo.utils.linalg import TOL_EIG, negligible

MATSUMOTO_TOL = 1.0e-12
ALGEBRAIC_TOL = 1.0e-10
NUMERIC_THETA_TOL = 1.0e-6
DEFAULT_SAMPLE_RADIUS = 0.6
DEFAULT_MIN_MARGIN = 0.2

CASES = ("SpherePlus", "FlatZero", "FlatNegative", "KleinJ", "KleinS", "KleinT")


@attrs.frozen(eq=False)
class ModuliPoint:
    """
    Position of a CFC Randers metric in its moduli space.

    Attributes:
        K (float): Flag curvature.
        sigma (float): Homothety constant of the wind.
        case (str): One of SpherePlus, FlatZero, FlatNegative, KleinJ, KleinS, KleinT.
        a (np.ndarray): Moduli parameters (a₁, …, a_m).
        locally_admissible (bool): Some open set is strongly convex.
        globally_admissible (bool): The whole space form is strongly convex.
        branch (Optional[str]): Component tag of the flat even-dimensional moduli space.
    """

    K: float
    sigma: float
    case: str = attrs.field(validator=attrs.validators.in_(CASES))
    a: np.ndarray
    locally_admissible: bool
    globally_admissible: bool
    branch: Optional[str] = None

    def to_dict(self) -> Dict:
        return {
            "case": self.case,
            "K": self.K,
            "sigma": self.sigma,
            "a": [float(value) for value in self.a],
            "branch": self.branch,
            "local": self.locally_admissible,
            "global": self.globally_admissible,
        }


def matsumoto_check(K: float, sigma: float, tol: float = MATSUMOTO_TOL) -> bool:
    """True iff σ(K + σ²/16) = 0 within tol."""
    return abs(sigma * (K + sigma**2 / 16.0)) <= tol


def randers_curvature(spec: WindSpec) -> float:
    """
    Flag curvature of the navigation metric: the sectional curvature of a curved
    background, −σ²/16 on Euclidean space.
    """
    if spec.model.is_curved:
        return spec.model.curvature
    return -(spec.sigma**2) / 16.0


def _sign(K_sign: Union[int, float, str]) -> int:
    if isinstance(K_sign, str):
        names = {"pos": 1, "+": 1, "positive": 1, "zero": 0, "0": 0, "neg": -1, "-": -1, "negative": -1}
        if K_sign.lower() not in names:
            raise ValueError(f"Unknown curvature sign {K_sign!r}")
        return names[K_sign.lower()]
    return int(np.sign(K_sign))


def moduli_dimension(n: int, K_sign: Union[int, float, str], sigma_nonzero: bool) -> int:
    """
    Dimension of the local moduli space of n-dimensional CFC Randers metrics.

    Args:
        n (int): Dimension, at least 2.
        K_sign: Sign of K as a number or one of "pos", "zero", "neg".
        sigma_nonzero (bool): Whether the wind is a proper homothety.

    Returns:
        int: n/2 for even n; (n+1)/2 for odd n, except (n−1)/2 when K < 0 and σ ≠ 0.

    Raises:
        ValueError: If n < 2.
        ClassificationError: If σ ≠ 0 with K ≥ 0.
    """
    if n < 2:
        raise ValueError(f"Dimension must be at least 2, got {n}")
    sign = _sign(K_sign)
    if sigma_nonzero and sign >= 0:
        logging.debug("sigma != 0 requires K < 0 (Matsumoto identity)")
        raise ClassificationError("a nonzero sigma is only possible with K < 0 (Matsumoto identity)")
    if n % 2 == 0:
        return n // 2
    if sign < 0 and sigma_nonzero:
        return (n - 1) // 2
    return (n + 1) // 2


def classify(
    spec: WindSpec,
    require_local: bool = True,
    tol_eig: float = TOL_EIG,
    tol_recon: float = TOL_RECON,
    kernel_rtol: float = KERNEL_RTOL,
) -> ModuliPoint:
    """
    Classify the navigation metric of a wind into its moduli space.

    Args:
        spec (WindSpec): The navigation data.
        require_local (bool): Raise when no strongly convex open set exists.
        tol_eig (float): Relative eigenvalue tolerance of the normal forms; a σ within
            tol_eig·(1 + ‖Ω‖) of zero is treated as 0.
        tol_recon (float): Relative reconstruction tolerance of the Lorentz normal form.
        kernel_rtol (float): Kernel cutoff of the Lorentz normal form.

    Returns:
        ModuliPoint: Case, parameters and admissibility flags.

    Raises:
        ClassificationError: If (K, σ) violates the Matsumoto identity.
        ConvexityError: If require_local and the metric is nowhere strongly convex.
        DegeneracyError: If the Lorentz subtype cannot be decided.
    """
    if spec.sigma != 0.0 and negligible(spec.sigma, np.linalg.norm(spec.to_embedding()), tol_eig):
        spec = attrs.evolve(spec, sigma=0.0)
    K = randers_curvature(spec)
    sigma = spec.sigma
    if not matsumoto_check(K, sigma):
        raise ClassificationError(f"(K, sigma) = ({K}, {sigma}) violates the Matsumoto identity")
    kind = spec.model.kind
    n = spec.dim

    if kind == "sphere":
        form = skew_normal_form(spec.to_embedding(), tol_eig=tol_eig)
        a = form.a
        root_k = math.sqrt(K)
        local = bool(a[-1] < root_k) if n % 2 else True
        point = ModuliPoint(
            K=K, sigma=sigma, case="SpherePlus", a=a,
            locally_admissible=local, globally_admissible=bool(a[0] < root_k),
        )
    elif kind == "euclidean":
        form = euclidean_normal_form(spec.Q, spec.C, sigma, tol_eig=tol_eig)
        if sigma == 0.0:
            local = form.extra < 1.0
            point = ModuliPoint(
                K=K, sigma=sigma, case="FlatZero", a=form.a,
                locally_admissible=bool(local),
                globally_admissible=bool(local and not np.any(form.rho)),
                branch=form.branch,
            )
        else:
            point = ModuliPoint(
                K=K, sigma=sigma, case="FlatNegative", a=form.a,
                locally_admissible=True, globally_admissible=False,
            )
    else:
        form = lorentz_normal_form(spec.to_embedding(), tol_eig=tol_eig, tol_recon=tol_recon, kernel_rtol=kernel_rtol)
        local = True
        if form.subtype == "S":
            local = bool(form.a[0] < math.sqrt(abs(K)))
        point = ModuliPoint(
            K=K, sigma=sigma, case=f"Klein{form.subtype}", a=form.a,
            locally_admissible=local, globally_admissible=bool(not np.any(form.a)),
        )

    logging.info(
        "Classified %s wind: case %s, a = %s, local %s, global %s",
        kind, point.case, np.round(point.a, 12).tolist(), point.locally_admissible, point.globally_admissible,
    )
    if require_local and not point.locally_admissible:
        raise ConvexityError(f"{point.case} wind with a = {point.a.tolist()} has no strongly convex open set")
    return point


@attrs.frozen(eq=False)
class CfcResiduals:
    """
    Residuals of the Basic and Curvature equations over a set of points.

    ``basic`` and ``curvature`` are maxima of Frobenius norms; ξ, ‖b‖² and θᵢθⁱ refer
    to the point with the largest curvature residual.
    """

    K: float
    sigma: float
    basic: float
    curvature: float
    xi: float
    theta_norm: float
    bnorm2: float
    theta_sq: float
    sigma_residual: float
    sampled_flag_std: float = float("nan")

    def xi_recomputed(self) -> float:
        K, sigma = self.K, self.sigma
        return (K - 3.0 * sigma**2 / 16.0) + (K + sigma**2 / 16.0) * self.bnorm2 - 0.25 * self.theta_sq


def _basic_and_curvature(
    data_fn: Callable[[np.ndarray], RandersData], K: float, sigma: float, x: np.ndarray, step: float
) -> Dict[str, float]:
    data = data_fn(x)
    a, b = data.a, data.b
    n = a.shape[0]
    a_inv = np.linalg.inv(a)
    b_sharp = a_inv @ b
    bnorm2 = float(b @ b_sharp)
    if bnorm2 >= 1.0:
        raise ConvexityError("Randers data is not strongly convex", margin=1.0 - bnorm2)

    da = central_fd(lambda z: data_fn(z).a, x, order=1, step=step)  # [i, j, k] = ∂_k a_ij
    db = central_fd(lambda z: data_fn(z).b, x, order=1, step=step)  # [i, k] = ∂_k b_i
    db_sharp = central_fd(lambda z: data_fn(z).b_sharp, x, order=1, step=step)  # [i, k] = ∂_k bⁱ

    curl = db - db.T
    theta = b_sharp @ curl
    theta_sq = float(theta @ a_inv @ theta)

    divergence = float(np.trace(db_sharp) + 0.5 * b_sharp @ np.einsum("ij,jik->k", a_inv, da))
    sigma_recomputed = 2.0 * divergence / (n - bnorm2)
    lie = np.einsum("ijk,k->ij", da, b_sharp) + db_sharp.T @ a + a @ db_sharp
    basic = lie - sigma * (a - np.outer(b, b)) + np.outer(b, theta) + np.outer(theta, b)

    xi = (K - 3.0 * sigma**2 / 16.0) + (K + sigma**2 / 16.0) * bnorm2 - 0.25 * theta_sq
    m = curl.T @ a_inv @ curl
    rhs = (
        xi * (np.einsum("ij,hk->hijk", a, a) - np.einsum("ik,hj->hijk", a, a))
        - 0.25 * np.einsum("ij,hk->hijk", a, m)
        + 0.25 * np.einsum("ik,hj->hijk", a, m)
        + 0.25 * np.einsum("hj,ik->hijk", a, m)
        - 0.25 * np.einsum("hk,ij->hijk", a, m)
        - 0.25 * np.einsum("ij,hk->hijk", curl, curl)
        + 0.25 * np.einsum("ik,hj->hijk", curl, curl)
        + 0.5 * np.einsum("hi,jk->hijk", curl, curl)
    )
    a_fn = lambda z: data_fn(z).a
    a_riemann = riemann_tensor(a_fn, lambda z: christoffel_from_metric(a_fn, z, step=step), x, step=step)
    return {
        "basic": float(np.linalg.norm(basic)),
        "curvature": float(np.linalg.norm(a_riemann - rhs)),
        "xi": xi,
        "theta_norm": math.sqrt(max(theta_sq, 0.0)),
        "bnorm2": bnorm2,
        "theta_sq": theta_sq,
        "sigma_residual": abs(sigma_recomputed - sigma),
    }


def cfc_residuals(
    data_fn: Callable[[np.ndarray], RandersData],
    K: float,
    sigma: float,
    points: Sequence[np.ndarray],
    step: float = DEFAULT_STEP,
) -> CfcResiduals:
    """
    Evaluate the Basic and Curvature equations of a Randers field at sample points.

    Basic:      ℒ_{b♯}a − σ(a − b⊗b) + (b⊗θ + θ⊗b)
    Curvature:  ᵃR_hijk − ξ(a_ij a_hk − a_ik a_hj) + curl terms

    with curl_ij = ∂_j b_i − ∂_i b_j, θ_j = bⁱcurl_ij and all derivatives by finite
    differences. σ is also recomputed as 2 div b♯ / (n − ‖b‖²) and compared.

    Args:
        data_fn (Callable): Maps a point to its RandersData.
        K (float): Claimed flag curvature.
        sigma (float): Claimed σ.
        points (Sequence[np.ndarray]): Sample points.
        step (float): Relative finite-difference step.

    Returns:
        CfcResiduals: The worst residuals over the points.

    Raises:
        ConvexityError: If ‖b‖ ≥ 1 at a sample point.
    """
    if len(points) == 0:
        raise ValueError("cfc_residuals needs at least one sample point")
    worst: Optional[Dict[str, float]] = None
    basic = theta_norm = sigma_residual = 0.0
    for x in points:
        values = _basic_and_curvature(data_fn, K, sigma, np.asarray(x, dtype=float), step)
        logging.debug("CFC residuals at %s: %s", np.round(x, 4), values)
        basic = max(basic, values["basic"])
        theta_norm = max(theta_norm, values["theta_norm"])
        sigma_residual = max(sigma_residual, values["sigma_residual"])
        if worst is None or values["curvature"] > worst["curvature"]:
            worst = values
    return CfcResiduals(
        K=K,
        sigma=sigma,
        basic=basic,
        curvature=worst["curvature"],
        xi=worst["xi"],
        theta_norm=theta_norm,
        bnorm2=worst["bnorm2"],
        theta_sq=worst["theta_sq"],
        sigma_residual=sigma_residual,
    )


def sample_points(
    spec: WindSpec,
    rng: np.random.Generator,
    count: int,
    center: Optional[Sequence[float]] = None,
    radius: float = DEFAULT_SAMPLE_RADIUS,
    min_margin: float = DEFAULT_MIN_MARGIN,
    max_attempts: Optional[int] = None,
) -> List[np.ndarray]:
    """
    Rejection-sample chart points in a ball whose convexity margin is at least min_margin.

    Raises:
        ConvexityError: If too few admissible points are found.
    """
    n = spec.dim
    center = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    max_attempts = max_attempts or 1000 * max(count, 1)
    points: List[np.ndarray] = []
    rejected = 0
    for _ in range(max_attempts):
        if len(points) == count:
            break
        direction = rng.standard_normal(n)
        direction /= np.linalg.norm(direction)
        x = center + radius * rng.uniform() ** (1.0 / n) * direction
        if not spec.model.contains(x) or convexity_margin(spec, x) < min_margin:
            rejected += 1
            continue
        points.append(x)
    if len(points) < count:
        logging.warning("Only %d of %d sample points found (%d rejected)", len(points), count, rejected)
        raise ConvexityError(f"could not find {count} points with convexity margin >= {min_margin}")
    logging.debug("Sampled %d points, rejected %d", count, rejected)
    return points


def global_sweep(spec: WindSpec, rng: np.random.Generator, samples: int = 10_000) -> float:
    """
    Minimum convexity margin 1 − |W|² over points spread across the whole model:
    uniform on the sphere (equator included), log-uniform radii up to 10³ in
    Euclidean space, and up to 10⁻⁶ from the boundary of the Klein ball.
    """
    n = spec.dim
    smallest = math.inf
    for _ in range(samples):
        direction = rng.standard_normal(n + 1 if spec.model.kind == "sphere" else n)
        direction /= np.linalg.norm(direction)
        if spec.model.kind == "sphere":
            margin = 1.0 - embedded_wind_norm2(spec, direction)
        elif spec.model.kind == "euclidean":
            margin = convexity_margin(spec, 10.0 ** rng.uniform(-3.0, 3.0) * direction)
        else:
            margin = convexity_margin(spec, (1.0 - 10.0 ** rng.uniform(-6.0, 0.0)) * direction)
        smallest = min(smallest, margin)
    logging.info("Global sweep over %d samples: minimum margin %.6g", samples, smallest)
    return smallest


def _wind_norm2_gradient(spec: WindSpec, x: np.ndarray, step: float) -> np.ndarray:
    return central_fd(lambda z: np.array(1.0 - convexity_margin(spec, z)), x, order=1, step=step)


def theta_at(spec: WindSpec, x, step: float = DEFAULT_STEP) -> np.ndarray:
    """
    θ_j of the navigation metric from the wind alone: (1 − |W|²)θ_j = ∂_j|W|² + σW_j.

    Raises:
        DomainError: If x is outside the chart.
    """
    x = spec.model.check_point(x)
    margin = convexity_margin(spec, x)
    w_flat = spec.model.metric_at(x) @ wind_at(spec, x)
    return (_wind_norm2_gradient(spec, x, step) + spec.sigma * w_flat) / margin


def _theta_zero_algebraic(spec: WindSpec, tol: float) -> bool:
    Q, C = spec.Q, spec.C
    scale = 1.0 + np.linalg.norm(Q) ** 2 + np.linalg.norm(C) ** 2
    if not spec.model.is_curved:
        return bool(np.max(np.abs(Q), initial=0.0) <= tol)
    target = spec.model.psi * (np.outer(C, C) - (C @ C) * np.eye(spec.dim))
    return bool(np.linalg.norm(Q @ C) <= tol * scale and np.linalg.norm(Q @ Q - target) <= tol * scale)


def theta_zero_check(
    spec: WindSpec,
    rng: Optional[np.random.Generator] = None,
    samples: int = 5,
    tol: float = ALGEBRAIC_TOL,
    numeric_tol: float = NUMERIC_THETA_TOL,
) -> bool:
    """
    Decide whether θ vanishes identically for the navigation metric of spec.

    Euclidean: iff Q = 0. Sphere and Klein: iff QC = 0 and Q² = ψ(CCᵗ − |C|²I).
    With an rng, θ is also sampled numerically; a disagreement is logged.

    Returns:
        bool: The algebraic verdict.
    """
    verdict = _theta_zero_algebraic(spec, tol)
    if rng is not None and samples > 0:
        try:
            points = sample_points(spec, rng, samples, radius=0.3, min_margin=0.05)
        except ConvexityError:
            points = []
        numeric = all(np.linalg.norm(theta_at(spec, x)) <= numeric_tol for x in points)
        if points and numeric != verdict:
            logging.warning("theta = 0 criterion (%s) disagrees with sampled theta (%s)", verdict, numeric)
    return verdict


def projectively_flat_check(
    spec: WindSpec,
    rng: Optional[np.random.Generator] = None,
    samples: int = 5,
    tol: float = ALGEBRAIC_TOL,
    numeric_tol: float = NUMERIC_THETA_TOL,
) -> bool:
    """
    Decide projective flatness, which here is closedness of W♭.

    Euclidean: iff Q = 0. Sphere and Klein: iff W ≡ 0. With an rng, the curl of W♭
    is also sampled numerically; a disagreement is logged.

    Returns:
        bool: The algebraic verdict.
    """
    if spec.model.is_curved:
        verdict = bool(spec.is_zero(tol))
    else:
        verdict = bool(np.max(np.abs(spec.Q), initial=0.0) <= tol)
    if rng is not None and samples > 0:
        try:
            points = sample_points(spec, rng, samples, radius=0.3, min_margin=0.0)
        except ConvexityError:
            points = []
        closed = all(np.linalg.norm(derived_tensors_at(spec, x).C_ij) <= numeric_tol for x in points)
        if points and closed != verdict:
            logging.warning("projective flatness criterion (%s) disagrees with sampled dW (%s)", verdict, closed)
    return verdict


@attrs.frozen(eq=False)
class VerificationReport:
    """
    Outcome of a numerical CFC verification of one wind.
    """

    K: float
    sigma: float
    samples: int
    tol: float
    flag_mean: float
    flag_std: float
    residuals: CfcResiduals
    homothety: float
    checks: Dict[str, float]
    failed: List[str]
    worst: Optional[str]

    @property
    def passed(self) -> bool:
        return not self.failed

    def to_dict(self) -> Dict:
        return {
            "status": "PASS" if self.passed else "FAIL",
            "K": self.K,
            "sigma": self.sigma,
            "samples": self.samples,
            "tol": self.tol,
            "flag_mean": self.flag_mean,
            "flag_std": self.flag_std,
            "basic_residual": self.residuals.basic,
            "curvature_residual": self.residuals.curvature,
            "sigma_residual": self.residuals.sigma_residual,
            "homothety_residual": self.homothety,
            "checks": dict(self.checks),
            "failed": list(self.failed),
            "worst": self.worst,
        }


def _expectation_errors(spec: WindSpec, expect: Dict, flag_mean: float, K: float, tol_eig: float) -> Dict[str, float]:
    errors: Dict[str, float] = {}
    if "K" in expect:
        errors["expect_K"] = max(abs(K - expect["K"]), abs(flag_mean - expect["K"]))
    if "a" in expect or "case" in expect:
        point = classify(spec, require_local=False, tol_eig=tol_eig)
        if "a" in expect:
            expected = np.asarray(expect["a"], dtype=float)
            if expected.shape != point.a.shape:
                errors["expect_a"] = math.inf
            else:
                errors["expect_a"] = float(np.max(np.abs(expected - point.a), initial=0.0))
        if "case" in expect:
            errors["expect_case"] = 0.0 if expect["case"] == point.case else math.inf
    return errors


def verify_spec(
    spec: WindSpec,
    rng: np.random.Generator,
    samples: int = 100,
    tol: float = 1.0e-4,
    expect: Optional[Dict] = None,
    center: Optional[Sequence[float]] = None,
    radius: float = DEFAULT_SAMPLE_RADIUS,
    min_margin: float = DEFAULT_MIN_MARGIN,
    fd_step: float = DEFAULT_STEP,
    spray_step: float = SPRAY_STEP,
    tol_eig: float = TOL_EIG,
) -> VerificationReport:
    """
    Check numerically that the navigation metric of spec has the flag curvature its
    (K, σ) predict.

    Every check compares an error against tol: the flag-curvature mean and spread
    over random flags, the Basic and Curvature residuals, the recomputed σ, the
    homothety residual of W and, when given, the ``expect`` block
    ({"K": real, "a": [reals], "case": str}).

    Returns:
        VerificationReport: The report; ``worst`` names the failed check with the largest error.

    Raises:
        ConvexityError: If the sample region has too few strongly convex points.
    """
    K = randers_curvature(spec)
    metric = NavigationMetric(spec)
    points = sample_points(spec, rng, samples, center=center, radius=radius, min_margin=min_margin)
    flags = sample_flags(metric, points, rng, step=fd_step, spray_step=spray_step)
    flag_mean, flag_std = flag_statistics(flags)
    residuals = attrs.evolve(
        cfc_residuals(metric.randers_data, K, spec.sigma, points, step=fd_step),
        sampled_flag_std=flag_std,
    )
    homothety = max(float(np.linalg.norm(homothety_residual(spec, x))) for x in points)

    checks = {
        "flag_mean": abs(flag_mean - K),
        "flag_std": flag_std,
        "basic": residuals.basic,
        "curvature": residuals.curvature,
        "sigma": residuals.sigma_residual,
        "homothety": homothety,
        "matsumoto": 0.0 if matsumoto_check(K, spec.sigma) else math.inf,
    }
    if expect:
        checks.update(_expectation_errors(spec, expect, flag_mean, K, tol_eig))
    failed = [name for name, error in checks.items() if not error <= tol]
    worst = max(failed, key=lambda name: checks[name]) if failed else None
    report = VerificationReport(
        K=K,
        sigma=spec.sigma,
        samples=samples,
        tol=tol,
        flag_mean=flag_mean,
        flag_std=flag_std,
        residuals=residuals,
        homothety=homothety,
        checks=checks,
        failed=failed,
        worst=worst,
    )
    logging.info(
        "Verification %s: flag curvature %.8f +- %.2e (claimed %.8f), worst %s",
        "PASS" if report.passed else "FAIL", flag_mean, flag_std, K, worst,
    )
    return report
