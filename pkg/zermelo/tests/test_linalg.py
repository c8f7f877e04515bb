# tests/test_linalg.py

import numpy as np
import pytest
from zermelo.errors import ValidationError
from zermelo.utils.linalg import check_skew, check_symmetric, skew_eigen, spd_check
from zermelo.tests.utils.model_utils import random_orthogonal, random_skew


def test_spd_check_reports_smallest_eigenvalue():
    ok, margin = spd_check(np.diag([2.0, 0.5, 1.0]))
    assert ok
    assert margin == pytest.approx(0.5)
    ok, margin = spd_check(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert not ok
    assert margin == pytest.approx(-1.0)


def test_spd_check_rejects_asymmetric_input():
    with pytest.raises(ValidationError):
        spd_check(np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_check_skew_and_symmetric_shapes():
    with pytest.raises(ValidationError):
        check_skew(np.zeros((2, 3)))
    with pytest.raises(ValidationError):
        check_skew(np.eye(2))
    with pytest.raises(ValidationError):
        check_symmetric(np.array([[0.0, 1.0], [-1.0, 0.0]]))


def test_skew_eigen_of_known_blocks(rng):
    g = random_orthogonal(rng, 5)
    blocks = np.zeros((5, 5))
    blocks[0, 1], blocks[1, 0] = 1.0, -1.0
    blocks[2, 3], blocks[3, 2] = 3.0, -3.0
    omega = g @ blocks @ g.T
    pairing = skew_eigen(omega)
    np.testing.assert_allclose(pairing.values, [3.0, 1.0], atol=1e-12)
    assert pairing.kernel_basis.shape == (5, 1)
    np.testing.assert_allclose(pairing.reconstruct(), omega, atol=1e-12)
    basis = pairing.basis()
    np.testing.assert_allclose(basis.T @ basis, np.eye(5), atol=1e-12)


def test_skew_eigen_planes_carry_positive_orientation(rng, trials):
    for _ in range(trials):
        omega = random_skew(rng, 4)
        pairing = skew_eigen(omega)
        for a, (u, v) in zip(pairing.values, pairing.plane_bases):
            assert u @ omega @ v == pytest.approx(a, abs=1e-10)
            assert a > 0.0


def test_skew_eigen_zero_matrix_is_all_kernel():
    pairing = skew_eigen(np.zeros((3, 3)))
    assert pairing.values == ()
    assert pairing.kernel_basis.shape == (3, 3)


def _leading_minors_positive(m):
    return all(np.linalg.det(m[:k, :k]) > 0.0 for k in range(1, m.shape[0] + 1))


def test_spd_check_agrees_with_leading_minors(rng, trials):
    for _ in range(trials):
        n = int(rng.integers(2, 6))
        B = rng.standard_normal((n, n - 1))
        low_rank = B @ B.T
        low_rank = 0.5 * (low_rank + low_rank.T)
        S = rng.standard_normal((n, n))
        candidates = (
            low_rank + 1.0e-3 * np.eye(n),
            low_rank - 1.0e-3 * np.eye(n),
            S + S.T,
            S @ S.T + 0.1 * np.eye(n),
        )
        for m in candidates:
            ok, margin = spd_check(m)
            assert bool(ok) == _leading_minors_positive(m)
            assert margin == pytest.approx(np.linalg.eigvalsh(m)[0], abs=1e-12)
