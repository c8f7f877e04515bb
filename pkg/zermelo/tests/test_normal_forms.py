# tests/test_normal_forms.py

import numpy as np
import pytest
from zermelo.errors import ValidationError
from zermelo.models.catalog import get_example
from zermelo.models.normal_forms import (
    BlockNormalForm,
    LORENTZ,
    S,
    T,
    block_matrix,
    check_lorentz_algebra,
    euclidean_normal_form,
    lorentz_classify,
    lorentz_normal_form,
    minkowski_metric,
    skew_normal_form,
)
from zermelo.tests.utils.model_utils import (
    lorentz_algebra_element,
    random_lorentz,
    random_orthogonal,
    random_skew,
)


def _lorentz_canonical(subtype, a, n):
    form = BlockNormalForm(family=LORENTZ, subtype=subtype, a=np.asarray(a, dtype=float), conjugator=np.eye(n + 1), dim=n)
    return form.canonical()


def _assert_sound(form, omega, tol_recon=1e-9):
    assert form.group_residual() <= 1e-10
    assert form.reconstruction_residual(omega) <= tol_recon * (1.0 + np.linalg.norm(omega))


@pytest.mark.parametrize("size", [2, 3, 4, 5, 6])
def test_skew_normal_form_recovers_parameters(rng, trials, size):
    for _ in range(trials):
        values = np.sort(rng.uniform(0.1, 2.0, size // 2))[::-1]
        g = random_orthogonal(rng, size)
        omega = g.T @ block_matrix(values, size) @ g
        form = skew_normal_form(omega)
        np.testing.assert_allclose(form.a, values, atol=1e-8)
        _assert_sound(form, omega)


def test_skew_normal_form_pads_with_zeros():
    omega = np.zeros((5, 5))
    omega[0, 1], omega[1, 0] = 2.0, -2.0
    form = skew_normal_form(omega)
    np.testing.assert_allclose(form.a, [2.0, 0.0])


def test_skew_normal_form_rejects_non_skew():
    with pytest.raises(ValidationError):
        skew_normal_form(np.eye(3))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_euclidean_normal_form_sigma_zero(rng, trials, n):
    for _ in range(trials):
        Q = random_skew(rng, n)
        C = rng.standard_normal(n)
        form = euclidean_normal_form(Q, C, 0.0)
        omega = np.zeros((n + 1, n + 1))
        omega[:n, :n] = -Q
        omega[n, :n] = C
        _assert_sound(form, omega)
        assert form.extra >= 0.0


def test_euclidean_normal_form_known_cases():
    Q = np.zeros((3, 3))
    Q[0, 1], Q[1, 0] = 1.0, -1.0
    rotating = euclidean_normal_form(Q, np.zeros(3), 0.0)
    np.testing.assert_allclose(rotating.a, [0.0, 1.0], atol=1e-12)
    constant = euclidean_normal_form(np.zeros((3, 3)), [0.3, 0.2, 0.1], 0.0)
    np.testing.assert_allclose(constant.a, [np.sqrt(0.14), 0.0], atol=1e-12)
    # C in the range of Q is translated away
    screw_free = euclidean_normal_form(Q, [0.5, -0.2, 0.0], 0.0)
    assert screw_free.extra == pytest.approx(0.0, abs=1e-12)


def test_euclidean_normal_form_even_dimension_branches():
    Q = np.zeros((4, 4))
    Q[0, 1], Q[1, 0] = 1.0, -1.0
    rotational = euclidean_normal_form(Q, np.zeros(4), 0.0)
    assert rotational.branch == "rotational"
    np.testing.assert_allclose(rotational.a, [1.0, 0.0], atol=1e-12)
    translational = euclidean_normal_form(Q, [0.0, 0.0, 0.0, 0.5], 0.0)
    assert translational.branch == "translational"
    np.testing.assert_allclose(translational.a, [0.5, 1.0], atol=1e-12)


def test_euclidean_normal_form_with_homothety(rng):
    Q = random_skew(rng, 3)
    C = rng.standard_normal(3)
    form = euclidean_normal_form(Q, C, 1.5)
    omega = np.zeros((4, 4))
    omega[:3, :3] = -0.75 * np.eye(3) - Q
    omega[3, :3] = C
    _assert_sound(form, omega)
    assert form.subtype == "flat-sigma"
    assert form.canonical()[3, :3] == pytest.approx(np.zeros(3), abs=1e-12)


def test_euclidean_normal_form_ignores_roundoff_sigma():
    tank = get_example("3.2.1").build()
    form = euclidean_normal_form(tank.Q, tank.C, 1.0e-17)
    assert form.subtype == "flat-sigma0"
    assert form.sigma == 0.0
    np.testing.assert_allclose(form.a, [0.0, 1.0], atol=1e-12)


def test_canonical_blocks_are_in_the_lorentz_algebra():
    for subtype, a in (("J", [1.0, 0.5]), ("S", [0.7, 0.3]), ("T", [1.3, 0.2])):
        check_lorentz_algebra(_lorentz_canonical(subtype, a, 4))
    np.testing.assert_allclose(_lorentz_canonical("S", [2.0, 0.0], 3)[:2, :2], 2.0 * S)
    np.testing.assert_allclose(_lorentz_canonical("T", [1.0, 0.0], 3)[:3, :3], T)


def test_check_lorentz_algebra_rejects_skew_matrix():
    omega = np.zeros((3, 3))
    omega[0, 1], omega[1, 0] = 1.0, -1.0
    with pytest.raises(ValidationError):
        check_lorentz_algebra(omega)


@pytest.mark.parametrize(
    "subtype,a,n,atol",
    [
        ("J", [1.2, 0.4], 4, 1e-8),
        ("J", [0.8, 0.0], 3, 1e-8),
        ("S", [0.9, 0.5], 3, 1e-8),
        ("S", [0.6, 1.1], 4, 1e-8),
    ],
)
def test_lorentz_construct_then_recover(rng, subtype, a, n, atol):
    canonical = _lorentz_canonical(subtype, a, n)
    for _ in range(15):
        g = random_lorentz(rng, n, scale=0.3)
        eta = minkowski_metric(n)
        omega = (eta @ g.T @ eta) @ canonical @ g
        assert lorentz_classify(omega) == subtype
        form = lorentz_normal_form(omega)
        assert form.subtype == subtype
        np.testing.assert_allclose(form.a, a, atol=atol)
        _assert_sound(form, omega)
        assert form.conjugator[0, 0] >= 1.0 - 1e-12


@pytest.mark.parametrize(
    "example_id,subtype,a",
    [("3.3.1", "J", [1.0, 0.0]), ("3.3.2", "S", [0.3, 0.3]), ("3.3.3", "T", [1.0, 0.0])],
)
def test_klein_examples_have_expected_subtypes(example_id, subtype, a):
    omega = get_example(example_id).build().to_embedding()
    form = lorentz_normal_form(omega)
    assert form.subtype == subtype
    np.testing.assert_allclose(form.a, a, atol=1e-9)
    _assert_sound(form, omega)


def test_parabolic_construct_then_recover(rng):
    # the scale of a T block depends on the frame; the trailing rotation does not
    canonical = _lorentz_canonical("T", [0.7, 1.5], 4)
    eta = minkowski_metric(4)
    for _ in range(15):
        g = random_lorentz(rng, 4, scale=0.3)
        omega = (eta @ g.T @ eta) @ canonical @ g
        form = lorentz_normal_form(omega)
        assert form.subtype == "T"
        assert form.a[0] > 0.0
        assert form.a[1] == pytest.approx(1.5, abs=1e-7)
        _assert_sound(form, omega)


def test_lorentz_subtype_is_conjugation_invariant(rng, trials):
    for example_id in ("3.3.1", "3.3.2", "3.3.3"):
        omega = get_example(example_id).build().to_embedding()
        expected = lorentz_classify(omega)
        eta = minkowski_metric(3)
        for _ in range(trials):
            g = random_lorentz(rng, 3, scale=0.4)
            assert lorentz_classify(g @ omega @ eta @ g.T @ eta) == expected


def test_random_lorentz_elements_give_sound_forms(rng, trials):
    for _ in range(trials):
        omega = lorentz_algebra_element(rng.standard_normal(3), random_skew(rng, 3))
        form = lorentz_normal_form(omega)
        assert form.subtype in ("J", "S", "T")
        _assert_sound(form, omega)


def test_to_dict_lists_parameters():
    form = skew_normal_form(block_matrix([1.0], 3))
    data = form.to_dict(block_matrix([1.0], 3))
    assert data["family"] == "O"
    assert data["a"] == [1.0]
    assert data["reconstruction_residual"] == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("example_id,subtype", [("3.3.1", "J"), ("3.3.3", "T"), ("3.3.2", "S")])
def test_lorentz_parameters_are_padded_to_half_dimension(example_id, subtype):
    form = lorentz_normal_form(get_example(example_id).build().to_embedding())
    assert form.subtype == subtype
    assert form.a.shape == (2,)
    if subtype != "S":
        assert form.a[-1] == pytest.approx(0.0, abs=1e-12)
