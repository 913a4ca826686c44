"""Тесты отображения Reverse, цилиндров и коцикла D."""

import itertools
import math

import numpy as np
import pytest
from scipy import integrate

from reverse_hub.core.exactlin import matrix_norm_2x2, normalize_to_simplex
from reverse_hub.core.exceptions import (
    DomainError,
    OrbitTerminatedError,
    ResourceLimitError,
)
from reverse_hub.core.reverse_cfa import (
    BRANCH_MATRICES,
    PI_MATRIX,
    SORTED_BRANCHES,
    Branch,
    classify,
    classify_batch,
    cocycle_matrix,
    cylinder_data,
    d_field,
    dual_classify,
    dual_step,
    dual_step_batch,
    h_matrix,
    in_dual_domain,
    jacobian,
    jump_step,
    max_log_d_norm,
    orbit,
    point_in_cylinder,
    renyi_ratio,
    row_norm_check,
    sorted_branch_product,
    sorted_classify,
    sorted_cylinder_data,
    sorted_d_field,
    sorted_step,
    step,
    step_batch,
)


def _random_word(rng, low=1, high=30, alphabet="1234"):
    return "".join(rng.choice(list(alphabet), size=int(rng.integers(low, high + 1))))


def _all_words(length, alphabet="1234"):
    return ("".join(p) for p in itertools.product(alphabet, repeat=length))


# --- Ветви и шаг отображения ---


def test_classify_examples():
    assert classify((0.6, 0.3, 0.1)) == Branch.ONE
    assert classify((1, 1, 1)) == Branch.FOUR
    assert classify((0.2, 0.25, 0.55)) == Branch.THREE
    # Граница 2x_i = 1 относится к ветви 4
    assert classify((0.5, 0.25, 0.25)) == Branch.FOUR


def test_step_examples():
    image, branch = step((0.6, 0.3, 0.1))
    assert branch == Branch.ONE
    assert tuple(image) == pytest.approx((1 / 3, 1 / 2, 1 / 6))

    image, branch = step((0.2, 0.6, 0.2))
    assert branch == Branch.TWO
    assert tuple(image) == pytest.approx((1 / 3, 1 / 3, 1 / 3))

    image, branch = step((1, 1, 1))
    assert branch == Branch.FOUR
    assert tuple(image) == pytest.approx((1 / 3, 1 / 3, 1 / 3))


def test_step_terminates_at_gasket_boundary():
    # (1/3, 1/2, 1/6) лежит в Δ(4), образ имеет нулевую координату
    with pytest.raises(OrbitTerminatedError):
        step(normalize_to_simplex((2, 3, 1)))


def test_orbit_of_fixed_point():
    points, word = orbit((1, 1, 1), 4)
    assert word == "4444"
    assert len(points) == 5
    assert tuple(points[-1]) == pytest.approx((1 / 3,) * 3)


def test_batch_step_agrees_with_scalar(rng):
    points = rng.dirichlet([1.0, 1.0, 1.0], size=300)
    images, branches = step_batch(points)
    assert np.array_equal(branches, classify_batch(points))
    for x, y, b in zip(points, images, branches):
        image, branch = step(x)
        assert int(branch) == b
        assert np.allclose(image.as_array(), y, atol=1e-12)


def test_reconstruction_from_orbit(rng):
    checked = 0
    for _ in range(100):
        x = rng.dirichlet([1.0, 1.0, 1.0])
        n = int(rng.integers(1, 21))
        try:
            points, word = orbit(x, n)
        except OrbitTerminatedError:
            continue
        rebuilt = point_in_cylinder(word, points[-1])
        assert np.allclose(rebuilt.as_array(), x / x.sum(), atol=1e-7)
        checked += 1
    assert checked > 90


# --- Коцикл и цилиндры ---


def test_cocycle_matrix_examples():
    assert cocycle_matrix("").rows == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert cocycle_matrix("1").rows == ((1, 0, 0), (1, 1, 0), (1, 0, 1))
    assert cocycle_matrix("1" * 7).rows == ((1, 0, 0), (7, 1, 0), (7, 0, 1))


def test_word_length_guard():
    with pytest.raises(ResourceLimitError):
        cocycle_matrix("4" * 40)
    with pytest.raises(ValueError):
        cocycle_matrix("125")


def test_cylinder_examples():
    first = cylinder_data("1")
    assert first.leb_area == pytest.approx(1 / 8)
    assert [tuple(v) for v in first.vertices] == [
        pytest.approx((1.0, 0.0, 0.0)),
        pytest.approx((0.5, 0.5, 0.0)),
        pytest.approx((0.5, 0.0, 0.5)),
    ]
    assert cylinder_data("").leb_area == pytest.approx(0.5)

    fourth = cylinder_data("4")
    assert fourth.det == 2
    assert fourth.leb_area == pytest.approx(1 / 8)
    for vertex, row in zip(fourth.vertices, cocycle_matrix("4").rows):
        assert np.allclose(vertex.as_array(), np.array(row) / sum(row))


def test_determinant_counts_branch_four():
    for length in range(1, 6):
        for word in _all_words(length):
            assert cylinder_data(word).det == 2 ** word.count("4")


@pytest.mark.slow
def test_determinant_counts_branch_four_long_words():
    for length in range(6, 11):
        for word in _all_words(length):
            assert cocycle_matrix(word).det == 2 ** word.count("4")


def test_area_formula(rng):
    for _ in range(300):
        word = _random_word(rng, high=12)
        cylinder = cylinder_data(word)
        r0, r1, r2 = cylinder.row_norms
        assert cylinder.leb_area == pytest.approx(
            cylinder.det / (2 * r0 * r1 * r2), rel=1e-12
        )


def test_cylinders_partition_the_simplex():
    for depth in (1, 4):
        areas = [cylinder_data(word).leb_area for word in _all_words(depth)]
        assert math.fsum(areas) == pytest.approx(0.5, abs=1e-12)

    parent = cylinder_data("42").leb_area
    children = math.fsum(cylinder_data("42" + s).leb_area for s in "1234")
    assert children == pytest.approx(parent, rel=1e-12)


def test_rank_one_cylinders_are_full():
    for i in (1, 2, 3, 4):
        inverse = np.linalg.inv(BRANCH_MATRICES[i].to_numpy())
        for m, vertex in enumerate(cylinder_data(str(i)).vertices):
            image = inverse @ vertex.as_array()
            assert np.allclose(image / image.sum(), np.eye(3)[m], atol=1e-12)


def test_jacobian_examples():
    assert jacobian("", (0.2, 0.3, 0.5)) == pytest.approx(1.0)
    assert jacobian("1", (1, 1, 1)) == pytest.approx(27 / 125)


def test_jacobian_integrates_to_cylinder_area():
    word = "14"

    def integrand(x2, x1):
        return jacobian(word, (1.0 - x1 - x2, x1, x2))

    value, _ = integrate.dblquad(
        integrand, 0.0, 1.0, 0.0, lambda x1: 1.0 - x1, epsabs=1e-10
    )
    assert value == pytest.approx(cylinder_data(word).leb_area, abs=1e-6)


def test_renyi_ratio():
    for n in range(1, 12):
        assert renyi_ratio("1" * n) == pytest.approx((n + 1) ** 3)
    assert renyi_ratio("4") == pytest.approx(1.0)


def test_renyi_condition_after_branch_four(rng):
    for _ in range(2000):
        assert renyi_ratio(_random_word(rng, high=30) + "4") < 8.0


def test_row_norm_check(rng):
    assert row_norm_check("1")
    assert row_norm_check("1" * 10)
    for _ in range(5000):
        assert row_norm_check(_random_word(rng, high=30))


# --- Скачковое преобразование ---


def test_jump_step_examples():
    point, k, word = jump_step((1, 1, 1))
    assert (k, word) == (1, "4")
    assert tuple(point) == pytest.approx((1 / 3,) * 3)

    x = (0.62, 0.27, 0.11)
    point, k, word = jump_step(x)
    points, replay = orbit(x, k)
    assert word == replay == "14"
    assert tuple(point) == pytest.approx(tuple(points[-1]))


def test_jump_step_words_end_with_four(rng):
    for _ in range(50):
        try:
            _, k, word = jump_step(rng.dirichlet([1.0, 1.0, 1.0]))
        except OrbitTerminatedError:
            continue
        assert word.endswith("4")
        assert "4" not in word[:-1]
        assert len(word) == k


def test_jump_step_iteration_cap():
    with pytest.raises(ResourceLimitError):
        jump_step((0.98, 0.01, 0.01), cap=1)


# --- Коцикл D ---


def test_d_field_of_empty_word_is_identity(rng):
    field = d_field("")
    for x in rng.dirichlet([1.0, 1.0, 1.0], size=10):
        assert np.allclose(field.at(x), np.eye(2))


def test_d_field_matches_definition(rng):
    for _ in range(100):
        word = _random_word(rng, high=8)
        x = rng.dirichlet([1.0, 1.0, 1.0])
        direct = PI_MATRIX @ cocycle_matrix(word).to_numpy() @ h_matrix(x)
        assert np.allclose(d_field(word).at(x), direct, rtol=1e-12, atol=1e-9)


def test_d_is_a_cocycle(rng):
    checked = 0
    for _ in range(100):
        x = rng.dirichlet([1.0, 1.0, 1.0])
        try:
            points, word = orbit(x, 6)
        except OrbitTerminatedError:
            continue
        m = int(rng.integers(0, 7))
        u, v = word[:m], word[m:]
        composed = d_field(v).at(points[m]) @ d_field(u).at(x)
        assert np.allclose(d_field(word).at(x), composed, rtol=1e-8, atol=1e-8)
        checked += 1
    assert checked > 90


def test_h_pi_identity_along_orbits(rng):
    for _ in range(100):
        x = rng.dirichlet([1.0, 1.0, 1.0])
        try:
            points, word = orbit(x, 5)
        except OrbitTerminatedError:
            continue
        a = cocycle_matrix(word).to_numpy()
        lhs = h_matrix(points[-1]) @ PI_MATRIX @ a @ h_matrix(x)
        assert np.allclose(lhs, a @ h_matrix(x), rtol=1e-8, atol=1e-8)


def test_max_log_d_norm_on_powers_of_one():
    for n in range(2, 10):
        assert max_log_d_norm(cylinder_data("1" * n), "induced") == pytest.approx(
            0.0, abs=1e-12
        )


def test_max_log_d_norm_dominates_cylinder(rng):
    cylinder = cylinder_data("4")
    field = d_field("4")
    top = max_log_d_norm(cylinder, "induced")
    for y in rng.dirichlet([1.0, 1.0, 1.0], size=10_000):
        x = point_in_cylinder("4", y)
        assert math.log(matrix_norm_2x2(field.at(x), "induced")) <= top + 1e-12

    center = cylinder.vertex_coordinates().mean(axis=0)
    assert math.log(matrix_norm_2x2(field.at(center), "induced")) <= top


# --- Отсортированный вариант ---


def test_sorted_first_branch_is_branch_one():
    assert SORTED_BRANCHES["a"].matrix == BRANCH_MATRICES[1]


def test_sorted_classify_examples():
    assert sorted_classify((0.9, 0.8)).code == "d"
    assert sorted_classify((0.3, 0.1)).code == "a"
    assert sorted_classify((0.45, 0.2)).code == "b"
    assert sorted_classify((0.4, 0.35)).code == "c"
    with pytest.raises(DomainError):
        sorted_classify((0.2, 0.5))


def test_sorted_step_example():
    image, symbol = sorted_step((0.3, 0.1))
    assert symbol.code == "a"
    assert image == pytest.approx((0.5, 1 / 6))


def test_sorted_step_stays_in_domain(rng):
    for _ in range(500):
        x1, x2 = sorted(rng.random(2), reverse=True)
        if not 1 - x1 > 1e-6 or not x1 - x2 > 1e-6 or not x2 > 1e-6:
            continue
        try:
            image, symbol = sorted_step((x1, x2))
        except OrbitTerminatedError:
            continue
        assert 1.0 > image[0] > image[1] > 0.0

        back = sorted_branch_product(symbol.code).apply((1.0, *image))
        assert back[1:] / back[0] == pytest.approx((x1, x2), rel=1e-9)


def test_sorted_cylinders_partition_domain():
    for depth in (1, 2):
        areas = [sorted_cylinder_data(w).leb_area for w in _all_words(depth, "abcd")]
        assert math.fsum(areas) == pytest.approx(0.5, abs=1e-12)
    assert abs(sorted_cylinder_data("d").det) == 2


def test_sorted_d_field_of_empty_word():
    assert np.allclose(sorted_d_field("").evaluate(0.4, 0.1), np.eye(2))


# --- Двойственное отображение ---


def test_dual_boundary_is_rejected():
    assert not in_dual_domain((0.5, 0.5))
    with pytest.raises(DomainError):
        dual_step((0.5, 0.5))
    with pytest.raises(DomainError):
        dual_classify((0.2, 0.2))


def test_dual_step_examples():
    assert dual_classify((0.9, 0.7)).code == "d"
    image = dual_step((0.9, 0.7))
    assert in_dual_domain(image)


def test_dual_domain_is_preserved(rng):
    # Равномерные точки области через барицентрические координаты конуса
    weights = rng.dirichlet([1.0, 1.0, 1.0], size=10_000)
    a, b, c = weights.T
    homogeneous = a[:, None] * [0.0, 1.0, 1.0] + b[:, None] * [1.0, 0.0, 1.0]
    homogeneous += c[:, None] * [1.0, 1.0, 0.0]
    points = homogeneous[:, 1:] / homogeneous[:, :1]

    for _ in range(100):
        points = dual_step_batch(points)
        y1, y2 = points[:, 0], points[:, 1]
        assert np.all(y1 + y2 >= 1.0 - 1e-9)
        assert np.all(np.abs(y1 - y2) <= 1.0 + 1e-9)
        assert np.all(points > 0.0)


def test_dual_batch_agrees_with_scalar(rng):
    points = np.array(
        [[0.9, 0.7], [0.6, 0.9], [1.5, 0.9], [0.7, 1.2], [1.8, 1.6], [1.2, 0.3]]
    )
    images = dual_step_batch(points)
    for y, expected in zip(points, images):
        assert dual_step(y) == pytest.approx(tuple(expected))
