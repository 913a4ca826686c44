"""Тесты точной линейной алгебры и проекций."""

import numpy as np
import pytest

from reverse_hub.core.exactlin import (
    IntMatrix3,
    SimplexPoint,
    closed_simplex_point,
    induced_inf_norm,
    induced_one_norm_2x2,
    inf_norm_restricted,
    mat_det,
    mat_mul,
    matrix_norm_2x2,
    normalize_to_simplex,
    pi_projection,
    projection_matrix,
)
from reverse_hub.core.exceptions import (
    CocycleOverflowError,
    DegenerateGeometryError,
    DomainError,
)
from reverse_hub.core.reverse_cfa import BRANCH_MATRICES

M1, M2, M4 = BRANCH_MATRICES[1], BRANCH_MATRICES[2], BRANCH_MATRICES[4]


def test_mat_mul_examples():
    assert mat_mul(M1, IntMatrix3.identity()) == M1
    assert (M4 @ M4).rows == ((2, 1, 1), (1, 2, 1), (1, 1, 2))


def test_determinants():
    assert mat_det(IntMatrix3.identity()) == 1
    assert [BRANCH_MATRICES[i].det for i in (1, 2, 3, 4)] == [1, 1, 1, 2]
    assert (M1 @ M4 @ M2).det == 2


def test_det_multiplicativity(rng):
    for _ in range(200):
        a = IntMatrix3.from_numpy(rng.integers(0, 6, size=(3, 3)))
        b = IntMatrix3.from_numpy(rng.integers(0, 6, size=(3, 3)))
        assert mat_det(a @ b) == mat_det(a) * mat_det(b)


def test_overflow_is_an_error():
    with pytest.raises(CocycleOverflowError):
        IntMatrix3(((2**63, 0, 0), (0, 1, 0), (0, 0, 1)))

    big = IntMatrix3(((2**62, 0, 0), (0, 1, 0), (0, 0, 1)))
    double = IntMatrix3(((2, 0, 0), (0, 1, 0), (0, 0, 1)))
    with pytest.raises(CocycleOverflowError):
        big @ double


def test_matrix_shape_validation():
    with pytest.raises(ValueError):
        IntMatrix3(((1, 0), (0, 1)))


def test_normalize_to_simplex():
    assert tuple(normalize_to_simplex((2, 1, 1))) == pytest.approx((0.5, 0.25, 0.25))
    assert tuple(normalize_to_simplex((1, 1, 1))) == pytest.approx((1 / 3,) * 3)
    assert tuple(normalize_to_simplex((3, 2, 1))) == pytest.approx((0.5, 1 / 3, 1 / 6))

    with pytest.raises(DomainError):
        normalize_to_simplex((1, 0, 1))
    with pytest.raises(DomainError):
        normalize_to_simplex((-1, 2, 1))


def test_simplex_point_invariants():
    with pytest.raises(DomainError):
        SimplexPoint(0.5, 0.5, 0.1)
    with pytest.raises(DomainError):
        SimplexPoint(1.2, -0.1, -0.1)

    corner = closed_simplex_point((3, 0, 0))
    assert tuple(corner) == (1.0, 0.0, 0.0)
    assert not corner.is_interior
    assert SimplexPoint.from_dict(corner.to_dict()) == corner


def test_pi_projection_examples():
    v, w = (1, 2, 3), (1, 1, 1)
    x = np.array([1.0, -1.0, 0.0])
    assert np.allclose(pi_projection(v, w, x), x)
    assert np.allclose(pi_projection(v, w, v), 0.0)
    assert np.allclose(
        pi_projection((1, 1, 1), (1, 1, 1), (1, 0, 0)), (2 / 3, -1 / 3, -1 / 3)
    )


def test_pi_projection_properties(rng):
    for _ in range(200):
        v, w = rng.random(3) + 0.01, rng.random(3) + 0.01
        x = rng.normal(size=3)
        image = pi_projection(v, w, x)
        assert abs(image @ w) <= 1e-10 * np.abs(x).max() * np.abs(w).max()
        assert np.allclose(pi_projection(v, w, image), image, atol=1e-10)
        assert np.allclose(pi_projection(2.5 * v, 3.0 * w, x), image, atol=1e-12)


def test_projection_onto_ones_plane_is_bounded(rng):
    ones = np.ones(3)
    for _ in range(200):
        w = rng.random(3)
        if w.sum() == 0:
            continue
        assert induced_inf_norm(projection_matrix(w, ones)) <= 2.0 + 1e-12


def test_degenerate_projection():
    with pytest.raises(DegenerateGeometryError):
        pi_projection((1, -1, 0), (1, 1, 0), (1, 2, 3))
    with pytest.raises(DegenerateGeometryError):
        projection_matrix((1, -1, 0), (1, 1, 0))


def test_inf_norm_restricted_examples(rng):
    assert inf_norm_restricted(IntMatrix3.identity(), (1, 1, 1)) == pytest.approx(1.0)
    for _ in range(20):
        w = rng.normal(size=3)
        assert inf_norm_restricted(2.0 * np.eye(3), w) == pytest.approx(2.0)

    with pytest.raises(DegenerateGeometryError):
        inf_norm_restricted(np.eye(3), (0, 0, 0))


def test_inf_norm_restricted_bounds(rng):
    for _ in range(100):
        m = rng.normal(size=(3, 3))
        w = rng.normal(size=3)
        value = inf_norm_restricted(m, w)
        assert value <= induced_inf_norm(m) + 1e-12

        # Случайные векторы плоскости не превосходят максимума по вершинам
        samples = rng.normal(size=(200, 3))
        samples -= np.outer(samples @ w / (w @ w), w)
        samples /= np.abs(samples).max(axis=1, keepdims=True)
        assert np.abs(samples @ m.T).max() <= value + 1e-9


def test_two_by_two_norms():
    assert induced_one_norm_2x2([[1, 0], [0, 1]]) == 1.0
    assert induced_one_norm_2x2([[-1, 2], [3, -4]]) == 6.0
    assert induced_one_norm_2x2([[0, 0], [0, 0]]) == 0.0

    m = [[1, -2], [3, 4]]
    assert matrix_norm_2x2(m, "induced") == 6.0
    assert matrix_norm_2x2(m, "entrywise") == 10.0
    assert matrix_norm_2x2(m, "row") == 7.0
    with pytest.raises(ValueError):
        matrix_norm_2x2(m, "spectral")
