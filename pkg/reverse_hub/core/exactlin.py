"""Точная целочисленная линейная алгебра 3×3 и геометрические примитивы."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from reverse_hub.core.exceptions import (
    CocycleOverflowError,
    DegenerateGeometryError,
    DomainError,
)

INT64_MAX = 2**63 - 1

# Допуск классификации вершин многоугольника w⊥ ∩ ∂[-1,1]³
VERTEX_TOLERANCE = 1e-12

NORM_KINDS = ("induced", "entrywise", "row")


def _checked(value: int) -> int:
    if abs(value) > INT64_MAX:
        raise CocycleOverflowError(value, INT64_MAX)
    return value


@dataclass(frozen=True)
class IntMatrix3:
    """
    Точная матрица 3×3 с целыми элементами в диапазоне int64.

    Произведения хранятся как кортежи Python int, каждый элемент
    проверяется на выход за пределы знакового 64-битного целого.
    """

    rows: tuple

    def __post_init__(self):
        """Проверяет форму и диапазон элементов."""
        if len(self.rows) != 3 or any(len(r) != 3 for r in self.rows):
            raise ValueError("Матрица должна иметь размер 3×3")
        rows = tuple(tuple(_checked(int(v)) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)

    @classmethod
    def identity(cls) -> IntMatrix3:
        """Единичная матрица."""
        return cls(((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    @classmethod
    def from_numpy(cls, array) -> IntMatrix3:
        """Создает матрицу из массива numpy целого типа."""
        return cls(tuple(tuple(int(v) for v in row) for row in array))

    def __getitem__(self, index):
        i, j = index
        return self.rows[i][j]

    def __matmul__(self, other: IntMatrix3) -> IntMatrix3:
        return mat_mul(self, other)

    @property
    def T(self) -> IntMatrix3:
        """Транспонированная матрица."""
        return IntMatrix3(tuple(zip(*self.rows)))

    @property
    def det(self) -> int:
        """Точный определитель."""
        return mat_det(self)

    def row_norms(self) -> tuple:
        """1-нормы строк."""
        return tuple(sum(abs(v) for v in r) for r in self.rows)

    def apply(self, v) -> np.ndarray:
        """Действие матрицы на вещественный вектор."""
        return self.to_numpy() @ np.asarray(v, dtype=float)

    def to_numpy(self, dtype=float) -> np.ndarray:
        """Копия в виде массива numpy."""
        return np.array(self.rows, dtype=dtype)

    def to_list(self) -> list:
        """Представление для JSON."""
        return [list(r) for r in self.rows]


def mat_mul(a: IntMatrix3, b: IntMatrix3) -> IntMatrix3:
    """
    Точное произведение матриц с контролем переполнения.

    Raises:
        CocycleOverflowError: Если элемент не помещается в int64
    """
    cols = tuple(zip(*b.rows))
    return IntMatrix3(
        tuple(
            tuple(_checked(sum(x * y for x, y in zip(row, col))) for col in cols)
            for row in a.rows
        )
    )


def mat_det(a: IntMatrix3) -> int:
    """Точный знаковый определитель (разложение по первой строке)."""
    (a00, a01, a02), (a10, a11, a12), (a20, a21, a22) = a.rows
    return _checked(
        a00 * (a11 * a22 - a12 * a21)
        - a01 * (a10 * a22 - a12 * a20)
        + a02 * (a10 * a21 - a11 * a20)
    )


@dataclass(frozen=True)
class SimplexPoint:
    """
    Точка замкнутого симплекса Δ = {x ≥ 0 : x0 + x1 + x2 = 1}.

    Вершины цилиндров могут лежать на границе, поэтому нулевые
    координаты допустимы; внутренность проверяется через is_interior.
    """

    x0: float
    x1: float
    x2: float

    def __post_init__(self):
        """Проверяет принадлежность симплексу."""
        coords = (self.x0, self.x1, self.x2)
        if not all(np.isfinite(c) for c in coords):
            raise DomainError("координаты должны быть конечны", coords)
        if min(coords) < 0:
            raise DomainError("координаты должны быть неотрицательны", coords)
        if abs(sum(coords) - 1.0) > 1e-12:
            raise DomainError("сумма координат должна равняться 1", coords)

    @property
    def is_interior(self) -> bool:
        """Все координаты строго положительны."""
        return min(self.x0, self.x1, self.x2) > 0

    def as_array(self) -> np.ndarray:
        """Координаты в виде массива numpy."""
        return np.array([self.x0, self.x1, self.x2])

    def __iter__(self):
        return iter((self.x0, self.x1, self.x2))

    def to_dict(self) -> dict:
        """Представление для JSON."""
        return {"x0": self.x0, "x1": self.x1, "x2": self.x2}

    @classmethod
    def from_dict(cls, data: dict) -> SimplexPoint:
        """Восстановление из словаря."""
        return cls(data["x0"], data["x1"], data["x2"])


def normalize_to_simplex(v) -> SimplexPoint:
    """
    Проективная нормировка вектора на Δ делением на 1-норму.

    Raises:
        DomainError: Если есть неположительная компонента
    """
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,) or np.any(arr <= 0):
        raise DomainError("все компоненты должны быть положительны", tuple(arr))
    arr = arr / arr.sum()
    return SimplexPoint(*(float(c) for c in arr))


def closed_simplex_point(v) -> SimplexPoint:
    """Нормировка неотрицательного ненулевого вектора (вершины цилиндров)."""
    arr = np.asarray(v, dtype=float)
    if np.any(arr < 0) or arr.sum() <= 0:
        raise DomainError("вектор должен быть неотрицательным и ненулевым", tuple(arr))
    arr = arr / arr.sum()
    return SimplexPoint(*(float(c) for c in arr))


def pi_projection(v, w, x) -> np.ndarray:
    """
    Проекция π_{v,w}(x) = x − ⟨x,w⟩/⟨v,w⟩ · v вдоль v на плоскость w⊥.

    Raises:
        DegenerateGeometryError: Если ⟨v,w⟩ = 0
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    x = np.asarray(x, dtype=float)
    vw = float(v @ w)
    if vw == 0.0:
        raise DegenerateGeometryError("⟨v,w⟩ = 0, проекция не определена")
    return x - (x @ w) / vw * v


def projection_matrix(v, w) -> np.ndarray:
    """Матрица оператора π_{v,w}."""
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    vw = float(v @ w)
    if vw == 0.0:
        raise DegenerateGeometryError("⟨v,w⟩ = 0, проекция не определена")
    return np.eye(3) - np.outer(v, w) / vw


def induced_inf_norm(m) -> float:
    """Классическая ∞-норма: максимум сумм модулей по строкам."""
    return float(np.abs(np.asarray(m, dtype=float)).sum(axis=1).max())


def plane_cube_vertices(w) -> np.ndarray:
    """
    Вершины многоугольника {x ∈ w⊥ : ‖x‖_∞ = 1}.

    Перебираются ребра куба [-1,1]³: две координаты фиксированы
    знаками, третья находится из ⟨x,w⟩ = 0.

    Raises:
        DegenerateGeometryError: Если w = 0
    """
    w = np.asarray(w, dtype=float)
    scale = np.abs(w).max()
    if not np.isfinite(scale) or scale == 0.0:
        raise DegenerateGeometryError("вектор w нулевой")
    w = w / scale

    vertices = []
    for k in range(3):
        i, j = (idx for idx in range(3) if idx != k)
        for si, sj in itertools.product((-1.0, 1.0), repeat=2):
            rhs = -(w[i] * si + w[j] * sj)
            if abs(w[k]) <= VERTEX_TOLERANCE:
                # Ребро целиком в плоскости: берутся оба конца
                if abs(rhs) <= VERTEX_TOLERANCE:
                    candidates = (-1.0, 1.0)
                else:
                    continue
            else:
                t = rhs / w[k]
                if abs(t) > 1.0 + VERTEX_TOLERANCE:
                    continue
                candidates = (float(np.clip(t, -1.0, 1.0)),)
            for t in candidates:
                x = np.empty(3)
                x[i], x[j], x[k] = si, sj, t
                vertices.append(x)

    if not vertices:
        raise DegenerateGeometryError("плоскость w⊥ не пересекает границу куба")
    return np.unique(np.round(np.array(vertices), 14), axis=0)


def inf_norm_restricted(m, w) -> float:
    """
    ‖m|_{w⊥}‖_∞: максимум ‖m·x‖_∞ по x ∈ w⊥ с ‖x‖_∞ = 1.

    Функция выпукла, поэтому максимум достигается в вершинах
    сечения куба плоскостью (не более шести).
    """
    m = m.to_numpy() if isinstance(m, IntMatrix3) else np.asarray(m, dtype=float)
    vertices = plane_cube_vertices(w)
    return float(np.abs(vertices @ m.T).max())


def induced_one_norm_2x2(m) -> float:
    """Норма, индуцированная векторной 1-нормой: максимум сумм по столбцам."""
    m = np.asarray(m, dtype=float)
    return float(np.abs(m).sum(axis=0).max())


def matrix_norm_2x2(m, kind: str = "induced") -> float:
    """
    Норма матрицы 2×2 с переключателем интерпретации.

    Args:
        m: Матрица 2×2
        kind: induced (столбцы), entrywise (сумма модулей) или row (строки)
    """
    m = np.asarray(m, dtype=float)
    if kind == "induced":
        return induced_one_norm_2x2(m)
    if kind == "entrywise":
        return float(np.abs(m).sum())
    if kind == "row":
        return float(np.abs(m).sum(axis=1).max())
    raise ValueError(f"Неизвестная норма '{kind}', допустимо: {', '.join(NORM_KINDS)}")


def batch_norm_2x2(d11, d12, d21, d22, kind: str = "induced"):
    """Векторизованная норма для массивов элементов матриц 2×2."""
    a11, a12, a21, a22 = (np.abs(d) for d in (d11, d12, d21, d22))
    if kind == "induced":
        return np.maximum(a11 + a21, a12 + a22)
    if kind == "entrywise":
        return a11 + a12 + a21 + a22
    if kind == "row":
        return np.maximum(a11 + a12, a21 + a22)
    raise ValueError(f"Неизвестная норма '{kind}', допустимо: {', '.join(NORM_KINDS)}")
