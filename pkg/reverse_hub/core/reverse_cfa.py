"""
Алгоритм Reverse: ветви, отображение f_R, коциклы A и D, цилиндры.

Слова над алфавитом ветвей хранятся строками из символов '1'..'4'.
Для отсортированного варианта используется алфавит 'a'..'d':
a = (1,id), b = (1,(213)), c = (1,(231)), d = (4,(321)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from reverse_hub.core.exactlin import (
    IntMatrix3,
    SimplexPoint,
    closed_simplex_point,
    mat_mul,
    matrix_norm_2x2,
    normalize_to_simplex,
)
from reverse_hub.core.exceptions import (
    DomainError,
    OrbitTerminatedError,
    ResourceLimitError,
)
from reverse_hub.core.utils import SORTED_ALPHABET, validate_word
from reverse_hub.infra.settings import SettingsLoader


class Branch(IntEnum):
    """Ветвь алгоритма: три ветви Арну-Рози и обращающая ветвь 4."""

    ONE = 1
    TWO = 2
    THREE = 3
    FOUR = 4

    @property
    def matrix(self) -> IntMatrix3:
        """Матрица M_i ветви."""
        return BRANCH_MATRICES[int(self)]

    @property
    def symbol(self) -> str:
        """Символ ветви в записи слова."""
        return str(int(self))


BRANCH_MATRICES = {
    1: IntMatrix3(((1, 1, 1), (0, 1, 0), (0, 0, 1))),
    2: IntMatrix3(((1, 0, 0), (1, 1, 1), (0, 0, 1))),
    3: IntMatrix3(((1, 0, 0), (0, 1, 0), (1, 1, 1))),
    4: IntMatrix3(((0, 1, 1), (1, 0, 1), (1, 1, 0))),
}

# Π и постоянная часть H(x)
PI_MATRIX = np.array([[-1.0, 1.0, 0.0], [-1.0, 0.0, 1.0]])

# Обратные матрицы M_i^{-1} для векторизованных итераций
_INVERSE_STACK = np.array(
    [np.linalg.inv(BRANCH_MATRICES[i].to_numpy()) for i in (1, 2, 3, 4)]
)
# Транспонированные матрицы ᵗM_i = A(x) на Δ(i)
_COCYCLE_STACK = np.array([BRANCH_MATRICES[i].T.to_numpy() for i in (1, 2, 3, 4)])


def _tolerance() -> float:
    return SettingsLoader().get("ORBIT_TOLERANCE")


def _as_point(x) -> SimplexPoint:
    if isinstance(x, SimplexPoint):
        return x
    return normalize_to_simplex(x)


def classify(x) -> Branch:
    """
    Определить ветвь точки: i при 2x_i > 1, иначе 4.

    Неравенство строгое для ветвей 1–3, граница относится к ветви 4.
    """
    x = _as_point(x)
    for i, coord in enumerate(x, start=1):
        if 2.0 * coord > 1.0:
            return Branch(i)
    return Branch.FOUR


def step(x) -> tuple[SimplexPoint, Branch]:
    """
    Один шаг f_R(x) = ᵗA(x)⁻¹x / ‖·‖₁.

    Returns:
        Образ точки и использованная ветвь

    Raises:
        OrbitTerminatedError: Если координата образа ниже допуска
    """
    x = _as_point(x)
    branch = classify(x)
    x0, x1, x2 = x
    if branch == Branch.ONE:
        image = ((x0 - x1 - x2) / x0, x1 / x0, x2 / x0)
    elif branch == Branch.TWO:
        image = (x0 / x1, (x1 - x0 - x2) / x1, x2 / x1)
    elif branch == Branch.THREE:
        image = (x0 / x2, x1 / x2, (x2 - x0 - x1) / x2)
    else:
        y = (-x0 + x1 + x2, x0 - x1 + x2, x0 + x1 - x2)
        total = sum(y)
        image = tuple(c / total for c in y)

    low = min(image)
    if low < _tolerance():
        raise OrbitTerminatedError(0, low)
    # Возврат на симплекс без накопления ошибки суммы
    total = sum(image)
    return SimplexPoint(*(c / total for c in image)), branch


def orbit(x, steps: int) -> tuple[list[SimplexPoint], str]:
    """
    Орбита длины steps и ее символическое слово.

    Raises:
        OrbitTerminatedError: С номером шага, на котором сработала защита
    """
    points = [_as_point(x)]
    symbols = []
    for k in range(steps):
        try:
            image, branch = step(points[-1])
        except OrbitTerminatedError as e:
            raise OrbitTerminatedError(k + 1, e.coordinate) from e
        points.append(image)
        symbols.append(branch.symbol)
    return points, "".join(symbols)


def classify_batch(points: np.ndarray) -> np.ndarray:
    """Векторизованная классификация: массив (N, 3) → индексы ветвей 1..4."""
    branches = np.full(points.shape[0], 4, dtype=np.int64)
    for i in (3, 2, 1):
        branches[2.0 * points[:, i - 1] > 1.0] = i
    return branches


def step_batch(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Векторизованный шаг f_R для массива точек (N, 3)."""
    branches = classify_batch(points)
    images = np.einsum("nij,nj->ni", _INVERSE_STACK[branches - 1], points)
    images /= images.sum(axis=1, keepdims=True)
    return images, branches


def branch_product(word) -> IntMatrix3:
    """Произведение M_{a0}⋯M_{a_{n−1}} (столбцы дают вершины цилиндра)."""
    word = validate_word(word)
    product = IntMatrix3.identity()
    for symbol in word:
        product = mat_mul(product, BRANCH_MATRICES[int(symbol)])
    return product


def cocycle_matrix(word) -> IntMatrix3:
    """
    Коцикл A⁽ⁿ⁾ = ᵗ(M_{a0}⋯M_{a_{n−1}}) на цилиндре слова.

    Raises:
        ResourceLimitError: Если слово длиннее MAX_WORD_LENGTH
        CocycleOverflowError: При переполнении int64
    """
    return branch_product(word).T


def point_in_cylinder(word, y) -> SimplexPoint:
    """Образ точки y ∈ Δ под обратными ветвями слова: точка цилиндра Δ(word)."""
    return normalize_to_simplex(branch_product(word).apply(_as_point(y).as_array()))


def shoelace_area(vertices) -> float:
    """Площадь треугольника по формуле шнурка в координатах (x1, x2)."""
    (ax, ay), (bx, by), (cx, cy) = vertices
    return abs((bx - ax) * (cy - ay) - (cx - ax) * (by - ay)) / 2.0


@dataclass(frozen=True)
class Cylinder:
    """Цилиндр Δ(w): коцикл, вершины, определитель и площадь Лебега."""

    word: str
    product: IntMatrix3
    vertices: tuple
    det: int
    leb_area: float

    @property
    def row_norms(self) -> tuple:
        """1-нормы строк коцикла."""
        return self.product.row_norms()

    def vertex_coordinates(self) -> np.ndarray:
        """Вершины как массив (3, 3)."""
        return np.array([v.as_array() for v in self.vertices])

    def to_dict(self) -> dict:
        """Представление для JSON."""
        return {
            "word": self.word,
            "product": self.product.to_list(),
            "vertices": [v.to_dict() for v in self.vertices],
            "det": self.det,
            "leb_area": self.leb_area,
        }


def cylinder_data(word) -> Cylinder:
    """
    Данные цилиндра ранга |w|; пустое слово соответствует Δ.

    Вершины: нормированные строки коцикла, площадь считается
    формулой шнурка в координатах (x1, x2).
    """
    word = validate_word(word)
    product = cocycle_matrix(word)
    vertices = tuple(closed_simplex_point(row) for row in product.rows)
    area = shoelace_area([(v.x1, v.x2) for v in vertices])
    return Cylinder(word, product, vertices, product.det, area)


def jacobian(word, x) -> float:
    """Якобиан обратной ветви: det A / (Σ ‖A_i‖₁ x_i)³."""
    x = _as_point(x)
    product = cocycle_matrix(word)
    weighted = sum(r * c for r, c in zip(product.row_norms(), x))
    return abs(product.det) / weighted**3


def renyi_ratio(word) -> float:
    """Отношение Реньи C(w) = (max ‖A_i‖₁ / min ‖A_i‖₁)³."""
    norms = cocycle_matrix(word).row_norms()
    return (max(norms) / min(norms)) ** 3


def row_norm_check(word) -> bool:
    """Две меньшие 1-нормы строк коцикла в сумме больше наибольшей."""
    a, b, c = sorted(cocycle_matrix(word).row_norms())
    return a + b > c


def jump_step(x, cap: int | None = None) -> tuple[SimplexPoint, int, str]:
    """
    Скачковое преобразование f_R*: итерации до срабатывания ветви 4.

    Returns:
        Точка f_R^τ(x), время возврата τ и пройденное слово

    Raises:
        ResourceLimitError: Если ветвь 4 не встретилась за cap шагов
    """
    if cap is None:
        cap = SettingsLoader().get("JUMP_ITERATION_CAP")
    point = _as_point(x)
    symbols = []
    for k in range(1, cap + 1):
        try:
            point, branch = step(point)
        except OrbitTerminatedError as e:
            raise OrbitTerminatedError(k, e.coordinate) from e
        symbols.append(branch.symbol)
        if branch == Branch.FOUR:
            return point, k, "".join(symbols)
    raise ResourceLimitError("итерации скачкового преобразования", cap + 1, cap)


@dataclass(frozen=True)
class AffineField2x2:
    """
    Матрица 2×2 с элементами c_jk + a_jk·x1 + b_jk·x2.

    Хранит D⁽ⁿ⁾(x) = Π A⁽ⁿ⁾ H(x) на цилиндре, где коцикл постоянен.
    """

    const: np.ndarray
    coef_x1: np.ndarray
    coef_x2: np.ndarray

    def evaluate(self, x1: float, x2: float) -> np.ndarray:
        """Значение поля в точке с координатами (x1, x2)."""
        return self.const + self.coef_x1 * x1 + self.coef_x2 * x2

    def at(self, x) -> np.ndarray:
        """Значение поля в точке симплекса."""
        x = _as_point(x)
        return self.evaluate(x.x1, x.x2)

    def to_dict(self) -> dict:
        """Представление для JSON."""
        return {
            "const": self.const.tolist(),
            "coef_x1": self.coef_x1.tolist(),
            "coef_x2": self.coef_x2.tolist(),
        }


def h_matrix(x) -> np.ndarray:
    """Матрица H(x) со столбцами e_k − x_k·1, k = 1, 2."""
    x = _as_point(x)
    return np.array(
        [[-x.x1, -x.x2], [1.0 - x.x1, -x.x2], [-x.x1, 1.0 - x.x2]]
    )


def d_field(word) -> AffineField2x2:
    """
    Аффинное поле D⁽ⁿ⁾(x) на цилиндре слова.

    Элементы: p_jk − p_0k − (p_j − p_0)·x_k, где p_ij: элементы
    коцикла, p_i: суммы его строк.
    """
    a = cocycle_matrix(word).to_numpy()
    p = a.sum(axis=1)
    const = np.array(
        [[a[1, 1] - a[0, 1], a[1, 2] - a[0, 2]],
         [a[2, 1] - a[0, 1], a[2, 2] - a[0, 2]]]
    )
    coef_x1 = np.array([[p[0] - p[1], 0.0], [p[0] - p[2], 0.0]])
    coef_x2 = np.array([[0.0, p[0] - p[1]], [0.0, p[0] - p[2]]])
    return AffineField2x2(const, coef_x1, coef_x2)


def _norm_kind(norm: str | None) -> str:
    return norm or SettingsLoader().get("NORM")


def max_log_d_norm(cylinder: Cylinder, norm: str | None = None) -> float:
    """
    max log‖D⁽ⁿ⁾(x)‖ по цилиндру.

    Норма аффинного поля выпукла на треугольнике, максимум берется
    по трем вершинам.
    """
    kind = _norm_kind(norm)
    field = d_field(cylinder.word)
    return max(
        math.log(matrix_norm_2x2(field.evaluate(v.x1, v.x2), kind))
        for v in cylinder.vertices
    )


# --- Отсортированный вариант ---


@dataclass(frozen=True)
class SortedBranch:
    """Символ алфавита 𝒜′: ветвь и перестановка сортировки."""

    code: str
    branch: int
    permutation: str
    matrix: IntMatrix3

    @property
    def label(self) -> str:
        """Запись вида (1,(213))."""
        return f"({self.branch},{self.permutation})"


SORTED_BRANCHES = {
    "a": SortedBranch("a", 1, "id", IntMatrix3(((1, 1, 1), (0, 1, 0), (0, 0, 1)))),
    "b": SortedBranch("b", 1, "(213)", IntMatrix3(((1, 1, 1), (1, 0, 0), (0, 0, 1)))),
    "c": SortedBranch("c", 1, "(231)", IntMatrix3(((1, 1, 1), (1, 0, 0), (0, 1, 0)))),
    "d": SortedBranch("d", 4, "(321)", IntMatrix3(((1, 1, 0), (1, 0, 1), (0, 1, 1)))),
}

# Направления углов Δ′ в однородных координатах
SORTED_CORNERS = ((1, 0, 0), (1, 1, 0), (1, 1, 1))


def _check_sorted_domain(x) -> tuple[float, float]:
    x1, x2 = (float(c) for c in x)
    tol = _tolerance()
    if not (1.0 - x1 > tol and x1 - x2 > tol and x2 > tol):
        raise DomainError("требуется 1 > x1 > x2 > 0", (x1, x2))
    return x1, x2


def sorted_classify(x) -> SortedBranch:
    """Символ 𝒜′ точки (x1, x2) ∈ Δ′ = {1 > x1 > x2 > 0}."""
    x1, x2 = _check_sorted_domain(x)
    if x1 + x2 >= 1.0:
        return SORTED_BRANCHES["d"]
    r = 1.0 - x1 - x2
    if r > x1:
        return SORTED_BRANCHES["a"]
    if r > x2:
        return SORTED_BRANCHES["b"]
    return SORTED_BRANCHES["c"]


def sorted_step(x) -> tuple[tuple[float, float], SortedBranch]:
    """
    Шаг отсортированного алгоритма: M_{i,π}⁻¹·(1, x1, x2), нормировка по x0.

    Raises:
        OrbitTerminatedError: Если образ у границы Δ′
    """
    symbol = sorted_classify(x)
    x1, x2 = (float(c) for c in x)
    r = 1.0 - x1 - x2
    if symbol.code == "a":
        y = (r, x1, x2)
    elif symbol.code == "b":
        y = (x1, r, x2)
    elif symbol.code == "c":
        y = (x1, x2, r)
    else:
        y = (1.0 + x1 - x2, 1.0 - x1 + x2, x1 + x2 - 1.0)
    image = (y[1] / y[0], y[2] / y[0])

    gap = min(1.0 - image[0], image[0] - image[1], image[1])
    if gap < _tolerance():
        raise OrbitTerminatedError(0, gap)
    return image, symbol


def sorted_branch_product(word) -> IntMatrix3:
    """Произведение M_{a0}⋯M_{a_{n−1}} над алфавитом 𝒜′."""
    word = validate_word(word, alphabet=SORTED_ALPHABET)
    product = IntMatrix3.identity()
    for code in word:
        product = mat_mul(product, SORTED_BRANCHES[code].matrix)
    return product


def sorted_cocycle_matrix(word) -> IntMatrix3:
    """Коцикл A′⁽ⁿ⁾ = ᵗ(M_{a0}⋯M_{a_{n−1}}) отсортированного варианта."""
    return sorted_branch_product(word).T


@dataclass(frozen=True)
class SortedCylinder:
    """Цилиндр Δ′(w) в координатах (x1/x0, x2/x0)."""

    word: str
    product: IntMatrix3
    vertices: tuple
    det: int
    leb_area: float

    def to_dict(self) -> dict:
        """Представление для JSON."""
        return {
            "word": self.word,
            "product": self.product.to_list(),
            "vertices": [list(v) for v in self.vertices],
            "det": self.det,
            "leb_area": self.leb_area,
        }


def sorted_cylinder_data(word) -> SortedCylinder:
    """Вершины: образы направлений углов Δ′, площадь по формуле шнурка."""
    word = validate_word(word, alphabet=SORTED_ALPHABET)
    g = sorted_branch_product(word)
    vertices = []
    for corner in SORTED_CORNERS:
        v = g.apply(corner)
        vertices.append((float(v[1] / v[0]), float(v[2] / v[0])))
    return SortedCylinder(word, g.T, tuple(vertices), g.det, shoelace_area(vertices))


def sorted_d_field(word) -> AffineField2x2:
    """D′⁽ⁿ⁾(x) = [[0,1,0],[0,0,1]]·A′⁽ⁿ⁾·[[−x1,−x2],[1,0],[0,1]]."""
    a = sorted_cocycle_matrix(word).to_numpy()
    const = a[1:, 1:].copy()
    coef_x1 = np.array([[-a[1, 0], 0.0], [-a[2, 0], 0.0]])
    coef_x2 = np.array([[0.0, -a[1, 0]], [0.0, -a[2, 0]]])
    return AffineField2x2(const, coef_x1, coef_x2)


def sorted_max_log_d_norm(cylinder: SortedCylinder, norm: str | None = None) -> float:
    """max log‖D′⁽ⁿ⁾‖ по вершинам отсортированного цилиндра."""
    kind = _norm_kind(norm)
    field = sorted_d_field(cylinder.word)
    return max(
        math.log(matrix_norm_2x2(field.evaluate(x1, x2), kind))
        for x1, x2 in cylinder.vertices
    )


# --- Двойственное отображение на Δ′# = {y1+y2 ≥ 1, |y1−y2| ≤ 1, y > 0} ---

# Образующие конуса C# области Δ′# и обратные к ᵗM_s
DUAL_GENERATORS = np.array([[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]])
_DUAL_INVERSES = {
    code: np.linalg.inv(symbol.matrix.T.to_numpy())
    for code, symbol in SORTED_BRANCHES.items()
}
_DUAL_STACK = np.array([_DUAL_INVERSES[c] for c in SORTED_ALPHABET])


def _dual_barycentric(y1, y2):
    # Барицентрические координаты (1, y1, y2) относительно образующих C#
    a = (-1.0 + y1 + y2) / 2.0
    b = (1.0 - y1 + y2) / 2.0
    c = (1.0 + y1 - y2) / 2.0
    return a, b, c


def in_dual_domain(y) -> bool:
    """Проверка строгой принадлежности Δ′# с допуском ORBIT_TOLERANCE."""
    y1, y2 = (float(c) for c in y)
    tol = _tolerance()
    return min(*_dual_barycentric(y1, y2)) > tol and y1 > tol and y2 > tol


def dual_classify(y) -> SortedBranch:
    """
    Символ двойственной ветви: подконус ᵗM_s·C#, содержащий (1, y1, y2).

    Четыре подконуса являются треугольниками разбиения C# по серединам сторон.
    """
    if not in_dual_domain(y):
        raise DomainError("требуется y1+y2 ≥ 1, |y1−y2| ≤ 1, y > 0", tuple(y))
    a, b, c = _dual_barycentric(*y)
    s = a + b + c
    if a >= s / 2:
        return SORTED_BRANCHES["a"]
    if b >= s / 2:
        return SORTED_BRANCHES["b"]
    if c >= s / 2:
        return SORTED_BRANCHES["c"]
    return SORTED_BRANCHES["d"]


def dual_step(y) -> tuple[float, float]:
    """
    Двойственный шаг: (ᵗM_s)⁻¹·(1, y1, y2), нормировка по первой координате.

    Raises:
        DomainError: Если y вне Δ′# или на ее границе
    """
    symbol = dual_classify(y)
    image = _DUAL_INVERSES[symbol.code] @ np.array([1.0, float(y[0]), float(y[1])])
    return float(image[1] / image[0]), float(image[2] / image[0])


def dual_step_batch(points: np.ndarray) -> np.ndarray:
    """Векторизованный двойственный шаг для массива (N, 2)."""
    a, b, c = _dual_barycentric(points[:, 0], points[:, 1])
    half = (a + b + c) / 2.0
    index = np.full(points.shape[0], 3, dtype=np.int64)
    index[c >= half] = 2
    index[b >= half] = 1
    index[a >= half] = 0
    homogeneous = np.column_stack([np.ones(points.shape[0]), points])
    images = np.einsum("nij,nj->ni", _DUAL_STACK[index], homogeneous)
    return images[:, 1:] / images[:, :1]
