"""
Перебор цилиндров ранга n по поддеревьям.

Дерево слов делится по префиксам фиксированной длины. Внутри поддерева
все произведения M_{a0}⋯M_{a_{n−1}} строятся уровень за уровнем как
массив int64 формы (L, 3, 3) в лексикографическом порядке суффиксов,
после чего геометрия листьев считается векторно.
"""

from __future__ import annotations

import itertools
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from reverse_hub.core.exactlin import batch_norm_2x2
from reverse_hub.core.reverse_cfa import (
    BRANCH_MATRICES,
    SORTED_BRANCHES,
    branch_product,
    sorted_branch_product,
)
from reverse_hub.core.utils import BRANCH_ALPHABET, SORTED_ALPHABET
from reverse_hub.enumeration.config import EnumerationConfig


@dataclass
class LeafGeometry:
    """Векторные данные листьев поддерева."""

    area: np.ndarray
    max_log_norm: np.ndarray
    density_max: np.ndarray
    density_min: np.ndarray


@dataclass
class SubtreeResult:
    """Частичные суммы одного поддерева."""

    prefix: str
    positive: float
    negative: float
    abs_total: float
    word_count: int
    positive_count: int
    negative_count: int

    @property
    def total(self) -> float:
        """Сумма положительной и отрицательной частей."""
        return self.positive + self.negative

    def to_row(self) -> dict:
        """Строка таблицы частичных сумм."""
        return {
            "prefix": self.prefix,
            "words": self.word_count,
            "positive_words": self.positive_count,
            "negative_words": self.negative_count,
            "positive": repr(self.positive),
            "negative": repr(self.negative),
            "total": repr(self.total),
        }


class CylinderTraversal(ABC):
    """Базовый класс перебора цилиндров ранга n."""

    # Буквы, n-е степени которых исключаются из суммы
    excluded_letters: str = ""
    alphabet: str = ""

    def __init__(self, config: EnumerationConfig):
        """
        Инициализация перебора.

        Args:
            config: Конфигурация перебора
        """
        self.config = config
        self._stack = np.array(
            [self._matrix(symbol) for symbol in self.alphabet], dtype=np.int64
        )
        # Последний символ алфавита дает множитель 2 в определителе
        self._doubling = np.zeros(len(self.alphabet), dtype=np.int64)
        self._doubling[-1] = 1

    @property
    @abstractmethod
    def prefactor(self) -> float:
        """Нормирующая константа плотности, деленная на n."""

    @abstractmethod
    def _matrix(self, symbol: str) -> list:
        """Матрица символа в виде вложенных списков."""

    @abstractmethod
    def _prefix_product(self, prefix: str) -> np.ndarray:
        """Точное произведение матриц префикса."""

    @abstractmethod
    def leaf_geometry(
        self, products: np.ndarray, doublings: np.ndarray
    ) -> LeafGeometry:
        """
        Площади, максимумы log‖D‖ и экстремумы плотности по вершинам.

        Args:
            products: Массив (L, 3, 3) произведений M_w
            doublings: Число символов с определителем ±2 в каждом слове
        """

    def prefixes(self) -> list[str]:
        """Префиксы поддеревьев в каноническом порядке."""
        depth = self.config.prefix_depth
        return ["".join(p) for p in itertools.product(self.alphabet, repeat=depth)]

    def leaf_products(self, prefix: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Все произведения листьев поддерева и маска допустимых слов.

        Returns:
            (products, doublings, mask), mask ложна на словах iⁿ
        """
        rest = self.config.n - len(prefix)
        products = self._prefix_product(prefix)[None]
        doublings = np.array([prefix.count(self.alphabet[-1])], dtype=np.int64)

        for _ in range(rest):
            products = np.matmul(products[:, None], self._stack[None]).reshape(-1, 3, 3)
            doublings = (doublings[:, None] + self._doubling[None]).reshape(-1)

        mask = np.ones(products.shape[0], dtype=bool)
        for letter in self.excluded_letters:
            if prefix == letter * len(prefix):
                index = self.alphabet.index(letter)
                mask[index * (4**rest - 1) // 3] = False
        return products, doublings, mask

    def evaluate(self, prefix: str) -> SubtreeResult:
        """Частичные суммы поддерева с данным префиксом."""
        products, doublings, mask = self.leaf_products(prefix)
        geometry = self.leaf_geometry(products, doublings)

        logs = geometry.max_log_norm
        positive = logs >= 0.0
        if self.config.density == "upper":
            weight = np.where(positive, geometry.density_max, geometry.density_min)
        else:
            weight = np.where(positive, geometry.density_min, geometry.density_max)

        with np.errstate(invalid="ignore"):
            terms = self.prefactor * weight * geometry.area * logs
        terms = np.where(mask, terms, 0.0)

        pos_mask = positive & mask
        neg_mask = ~positive & mask
        return SubtreeResult(
            prefix=prefix,
            positive=math.fsum(terms[pos_mask].tolist()),
            negative=math.fsum(terms[neg_mask].tolist()),
            abs_total=math.fsum(np.abs(terms).tolist()),
            word_count=int(mask.sum()),
            positive_count=int(pos_mask.sum()),
            negative_count=int(neg_mask.sum()),
        )


class UnsortedTraversal(CylinderTraversal):
    """Перебор слов над {1,2,3,4} без слов 1ⁿ, 2ⁿ, 3ⁿ."""

    excluded_letters = "123"
    alphabet = BRANCH_ALPHABET

    @property
    def prefactor(self) -> float:
        return 4.0 / (math.pi**2 * self.config.n)

    def _matrix(self, symbol: str) -> list:
        return BRANCH_MATRICES[int(symbol)].to_list()

    def _prefix_product(self, prefix: str) -> np.ndarray:
        return branch_product(prefix).to_numpy(dtype=np.int64)

    def leaf_geometry(
        self, products: np.ndarray, doublings: np.ndarray
    ) -> LeafGeometry:
        g = products
        sums = g.sum(axis=1)
        s = sums.astype(float)
        # x[l, k, m]: координата k вершины m (нормированный столбец m)
        x = g / s[:, None, :]

        area = np.ldexp(1.0, doublings) / (2.0 * s.prod(axis=1))

        # 1/(1 − x_j) в вершине m равно s_m / (s_m − g_jm); разность точная
        with np.errstate(divide="ignore"):
            factors = s[:, None, :] / (sums[:, None, :] - g).astype(float)
        density_max = factors.max(axis=2).prod(axis=1)
        density_min = factors.min(axis=2).prod(axis=1)

        gf = g.astype(float)
        s1 = (s[:, 1] - s[:, 0])[:, None]
        s2 = (s[:, 2] - s[:, 0])[:, None]
        d11 = (gf[:, 1, 1] - gf[:, 1, 0])[:, None] - s1 * x[:, 1, :]
        d12 = (gf[:, 2, 1] - gf[:, 2, 0])[:, None] - s1 * x[:, 2, :]
        d21 = (gf[:, 1, 2] - gf[:, 1, 0])[:, None] - s2 * x[:, 1, :]
        d22 = (gf[:, 2, 2] - gf[:, 2, 0])[:, None] - s2 * x[:, 2, :]
        norms = batch_norm_2x2(d11, d12, d21, d22, self.config.norm)

        with np.errstate(divide="ignore"):
            max_log = np.log(norms).max(axis=1)
        return LeafGeometry(area, max_log, density_max, density_min)


class SortedTraversal(CylinderTraversal):
    """Перебор слов над 𝒜′ без слова (1,id)ⁿ."""

    excluded_letters = "a"
    alphabet = SORTED_ALPHABET

    @property
    def prefactor(self) -> float:
        return 24.0 / (math.pi**2 * self.config.n)

    def _matrix(self, symbol: str) -> list:
        return SORTED_BRANCHES[symbol].matrix.to_list()

    def _prefix_product(self, prefix: str) -> np.ndarray:
        return sorted_branch_product(prefix).to_numpy(dtype=np.int64)

    def leaf_geometry(
        self, products: np.ndarray, doublings: np.ndarray
    ) -> LeafGeometry:
        g = products
        # Образы углов (1,0,0), (1,1,0), (1,1,1): накопленные суммы столбцов
        corners = np.cumsum(g, axis=2).astype(float)
        x1 = corners[:, 1, :] / corners[:, 0, :]
        x2 = corners[:, 2, :] / corners[:, 0, :]

        area = 0.5 * np.abs(
            (x1[:, 1] - x1[:, 0]) * (x2[:, 2] - x2[:, 0])
            - (x1[:, 2] - x1[:, 0]) * (x2[:, 1] - x2[:, 0])
        )

        with np.errstate(divide="ignore"):
            f1 = 1.0 / (1.0 + x1)
            f2 = 1.0 / (1.0 + x2)
            f3 = 1.0 / (x1 + x2)
        density_max = f1.max(axis=1) * f2.max(axis=1) * f3.max(axis=1)
        density_min = f1.min(axis=1) * f2.min(axis=1) * f3.min(axis=1)

        gf = g.astype(float)
        d11 = gf[:, 1, 1][:, None] - gf[:, 0, 1][:, None] * x1
        d12 = gf[:, 2, 1][:, None] - gf[:, 0, 1][:, None] * x2
        d21 = gf[:, 1, 2][:, None] - gf[:, 0, 2][:, None] * x1
        d22 = gf[:, 2, 2][:, None] - gf[:, 0, 2][:, None] * x2
        norms = batch_norm_2x2(d11, d12, d21, d22, self.config.norm)

        with np.errstate(divide="ignore"):
            max_log = np.log(norms).max(axis=1)
        return LeafGeometry(area, max_log, density_max, density_min)


_TRAVERSALS = {
    "unsorted": UnsortedTraversal,
    "sorted": SortedTraversal,
}


def get_traversal(config: EnumerationConfig) -> CylinderTraversal:
    """
    Фабрика перебора по варианту алгоритма.

    Raises:
        ValueError: Если вариант неизвестен
    """
    traversal_class = _TRAVERSALS.get(config.variant)
    if traversal_class is None:
        raise ValueError(f"Неизвестный вариант '{config.variant}'")
    return traversal_class(config)


def evaluate_subtree(config: EnumerationConfig, prefix: str) -> SubtreeResult:
    """Точка входа рабочего процесса: одно поддерево."""
    return get_traversal(config).evaluate(prefix)
