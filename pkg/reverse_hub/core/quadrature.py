"""
Адаптивная квадратура Гаусса–Лежандра на диадическом разбиении.

Глобальная стратегия: на каждом шаге делится пополам отрезок с
наибольшей оценкой погрешности, пока сумма оценок не станет меньше
допуска. Так сходятся и интегралы с логарифмическими особенностями
на концах, где локальные критерии не срабатывают.
"""

from __future__ import annotations

import functools
import heapq
import math

import numpy as np
from scipy import special

from reverse_hub.core.exceptions import QuadratureError
from reverse_hub.infra.settings import SettingsLoader


@functools.lru_cache(maxsize=16)
def gauss_legendre_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Узлы и веса Гаусса–Лежандра на [-1, 1]."""
    nodes, weights = special.roots_legendre(order)
    return nodes, weights


def gauss_legendre(f, a: float, b: float, order: int) -> float:
    """Квадратура фиксированного порядка; f векторизована по узлам."""
    nodes, weights = gauss_legendre_rule(order)
    half = (b - a) / 2.0
    x = a + half * (nodes + 1.0)
    return half * float(np.dot(weights, f(x)))


def _settings(tol, order):
    settings = SettingsLoader()
    tol = settings.get("QUAD_TOLERANCE") if tol is None else tol
    order = settings.get("QUAD_ORDER") if order is None else order
    return tol, order


def adaptive_integrate(
    f, a: float, b: float, tol: float | None = None, order: int | None = None
) -> float:
    """
    ∫_a^b f с абсолютной точностью tol.

    Args:
        f: Векторизованная функция одного аргумента
        a, b: Пределы интегрирования
        tol: Абсолютный допуск (по умолчанию QUAD_TOLERANCE)
        order: Порядок правила (по умолчанию QUAD_ORDER)

    Raises:
        QuadratureError: Если за QUAD_MAX_INTERVALS отрезков точность не достигнута
    """
    tol, order = _settings(tol, order)
    max_intervals = SettingsLoader().get("QUAD_MAX_INTERVALS")
    if a == b:
        return 0.0

    def piece(left, right):
        mid = (left + right) / 2.0
        coarse = gauss_legendre(f, left, right, order)
        fine = gauss_legendre(f, left, mid, order) + gauss_legendre(
            f, mid, right, order
        )
        return abs(fine - coarse), fine

    error, value = piece(a, b)
    heap = [(-error, a, b, value)]
    total_error = error

    while total_error > tol:
        if len(heap) >= max_intervals:
            worst = heap[0]
            raise QuadratureError((worst[1], worst[2]), total_error)
        neg_error, left, right, _ = heapq.heappop(heap)
        total_error += neg_error
        mid = (left + right) / 2.0
        for lo, hi in ((left, mid), (mid, right)):
            err, val = piece(lo, hi)
            heapq.heappush(heap, (-err, lo, hi, val))
            total_error += err
        # Пересчет без накопленного дрейфа
        total_error = math.fsum(-item[0] for item in heap)

    return math.fsum(item[3] for item in heap)


def integrate_2d(
    f,
    x_range: tuple[float, float],
    y_bounds,
    tol: float | None = None,
    order: int | None = None,
) -> float:
    """
    Повторный интеграл ∫ dx ∫_{y_lo(x)}^{y_hi(x)} f(x, y) dy.

    Args:
        f: Функция f(x, y), векторизованная по y при скалярном x
        x_range: Пределы внешнего интеграла
        y_bounds: Функция x → (y_lo, y_hi)
    """
    tol, order = _settings(tol, order)
    length = abs(x_range[1] - x_range[0]) or 1.0
    inner_tol = tol / (2.0 * length)

    def outer(xs):
        values = []
        for x in np.atleast_1d(xs):
            lo, hi = y_bounds(x)
            values.append(
                adaptive_integrate(
                    lambda y, x=x: f(x, y), lo, hi, tol=inner_tol, order=order
                )
            )
        return np.array(values)

    return adaptive_integrate(outer, x_range[0], x_range[1], tol=tol / 2.0, order=order)


def integrate_triangle_from_apex(
    f, apex, p, q, tol: float | None = None, order: int | None = None
) -> float:
    """
    Интеграл по треугольнику (apex, p, q) в переменных (t, s).

    Точка apex + t·(p + s·(q − p) − apex) при t, s ∈ [0, 1] имеет якобиан
    t·|det(p − apex, q − apex)|; множитель t гасит особенности вида
    1/расстояние до apex.
    """
    apex, p, q = (np.asarray(v, dtype=float) for v in (apex, p, q))
    e1, e2 = p - apex, q - p
    det = abs((p - apex)[0] * (q - apex)[1] - (p - apex)[1] * (q - apex)[0])

    def integrand(s, t):
        point = apex[:, None] + np.outer(e1 + s * e2, t)
        return f(point[0], point[1]) * t * det

    return integrate_2d(integrand, (0.0, 1.0), lambda s: (0.0, 1.0), tol, order)
