"""
Оценки второго показателя Ляпунова алгоритма Reverse.

Здесь собраны инвариантная плотность и ее интегралы, оценки L1(n) и
L2(n) (и их аналоги для отсортированного варианта), спектр Ляпунова
методом Монте-Карло и эмпирическая проверка экспоненциальной сходимости.
"""

from __future__ import annotations

import itertools
import math

import mpmath
import numpy as np

from reverse_hub.core.exactlin import (
    NORM_KINDS,
    SimplexPoint,
    batch_norm_2x2,
    normalize_to_simplex,
)
from reverse_hub.core.exceptions import DomainError, OrbitTerminatedError
from reverse_hub.core.models import SpectrumEstimate
from reverse_hub.core.quadrature import integrate_2d, integrate_triangle_from_apex
from reverse_hub.core.reverse_cfa import (
    BRANCH_MATRICES,
    PI_MATRIX,
    branch_product,
    cylinder_data,
    max_log_d_norm,
    orbit,
    sorted_cylinder_data,
    sorted_max_log_d_norm,
    step_batch,
)
from reverse_hub.core.utils import validate_depth, validate_positive_int
from reverse_hub.enumeration.config import EnumerationConfig
from reverse_hub.enumeration.runner import EnumerationResult, EnumerationRunner
from reverse_hub.infra.settings import SettingsLoader

DENSITY_CONSTANT = 4.0 / math.pi**2
SORTED_DENSITY_CONSTANT = 24.0 / math.pi**2

_BRANCH_STACK = np.array([BRANCH_MATRICES[i].to_numpy() for i in (1, 2, 3, 4)])
_COCYCLE_STACK = np.transpose(_BRANCH_STACK, (0, 2, 1))
_DETERMINANTS = np.array([1.0, 1.0, 1.0, 2.0])


# --- Инвариантная плотность ---


def density(x) -> float:
    """
    Плотность h(x) = 4 / (π²(1−x0)(1−x1)(1−x2)) инвариантной меры.

    Raises:
        DomainError: Если одна из координат равна 1
    """
    x = x if isinstance(x, SimplexPoint) else normalize_to_simplex(x)
    gaps = [1.0 - c for c in x]
    if min(gaps) <= 0.0:
        raise DomainError("плотность не определена в вершине Δ", tuple(x))
    return DENSITY_CONSTANT / (gaps[0] * gaps[1] * gaps[2])


def density_xy(x1, x2):
    """Векторизованная плотность в координатах (x1, x2)."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    return DENSITY_CONSTANT / ((x1 + x2) * (1.0 - x1) * (1.0 - x2))


def sorted_density_xy(x1, x2):
    """Плотность μ′ на Δ′ = {1 > x1 > x2 > 0}."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    return SORTED_DENSITY_CONSTANT / ((1.0 + x1) * (1.0 + x2) * (x1 + x2))


def mass(tol: float | None = None) -> float:
    """
    Полная масса μ(Δ), которая должна равняться 1.

    Треугольник Δ делится по серединам сторон; три угловых куска
    интегрируются от вершины, где у плотности особенность.
    """
    tol = SettingsLoader().get("QUAD_TOLERANCE") if tol is None else tol
    v0, v1, v2 = (0.0, 0.0), (1.0, 0.0), (0.0, 1.0)
    m01, m02, m12 = (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)
    pieces = (
        (v0, m01, m02),
        (v1, m12, m01),
        (v2, m02, m12),
        (m01, m12, m02),
    )
    return math.fsum(
        integrate_triangle_from_apex(density_xy, apex, p, q, tol / 4.0)
        for apex, p, q in pieces
    )


def sorted_mass(tol: float | None = None) -> float:
    """Полная масса μ′(Δ′) отсортированного варианта."""
    tol = SettingsLoader().get("QUAD_TOLERANCE") if tol is None else tol
    return integrate_triangle_from_apex(
        sorted_density_xy, (0.0, 0.0), (1.0, 0.0), (1.0, 1.0), tol
    )


def dual_density_integral(x1: float, x2: float, tol: float | None = None) -> float:
    """
    ∫ по Δ′# от 1/(1 + x1·y1 + x2·y2)³.

    Замена s = y1 + y2, d = y1 − y2, t = 1/s переводит область в
    прямоугольник [0,1]×[−1,1] с гладким подынтегральным выражением.
    Результат должен совпадать с 1/((1+x1)(1+x2)(x1+x2)).
    """
    if x1 <= 0 or x2 <= 0:
        raise DomainError("требуется x1, x2 > 0", (x1, x2))
    a = (x1 + x2) / 2.0
    b = (x1 - x2) / 2.0

    def integrand(t, d):
        return 0.5 * t / (t * (1.0 + b * d) + a) ** 3

    return integrate_2d(integrand, (0.0, 1.0), lambda t: (-1.0, 1.0), tol)


def _pullback_density(y1, y2):
    """Σ_i h(ψ_i y)·ω_i(y) для обратных ветвей ψ_i, векторно."""
    y1, y2 = np.broadcast_arrays(np.asarray(y1, dtype=float), y2)
    y = np.stack([1.0 - y1 - y2, y1, y2])
    total = np.zeros_like(y[0])
    for index in range(4):
        image = _BRANCH_STACK[index] @ y
        norm = image.sum(axis=0)
        jacobian = _DETERMINANTS[index] / norm**3
        total = total + density_xy(image[1] / norm, image[2] / norm) * jacobian
    return total


def transfer_identity(y) -> tuple[float, float]:
    """
    Тождество оператора переноса в точке y: (Σ_i h(ψ_i y)·ω_i(y), h(y)).

    Инвариантность μ равносильна равенству компонент.
    """
    y = y if isinstance(y, SimplexPoint) else normalize_to_simplex(y)
    lhs = float(_pullback_density(np.array([y.x1]), np.array([y.x2]))[0])
    return lhs, density(y)


def measure_invariance(box, tol: float | None = None) -> tuple[float, float]:
    """
    Проверка μ(f⁻¹E) = μ(E) на прямоугольнике E ⊂ Δ.

    Args:
        box: ((a1, b1), (a2, b2)) в координатах (x1, x2)

    Returns:
        (Σ_i ∫_{ψ_i(E)} h, ∫_E h)

    Raises:
        DomainError: Если прямоугольник не лежит внутри Δ
    """
    (a1, b1), (a2, b2) = box
    if min(a1, a2) <= 0 or b1 + b2 >= 1 or a1 >= b1 or a2 >= b2:
        raise DomainError("прямоугольник должен лежать внутри Δ", box)

    def y_bounds(_):
        return a2, b2

    pulled = integrate_2d(_pullback_density, (a1, b1), y_bounds, tol)
    direct = integrate_2d(density_xy, (a1, b1), y_bounds, tol)
    return pulled, direct


# --- Оценки L1(n), L2(n) ---


def _check_norm(norm: str | None) -> str:
    norm = norm or SettingsLoader().get("NORM")
    if norm not in NORM_KINDS:
        raise ValueError(f"Неизвестная норма '{norm}', допустимо: {NORM_KINDS}")
    return norm


def l1_log_factor(n: int, norm: str | None = None) -> float:
    """
    Множитель log в L1(n).

    Берется большее из значения log(2n(n−1)/(n+1) − 1) и точного
    максимума log‖D⁽ⁿ⁾‖ по вершинам цилиндров iⁿ; при n ≥ 3 это
    первое из них.
    """
    norm = _check_norm(norm)
    printed = math.log(2.0 * n * (n - 1) / (n + 1) - 1.0)
    exact = max(
        max_log_d_norm(cylinder_data(str(i) * n), norm) for i in (1, 2, 3)
    )
    return max(printed, exact)


def l1_cylinder_integral(n: int, tol: float | None = None) -> float:
    """∫ h по цилиндру Δ(1ⁿ) = {x1, x2 ≥ 0, x1 + x2 ≤ 1/(n+1)}."""
    side = 1.0 / (n + 1)
    return integrate_triangle_from_apex(
        density_xy, (0.0, 0.0), (side, 0.0), (0.0, side), tol
    )


def l1_bound(n: int, norm: str | None = None, tol: float | None = None) -> float:
    """
    L1(n) = (3/n)·log-множитель·μ(Δ(1ⁿ)).

    Raises:
        ResourceLimitError: Если n вне допустимого диапазона
        QuadratureError: Если квадратура не сошлась
    """
    validate_depth(n, 2, SettingsLoader().get("MAX_BOUND_DEPTH"))
    return 3.0 / n * l1_log_factor(n, norm) * l1_cylinder_integral(n, tol)


def l1_integral_mc(n: int, samples: int, seed: int | None = None) -> tuple:
    """
    Монте-Карло для μ(Δ(1ⁿ)) в координатах от вершины (0, 0).

    Returns:
        (оценка, стандартная ошибка)
    """
    validate_positive_int(samples, "samples")
    seed = SettingsLoader().get("DEFAULT_SEED") if seed is None else seed
    rng = np.random.default_rng(seed)
    side = 1.0 / (n + 1)
    s = rng.random(samples)
    t = rng.random(samples)
    x1 = t * side * (1.0 - s)
    x2 = t * side * s
    values = density_xy(x1, x2) * t * side**2
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(samples))


def l2_enumeration(
    n: int,
    norm: str | None = None,
    threads: int = 1,
    density: str = "upper",
    variant: str = "unsorted",
) -> EnumerationResult:
    """Полный перебор слов длины n с частичными суммами по поддеревьям."""
    config = EnumerationConfig(
        n=n, variant=variant, norm=norm, density=density, threads=threads
    )
    return EnumerationRunner(config).run()


def l2_bound(
    n: int, norm: str | None = None, threads: int = 1, density: str = "upper"
) -> float:
    """
    L2(n): сумма по словам {1,2,3,4}ⁿ без iⁿ.

    Положительные максимумы log‖D‖ взвешиваются максимальной плотностью
    на цилиндре, отрицательные минимальной; density="lower" меняет
    экстремумы местами.
    """
    return l2_enumeration(n, norm, threads, density).total


def sorted_l1_bound(n: int, norm: str | None = None, tol: float | None = None):
    """
    L1′(n) = 24/(π²n)·log-множитель·∫_{Δ′(aⁿ)} 1/((1+x1)(1+x2)(x1+x2)).

    Множитель берется как большее из log(1 + n/(n+1)) и точного
    максимума по вершинам Δ′((1,id)ⁿ).
    """
    validate_depth(n, 2, SettingsLoader().get("MAX_SORTED_DEPTH"))
    norm = _check_norm(norm)
    factor = max(
        math.log(1.0 + n / (n + 1.0)),
        sorted_max_log_d_norm(sorted_cylinder_data("a" * n), norm),
    )
    integral = integrate_triangle_from_apex(
        sorted_density_xy,
        (0.0, 0.0),
        (1.0 / (n + 1), 0.0),
        (1.0 / (2 * n + 1), 1.0 / (2 * n + 1)),
        tol,
    )
    return factor / n * integral


def sorted_l_bounds(
    n: int, norm: str | None = None, threads: int = 1
) -> tuple[float, float]:
    """Пара (L1′(n), L2′(n)) отсортированного варианта."""
    l1 = sorted_l1_bound(n, norm)
    l2 = l2_enumeration(n, norm, threads, variant="sorted").total
    return l1, l2


# --- Контрольные вычисления для L2 ---


def _mp_norm(d, kind: str):
    a11, a12, a21, a22 = (abs(v) for v in d)
    if kind == "induced":
        return max(a11 + a21, a12 + a22)
    if kind == "entrywise":
        return a11 + a12 + a21 + a22
    return max(a11 + a12, a21 + a22)


def extended_precision_l2(n: int, norm: str | None = None, dps: int = 30) -> float:
    """
    L2(n), пересчитанная пословно в mpmath с dps знаками.

    Используется для перекрестной проверки перебора при n ≤ 8.
    """
    validate_depth(n, 2, 8)
    norm = _check_norm(norm)
    excluded = {str(i) * n for i in (1, 2, 3)}

    with mpmath.workdps(dps):
        terms = []
        for letters in itertools.product("1234", repeat=n):
            word = "".join(letters)
            if word in excluded:
                continue
            g = branch_product(word).rows
            s = [sum(g[j][m] for j in range(3)) for m in range(3)]
            area = mpmath.mpf(2) ** word.count("4") / (2 * s[0] * s[1] * s[2])

            logs = []
            factors = [[None] * 3 for _ in range(3)]
            for m in range(3):
                x = [mpmath.mpf(g[k][m]) / s[m] for k in range(3)]
                for j in range(3):
                    factors[j][m] = mpmath.mpf(s[m]) / (s[m] - g[j][m])
                d = (
                    g[1][1] - g[1][0] - (s[1] - s[0]) * x[1],
                    g[2][1] - g[2][0] - (s[1] - s[0]) * x[2],
                    g[1][2] - g[1][0] - (s[2] - s[0]) * x[1],
                    g[2][2] - g[2][0] - (s[2] - s[0]) * x[2],
                )
                logs.append(mpmath.log(_mp_norm(d, norm)))
            top = max(logs)
            pick = max if top >= 0 else min
            weight = mpmath.fprod(pick(row) for row in factors)
            terms.append(weight * area * top)

        total = 4 / (mpmath.pi**2 * n) * mpmath.fsum(terms)
        return float(total)


def mc_i2_estimate(
    n: int, samples: int, seed: int | None = None, norm: str | None = None
) -> tuple[float, float]:
    """
    Монте-Карло для I₂(n) = (1/n)∫_{Δ∖∪Δ(iⁿ)} log‖D⁽ⁿ⁾‖ dμ.

    Точки берутся равномерно на Δ, слово составляют первые n символов орбиты.

    Returns:
        (оценка, стандартная ошибка)
    """
    validate_positive_int(samples, "samples")
    norm = _check_norm(norm)
    seed = SettingsLoader().get("DEFAULT_SEED") if seed is None else seed
    rng = np.random.default_rng(seed)

    x = rng.dirichlet([1.0, 1.0, 1.0], size=samples)
    points = x.copy()
    product = np.broadcast_to(np.eye(3), (samples, 3, 3)).copy()
    first = None
    constant = np.ones(samples, dtype=bool)
    for _ in range(n):
        points, branches = step_batch(points)
        product = product @ _BRANCH_STACK[branches - 1]
        if first is None:
            first = branches
        constant &= (branches == first) & (first != 4)

    cocycle = np.transpose(product, (0, 2, 1))
    x1, x2 = x[:, 1], x[:, 2]
    h_matrix = np.stack(
        [
            np.stack([-x1, -x2], axis=1),
            np.stack([1.0 - x1, -x2], axis=1),
            np.stack([-x1, 1.0 - x2], axis=1),
        ],
        axis=1,
    )
    d = PI_MATRIX[None] @ cocycle @ h_matrix
    norms = batch_norm_2x2(d[:, 0, 0], d[:, 0, 1], d[:, 1, 0], d[:, 1, 1], norm)
    values = np.where(
        constant, 0.0, np.log(norms) * density_xy(x1, x2) * 0.5 / n
    )
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(samples))


# --- Спектр Ляпунова ---


def _one_step_d(points: np.ndarray, branches: np.ndarray) -> np.ndarray:
    """Одношаговые матрицы D(x) = Π·A(x)·H(x) для массива точек."""
    x1, x2 = points[:, 1], points[:, 2]
    h_matrix = np.stack(
        [
            np.stack([-x1, -x2], axis=1),
            np.stack([1.0 - x1, -x2], axis=1),
            np.stack([-x1, 1.0 - x2], axis=1),
        ],
        axis=1,
    )
    return PI_MATRIX[None] @ _COCYCLE_STACK[branches - 1] @ h_matrix


def restart_frames(
    frames: np.ndarray, vectors: np.ndarray, growth: np.ndarray, bad: np.ndarray
):
    """
    Закрыть реперы перезапущенных орбит (на месте).

    Рост с последней QR-ортогонализации засчитывается в growth, затем
    репер становится единичным, а вектор коцикла D равным (1, 0).
    """
    if not bad.any():
        return
    _, r = np.linalg.qr(frames[bad])
    growth[bad] += np.log(np.abs(np.diagonal(r, axis1=1, axis2=2)))
    frames[bad] = np.eye(3)
    vectors[bad] = (1.0, 0.0)


def mc_spectrum(
    iterations: int,
    burn_in: int | None = None,
    reortho_period: int | None = None,
    seed: int | None = None,
    walkers: int | None = None,
) -> SpectrumEstimate:
    """
    Спектр Ляпунова коцикла A методом Бенеттина.

    Ансамбль из walkers орбит, стартующих равномерно на Δ, после
    прогрева эволюционирует ортонормированные реперы Q ← A(x)·Q с
    QR-ортогонализацией каждые reortho_period шагов. Параллельно
    оценивается старший показатель коцикла D. Орбиты у салфетки Рози
    перезапускаются из отдельного подпотока генератора с единичным
    репером.

    Args:
        iterations: Общее число шагов по всем орбитам (не меньше 10⁴)
        burn_in: Шаги прогрева каждой орбиты
        reortho_period: Период QR-ортогонализации
        seed: Зерно генератора
        walkers: Размер ансамбля

    Returns:
        Оценка спектра, воспроизводимая по seed
    """
    settings = SettingsLoader()
    burn_in = settings.get("MC_BURN_IN") if burn_in is None else burn_in
    period = reortho_period or settings.get("MC_REORTHO_PERIOD")
    seed = settings.get("DEFAULT_SEED") if seed is None else seed
    walkers = walkers or settings.get("MC_WALKERS")
    tol = settings.get("ORBIT_TOLERANCE")
    if iterations < 10**4:
        raise ValueError("'iterations' должен быть не меньше 10⁴")
    validate_positive_int(period, "reortho_period")
    validate_positive_int(walkers, "walkers")

    rng = np.random.default_rng(seed)
    points = rng.dirichlet([1.0, 1.0, 1.0], size=walkers)
    restarts = 0

    def advance(current):
        nonlocal restarts
        images, branches = step_batch(current)
        bad = images.min(axis=1) < tol
        if bad.any():
            restarts += 1
            fresh = np.random.default_rng([seed, restarts])
            images[bad] = fresh.dirichlet([1.0, 1.0, 1.0], size=int(bad.sum()))
        return images, branches, bad

    for _ in range(burn_in):
        points, _, _ = advance(points)

    steps = -(-iterations // walkers)
    frames = np.broadcast_to(np.eye(3), (walkers, 3, 3)).copy()
    growth = np.zeros((walkers, 3))
    vectors = np.tile(np.array([1.0, 0.0]), (walkers, 1))
    d_growth = np.zeros(walkers)

    for k in range(1, steps + 1):
        images, branches, bad = advance(points)
        frames = _COCYCLE_STACK[branches - 1] @ frames
        vectors = np.einsum("wij,wj->wi", _one_step_d(points, branches), vectors)
        norms = np.abs(vectors).sum(axis=1)
        d_growth += np.log(norms)
        vectors /= norms[:, None]
        restart_frames(frames, vectors, growth, bad)
        points = images
        if k % period == 0 or k == steps:
            frames, r = np.linalg.qr(frames)
            growth += np.log(np.abs(np.diagonal(r, axis1=1, axis2=2)))

    per_walker = growth / steps
    d_per_walker = d_growth / steps
    lambdas = per_walker.mean(axis=0)
    spread = np.concatenate([per_walker, d_per_walker[:, None]], axis=1)
    stderr = float((spread.std(axis=0, ddof=1) / math.sqrt(walkers)).max())

    return SpectrumEstimate(
        lambdas,
        stderr=stderr,
        iterations=steps * walkers,
        seed=seed,
        lambda_d=float(d_per_walker.mean()),
        restarts=restarts,
    )


def approx_exponent(estimate: SpectrumEstimate) -> float:
    """
    Равномерный показатель приближения η* = 1 − λ2/λ1.

    Raises:
        ValueError: Если λ1 ≤ 0
    """
    if estimate.lambda1 <= 0:
        raise ValueError("Показатель λ1 должен быть положительным")
    return 1.0 - estimate.lambda2 / estimate.lambda1


# --- Экспоненциальная сходимость ---


def _sample_word(rng, length: int) -> str:
    while True:
        start = rng.dirichlet([1.0, 1.0, 1.0])
        try:
            _, word = orbit(start, length)
        except OrbitTerminatedError:
            continue
        return word


def _exact_mul(a: tuple, b: tuple) -> tuple:
    """Произведение матриц 3×3 в целых числах Python без ограничения разрядности."""
    cols = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a
    )


def _exact_apply(a: tuple, v: tuple) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def convergence_witness(
    samples: int,
    seed: int | None = None,
    alpha: float = 1.05,
    n_range: tuple[int, int] = (50, 200),
    word_length: int = 400,
) -> dict:
    """
    Эмпирическая проверка экспоненциальной сходимости.

    Для слова w орбиты случайной точки берется точка x = M_w·1 / ‖·‖₁
    цилиндра Δ(w) с точными рациональными координатами X_j / S. При
    каждом n из n_range проверяется
    ‖(p_i1, p_i2) − p_i·(x1, x2)‖_∞ < p_i^{1−α} для всех строк i,
    в целых числах Python: |p_ij·S − p_i·X_j| < p_i^{1−α}·S.

    Returns:
        Словарь с числом выборок, долей успешных и худшим запасом
    """
    validate_positive_int(samples, "samples")
    low, high = n_range
    if not 1 <= low <= high <= word_length:
        raise ValueError("Некорректный диапазон n")
    seed = SettingsLoader().get("DEFAULT_SEED") if seed is None else seed
    rng = np.random.default_rng(seed)
    matrices = {s: BRANCH_MATRICES[int(s)].rows for s in "1234"}

    passed = 0
    worst = math.inf
    for _ in range(samples):
        word = _sample_word(rng, word_length)

        point = (1, 1, 1)
        for symbol in reversed(word):
            point = _exact_apply(matrices[symbol], point)
        total = sum(point)

        product = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        ok = True
        for n, symbol in enumerate(word[:high], start=1):
            product = _exact_mul(product, matrices[symbol])
            if n < low:
                continue
            for i in range(3):
                # Строка i коцикла A = ᵗP есть столбец i произведения P
                row = [product[j][i] for j in range(3)]
                p_i = sum(row)
                gap = max(abs(row[j] * total - p_i * point[j]) for j in (1, 2))
                if gap == 0:
                    continue
                margin = (
                    (1.0 - alpha) * math.log(p_i) + math.log(total) - math.log(gap)
                )
                worst = min(worst, margin)
                ok = ok and margin > 0
        passed += ok

    return {
        "samples": samples,
        "passed": passed,
        "rate": passed / samples,
        "alpha": alpha,
        "n_range": [low, high],
        "worst_log_margin": worst,
    }
