"""Сценарии вычислений (use cases), которые вызывает CLI."""

from __future__ import annotations

import math
import time

import numpy as np

from reverse_hub.core import lyapunov_bounds, sadic
from reverse_hub.core.models import BalanceReport, BoundReport, RunConfig
from reverse_hub.core.reverse_cfa import orbit, renyi_ratio, row_norm_check
from reverse_hub.core.utils import LETTERS, validate_positive_int
from reverse_hub.decorators import log_action
from reverse_hub.enumeration.storage import PartialSumsWriter
from reverse_hub.infra.settings import SettingsLoader
from reverse_hub.infra.storage import ResultStore

# Прямоугольники для проверки инвариантности меры
INVARIANCE_BOXES = (
    ((0.1, 0.3), (0.1, 0.3)),
    ((0.05, 0.2), (0.5, 0.7)),
    ((0.4, 0.55), (0.2, 0.35)),
)
INVARIANCE_TOLERANCE = 1e-5
MASS_TOLERANCE = 1e-6
# Число случайных последовательностей в обзоре ограниченных норм
SURVEY_SEQUENCES = 10


class ReportService:
    """Сохранение отчетов вместе с параметрами запуска."""

    def __init__(self):
        """Инициализация сервиса."""
        self.store = ResultStore()

    def save(
        self, command: str, params: dict, payload: dict, out: str | None = None
    ) -> dict:
        """
        Собрать запись и дописать ее в файл отчетов.

        Args:
            command: Имя команды
            params: Параметры запуска
            payload: Результат вычисления
            out: Путь к файлу (по умолчанию REPORTS_FILE)

        Returns:
            Сохраненная запись
        """
        record = {"run": RunConfig(command, params).to_dict(), "result": payload}
        self.store.append(record, out)
        return record


class BoundService:
    """Оценки L1(n) + L2(n) для обоих вариантов алгоритма."""

    def __init__(self):
        """Инициализация сервиса."""
        self.settings = SettingsLoader()

    @log_action("BOUND", verbose=True)
    def compute_bound(
        self,
        n: int,
        threads: int = 1,
        norm: str | None = None,
        table: str | None = None,
    ) -> BoundReport:
        """
        Оценка для алгоритма Reverse.

        Args:
            n: Глубина перебора (2 ≤ n ≤ 14)
            threads: Число процессов
            norm: Интерпретация нормы матриц D
            table: Путь к CSV с частичными суммами по поддеревьям

        Returns:
            Отчет об оценке
        """
        norm = norm or self.settings.get("NORM")
        started = time.perf_counter()
        result = lyapunov_bounds.l2_enumeration(n, norm, threads)
        l1 = lyapunov_bounds.l1_bound(n, norm)
        if table:
            PartialSumsWriter(table).write(result)

        return BoundReport(
            n=n,
            l1=l1,
            l2=result.total,
            accumulated_error=result.accumulated_error,
            word_count=result.word_count,
            wall_time=time.perf_counter() - started,
            variant="unsorted",
            norm=norm,
            positive_part=result.positive,
            negative_part=result.negative,
        )

    @log_action("BOUND_SORTED", verbose=True)
    def compute_sorted_bound(
        self,
        n: int,
        threads: int = 1,
        norm: str | None = None,
        table: str | None = None,
    ) -> BoundReport:
        """Оценка L1′(n) + L2′(n) для отсортированного варианта."""
        norm = norm or self.settings.get("NORM")
        started = time.perf_counter()
        result = lyapunov_bounds.l2_enumeration(n, norm, threads, variant="sorted")
        l1 = lyapunov_bounds.sorted_l1_bound(n, norm)
        if table:
            PartialSumsWriter(table).write(result)

        return BoundReport(
            n=n,
            l1=l1,
            l2=result.total,
            accumulated_error=result.accumulated_error,
            word_count=result.word_count,
            wall_time=time.perf_counter() - started,
            variant="sorted",
            norm=norm,
            positive_part=result.positive,
            negative_part=result.negative,
        )


class SpectrumService:
    """Монте-Карло оценки спектра Ляпунова."""

    @log_action("MC", verbose=True)
    def estimate(self, iterations: int, seed: int | None = None) -> dict:
        """
        Спектр коцикла A, старший показатель D и η*.

        Returns:
            Словарь с оценкой спектра и показателем приближения
        """
        estimate = lyapunov_bounds.mc_spectrum(iterations, seed=seed)
        payload = estimate.to_dict()
        payload["approx_exponent"] = (
            lyapunov_bounds.approx_exponent(estimate) if estimate.lambda1 > 0 else None
        )
        payload["d_exponent_check"] = (
            estimate.lambda2 <= estimate.lambda_d + 3.0 * estimate.stderr
        )
        return payload


class OrbitService:
    """Орбиты отображения Reverse."""

    @log_action("ORBIT")
    def trace(self, x, steps: int) -> dict:
        """
        Орбита точки и ее символическое слово.

        Raises:
            OrbitTerminatedError: Если орбита подошла к салфетке Рози
        """
        validate_positive_int(steps, "steps")
        points, word = orbit(x, steps)
        return {
            "start": list(points[0]),
            "word": word,
            "points": [list(p) for p in points],
        }


class LanguageService:
    """S-адические языки и их сбалансированность."""

    def __init__(self):
        """Инициализация сервиса."""
        self.settings = SettingsLoader()

    @staticmethod
    def build_sequence(
        seed: int | None = None,
        pattern: str | None = None,
        inject_rate: float = 0.0,
        alphabet: str = "1234",
    ) -> sadic.DirectiveSequence:
        """Периодическая последовательность при заданном pattern, иначе случайная."""
        if pattern:
            return sadic.DirectiveSequence.periodic(
                pattern, inject_rate=inject_rate, seed=seed
            )
        return sadic.DirectiveSequence.random(
            seed=seed, alphabet=alphabet, inject_rate=inject_rate
        )

    @log_action("LANGUAGE")
    def language(
        self,
        sequence: sadic.DirectiveSequence,
        depth: int,
        cap: int | None = None,
        export: str | None = None,
    ) -> dict:
        """
        Выборка языка глубины depth.

        Args:
            sequence: Направляющая последовательность
            depth: Глубина n
            cap: Предел длины факторов (по умолчанию FACTOR_CAP)
            export: Путь для списка факторов
        """
        cap = cap or self.settings.get("FACTOR_CAP")
        sample = sadic.generate_language(sequence, depth, cap)
        payload = {
            "sequence": sequence.to_dict(),
            "directive_prefix": sequence.prefix(depth),
            "depth": depth,
            "cap": cap,
            "image_lengths": {k: len(v) for k, v in sample.words.items()},
            "factor_count": len(sample.factors),
            "factor_complexity": [
                len(sample.factors_of_length(length)) for length in range(1, cap + 1)
            ],
            "letter_balance": sadic.letter_balance(sample),
            "block_coverage": sequence.coverage(max(depth, 1)),
        }
        if export:
            payload["exported"] = sample.export(export)
            payload["export_path"] = export
        return payload

    @log_action("BALANCE", verbose=True)
    def balance(
        self,
        sequence: sadic.DirectiveSequence,
        depth: int,
        cap: int | None = None,
    ) -> BalanceReport:
        """Отчет о сбалансированности языка с вставленными блоками."""
        cap = cap or self.settings.get("FACTOR_CAP")
        return sadic.block_balance_witness(sequence, depth, cap)


class VerificationService:
    """Конечные проверки свойств алгоритма и подстановок."""

    def __init__(self):
        """Инициализация сервиса."""
        self.settings = SettingsLoader()

    @log_action("MASS")
    def mass(self) -> dict:
        """Полные массы μ и μ′."""
        total = lyapunov_bounds.mass()
        sorted_total = lyapunov_bounds.sorted_mass()
        return {
            "mass": total,
            "sorted_mass": sorted_total,
            "passed": abs(total - 1.0) <= MASS_TOLERANCE
            and abs(sorted_total - 1.0) <= MASS_TOLERANCE,
        }

    def _sample_sizes(self, samples: int | None) -> dict:
        """Размеры выборок: из настроек VERIFY_* или одно значение samples."""
        if samples is None:
            return {
                "words": self.settings.get("VERIFY_WORDS"),
                "growth_words": self.settings.get("VERIFY_GROWTH_WORDS"),
                "billiard_targets": self.settings.get("VERIFY_BILLIARD_TARGETS"),
                "survey_windows": self.settings.get("VERIFY_SURVEY_WINDOWS"),
            }
        validate_positive_int(samples, "samples")
        return {
            "words": samples,
            "growth_words": samples,
            "billiard_targets": samples,
            "survey_windows": max(samples // 10, 1),
        }

    @log_action("VERIFY", verbose=True)
    def verify_lemmas(
        self, seed: int | None = None, samples: int | None = None
    ) -> dict:
        """
        Все конечные проверки одним отчетом.

        Args:
            seed: Зерно генератора
            samples: Общий размер случайных выборок; по умолчанию размеры
                берутся из настроек VERIFY_*

        Returns:
            Словарь {проверка: {"passed": bool, "value": ...}}, размеры
            выборок и общий итог
        """
        sizes = self._sample_sizes(samples)
        seed = self.settings.get("DEFAULT_SEED") if seed is None else seed
        rng = np.random.default_rng(seed)
        checks = {}

        words = [
            "".join(rng.choice(list("1234"), size=int(rng.integers(1, 25))))
            for _ in range(sizes["words"])
        ]
        checks["row_norms"] = {
            "passed": all(row_norm_check(w) for w in words),
            "value": len(words),
        }
        worst_renyi = max(renyi_ratio(w + "4") for w in words)
        checks["renyi"] = {"passed": worst_renyi < 8.0, "value": worst_renyi}

        constellation = sadic.constellation_bound()
        checks["constellation"] = {
            "passed": constellation <= sadic.CONSTELLATION_LIMIT + 1e-12,
            "value": constellation,
        }
        contraction = sadic.contraction_check(sizes["growth_words"], seed=seed)
        checks["contraction"] = {
            "passed": contraction <= sadic.CONTRACTION_LIMIT + 1e-9,
            "value": contraction,
        }

        survey = max(
            sadic.restricted_norm_survey(
                sadic.DirectiveSequence.random(seed=seed + k, inject_rate=0.05),
                windows=sizes["survey_windows"],
                seed=seed + k,
            )
            for k in range(SURVEY_SEQUENCES)
        )
        checks["restricted_norm"] = {
            "passed": survey <= sadic.RESTRICTED_NORM_LIMIT,
            "value": survey,
        }

        growth = all(
            sadic.balance_growth_check(
                "".join(rng.choice(list(LETTERS), size=int(rng.integers(1, 61)))), i
            )
            for _ in range(sizes["growth_words"])
            for i in (1, 2, 3, 4)
        )
        checks["balance_growth"] = {
            "passed": growth,
            "value": 4 * sizes["growth_words"],
        }

        worst_billiard = 0.0
        for _ in range(sizes["billiard_targets"]):
            target = rng.integers(0, 51, size=3)
            if target.sum() == 0:
                continue
            word = sadic.billiard_word(target)
            worst_billiard = max(worst_billiard, sadic.prefix_projection_bound(word))
        checks["billiard"] = {"passed": worst_billiard <= 1.0, "value": worst_billiard}

        gaps = []
        for box in INVARIANCE_BOXES:
            pulled, direct = lyapunov_bounds.measure_invariance(box)
            gaps.append(abs(pulled - direct))
        checks["invariance"] = {
            "passed": max(gaps) <= INVARIANCE_TOLERANCE,
            "value": max(gaps),
        }

        total = lyapunov_bounds.mass()
        checks["mass"] = {
            "passed": math.isclose(total, 1.0, abs_tol=MASS_TOLERANCE),
            "value": total,
        }

        return {
            "checks": checks,
            "sizes": {**sizes, "survey_sequences": SURVEY_SEQUENCES},
            "passed": all(check["passed"] for check in checks.values()),
        }
