"""Координатор параллельного перебора поддеревьев."""

from __future__ import annotations

import logging
import math
import multiprocessing as mp
import time
from dataclasses import dataclass, field
from functools import partial

from reverse_hub.enumeration.config import EnumerationConfig
from reverse_hub.enumeration.traversal import (
    SubtreeResult,
    evaluate_subtree,
    get_traversal,
)

# Каждое слагаемое вносит не более 2⁻⁴⁸ абсолютной ошибки
TERM_ERROR = 2.0**-48
UNIT_ROUNDOFF = 2.0**-53

# Как часто писать в лог о ходе перебора
PROGRESS_EVERY = 16


@dataclass
class EnumerationResult:
    """Итог перебора: частичные суммы в каноническом порядке префиксов."""

    config: EnumerationConfig
    subtrees: list[SubtreeResult] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def positive(self) -> float:
        """Вклад цилиндров с положительным максимумом."""
        return math.fsum(s.positive for s in self.subtrees)

    @property
    def negative(self) -> float:
        """Вклад цилиндров с отрицательным максимумом."""
        return math.fsum(s.negative for s in self.subtrees)

    @property
    def total(self) -> float:
        """Сумма по всем поддеревьям."""
        return math.fsum(
            value for s in self.subtrees for value in (s.positive, s.negative)
        )

    @property
    def word_count(self) -> int:
        """Число просуммированных слов."""
        return sum(s.word_count for s in self.subtrees)

    @property
    def accumulated_error(self) -> float:
        """
        Консервативная оценка ошибки округления.

        Слагаемое на каждое слово плюс относительная ошибка вычисления
        членов (логарифм, произведения, деления) порядка log2(N) + 64 ulp.
        """
        count = self.word_count
        abs_total = math.fsum(s.abs_total for s in self.subtrees)
        relative = (64 + math.log2(max(count, 2))) * UNIT_ROUNDOFF
        return count * TERM_ERROR + relative * abs_total


class EnumerationRunner:
    """Распределяет поддеревья по процессам и сводит частичные суммы."""

    def __init__(self, config: EnumerationConfig):
        """
        Инициализация координатора.

        Args:
            config: Конфигурация перебора
        """
        self.config = config
        self.traversal = get_traversal(config)
        self.logger = logging.getLogger(self.__class__.__name__)

    def run(self) -> EnumerationResult:
        """
        Выполнить перебор.

        Порядок сведения фиксирован порядком префиксов, поэтому результат
        не зависит от числа процессов.
        """
        prefixes = self.traversal.prefixes()
        self.logger.info(
            f"Starting {self.config.variant} enumeration n={self.config.n}: "
            f"{len(prefixes)} subtrees, threads={self.config.threads}"
        )
        started = time.perf_counter()
        worker = partial(evaluate_subtree, self.config)

        result = EnumerationResult(self.config)
        if self.config.threads == 1:
            for prefix in prefixes:
                self._collect(result, worker(prefix), len(prefixes))
        else:
            with mp.Pool(processes=self.config.threads) as pool:
                # imap сохраняет порядок префиксов
                for subtree in pool.imap(worker, prefixes):
                    self._collect(result, subtree, len(prefixes))

        result.wall_time = time.perf_counter() - started
        self.logger.info(
            f"Finished enumeration n={self.config.n}: total={result.total!r} "
            f"words={result.word_count} in {result.wall_time:.2f}s"
        )
        return result

    def _collect(self, result: EnumerationResult, subtree: SubtreeResult, total: int):
        result.subtrees.append(subtree)
        done = len(result.subtrees)
        if done % PROGRESS_EVERY == 0 or done == total:
            self.logger.info(f"Subtrees done: {done}/{total}")
