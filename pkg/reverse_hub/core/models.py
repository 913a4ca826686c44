"""Модели результатов: отчеты об оценках, спектре и сбалансированности."""

from __future__ import annotations

from datetime import datetime

from reverse_hub import __version__


class RunConfig:
    """Параметры запуска команды, сохраняемые в каждой записи."""

    def __init__(self, command: str, params: dict | None = None):
        """
        Инициализация конфигурации запуска.

        Args:
            command: Имя команды CLI
            params: Параметры команды
        """
        if not command:
            raise ValueError("Имя команды не может быть пустым")
        self.command = command
        self.params = dict(params or {})
        self.started_at = datetime.now()

    def to_dict(self) -> dict:
        """Сериализация в словарь."""
        return {
            "command": self.command,
            "params": self.params,
            "started_at": self.started_at.isoformat(),
            "version": __version__,
        }

    @classmethod
    def from_dict(cls, data: dict) -> RunConfig:
        """Десериализация из словаря."""
        config = cls(data["command"], data.get("params"))
        config.started_at = datetime.fromisoformat(data["started_at"])
        return config


class BoundReport:
    """Результат вычисления оценки L1(n) + L2(n)."""

    def __init__(
        self,
        n: int,
        l1: float,
        l2: float,
        accumulated_error: float,
        word_count: int,
        wall_time: float,
        variant: str = "unsorted",
        norm: str = "induced",
        positive_part: float = 0.0,
        negative_part: float = 0.0,
    ):
        """
        Инициализация отчета.

        Args:
            n: Глубина перебора
            l1: Вклад цилиндров iⁿ
            l2: Сумма по остальным цилиндрам
            accumulated_error: Консервативная оценка ошибки округления
            word_count: Число просуммированных слов
            wall_time: Время вычисления в секундах
            variant: unsorted или sorted
            norm: Интерпретация нормы матриц D
            positive_part: Вклад цилиндров с положительным максимумом
            negative_part: Вклад цилиндров с отрицательным максимумом
        """
        if n < 1:
            raise ValueError("Глубина должна быть положительной")
        if accumulated_error < 0:
            raise ValueError("Оценка ошибки не может быть отрицательной")
        self.n = n
        self.l1 = float(l1)
        self.l2 = float(l2)
        self.accumulated_error = float(accumulated_error)
        self.word_count = word_count
        self.wall_time = float(wall_time)
        self.variant = variant
        self.norm = norm
        self.positive_part = float(positive_part)
        self.negative_part = float(negative_part)

    @property
    def total(self) -> float:
        """Итоговая оценка L1 + L2."""
        return self.l1 + self.l2

    @property
    def certified_upper(self) -> float:
        """Оценка сверху с учетом ошибки округления."""
        return self.total + self.accumulated_error

    @property
    def is_negative(self) -> bool:
        """Отрицательна ли оценка с учетом ошибки."""
        return self.certified_upper < 0

    def to_dict(self) -> dict:
        """Сериализация в словарь."""
        return {
            "n": self.n,
            "variant": self.variant,
            "norm": self.norm,
            "l1": self.l1,
            "l2": self.l2,
            "total": self.total,
            "positive_part": self.positive_part,
            "negative_part": self.negative_part,
            "accumulated_error": self.accumulated_error,
            "certified_upper": self.certified_upper,
            "word_count": self.word_count,
            "wall_time": self.wall_time,
        }

    @classmethod
    def from_dict(cls, data: dict) -> BoundReport:
        """Десериализация из словаря."""
        return cls(
            n=data["n"],
            l1=data["l1"],
            l2=data["l2"],
            accumulated_error=data["accumulated_error"],
            word_count=data["word_count"],
            wall_time=data["wall_time"],
            variant=data.get("variant", "unsorted"),
            norm=data.get("norm", "induced"),
            positive_part=data.get("positive_part", 0.0),
            negative_part=data.get("negative_part", 0.0),
        )


class SpectrumEstimate:
    """Оценка спектра Ляпунова коцикла A методом Монте-Карло."""

    def __init__(
        self,
        lambdas,
        stderr: float,
        iterations: int,
        seed: int,
        lambda_d: float | None = None,
        restarts: int = 0,
    ):
        """
        Инициализация оценки.

        Args:
            lambdas: Три показателя (сортируются по убыванию)
            stderr: Стандартная ошибка (максимум по направлениям)
            iterations: Общее число шагов
            seed: Зерно генератора
            lambda_d: Старший показатель коцикла D
            restarts: Число перезапусков по защите от салфетки
        """
        values = sorted((float(v) for v in lambdas), reverse=True)
        if len(values) != 3:
            raise ValueError("Ожидалось три показателя Ляпунова")
        self.lambda1, self.lambda2, self.lambda3 = values
        self.stderr = float(stderr)
        self.iterations = iterations
        self.seed = seed
        self.lambda_d = lambda_d
        self.restarts = restarts

    def to_dict(self) -> dict:
        """Сериализация в словарь."""
        return {
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "lambda3": self.lambda3,
            "lambda_d": self.lambda_d,
            "stderr": self.stderr,
            "iterations": self.iterations,
            "seed": self.seed,
            "restarts": self.restarts,
        }

    @classmethod
    def from_dict(cls, data: dict) -> SpectrumEstimate:
        """Десериализация из словаря."""
        return cls(
            (data["lambda1"], data["lambda2"], data["lambda3"]),
            stderr=data["stderr"],
            iterations=data["iterations"],
            seed=data["seed"],
            lambda_d=data.get("lambda_d"),
            restarts=data.get("restarts", 0),
        )


class BalanceReport:
    """Эмпирическая сбалансированность языка (до ограничения длины)."""

    def __init__(
        self,
        letter_balance_constant: int,
        factor_balance: dict,
        projection_sup: float,
        depth: int,
        cap: int,
        frequency: tuple | None = None,
        cone_diameter: float | None = None,
    ):
        """
        Инициализация отчета.

        Args:
            letter_balance_constant: Наименьшее C буквенной сбалансированности
            factor_balance: Фактор → максимальное расхождение числа вхождений
            projection_sup: sup ‖π_{u,1}(l(v))‖_∞ по факторам выборки
            depth: Глубина языка
            cap: Предел длины факторов
            frequency: Вектор частот u
            cone_diameter: Диаметр вложенных конусов для u
        """
        self.letter_balance_constant = int(letter_balance_constant)
        self.factor_balance = dict(factor_balance)
        self.projection_sup = float(projection_sup)
        self.depth = depth
        self.cap = cap
        self.frequency = frequency
        self.cone_diameter = cone_diameter

    @property
    def max_letter_row(self) -> int:
        """Наибольшее расхождение по однобуквенным факторам."""
        rows = [v for k, v in self.factor_balance.items() if len(k) == 1]
        return max(rows, default=0)

    def to_dict(self) -> dict:
        """Сериализация в словарь."""
        return {
            "label": f"up to cap {self.cap}",
            "depth": self.depth,
            "cap": self.cap,
            "letter_balance_constant": self.letter_balance_constant,
            "projection_sup": self.projection_sup,
            "factor_balance": self.factor_balance,
            "frequency": list(self.frequency) if self.frequency else None,
            "cone_diameter": self.cone_diameter,
        }

    @classmethod
    def from_dict(cls, data: dict) -> BalanceReport:
        """Десериализация из словаря."""
        frequency = data.get("frequency")
        return cls(
            letter_balance_constant=data["letter_balance_constant"],
            factor_balance=data["factor_balance"],
            projection_sup=data["projection_sup"],
            depth=data["depth"],
            cap=data["cap"],
            frequency=tuple(frequency) if frequency else None,
            cone_diameter=data.get("cone_diameter"),
        )
