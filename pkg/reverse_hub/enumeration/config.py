"""Конфигурация перебора цилиндров."""

from dataclasses import dataclass

from reverse_hub.core.exactlin import NORM_KINDS
from reverse_hub.core.utils import (
    BRANCH_ALPHABET,
    SORTED_ALPHABET,
    validate_depth,
    validate_positive_int,
)
from reverse_hub.infra.settings import SettingsLoader

VARIANTS = ("unsorted", "sorted")
DENSITY_MODES = ("upper", "lower")


@dataclass
class EnumerationConfig:
    """Параметры перебора дерева слов длины n."""

    n: int
    variant: str = "unsorted"
    norm: str | None = None
    density: str = "upper"
    threads: int = 1

    # Глубина префикса, по которому дерево делится на поддеревья
    split_depth: int | None = None
    # Максимальная глубина поддерева, обрабатываемого одним массивом
    leaf_batch_depth: int | None = None

    def __post_init__(self):
        """Заполнение значений по умолчанию и проверка."""
        settings = SettingsLoader()
        if self.variant not in VARIANTS:
            raise ValueError(
                f"Неизвестный вариант '{self.variant}', допустимо: {VARIANTS}"
            )
        if self.density not in DENSITY_MODES:
            raise ValueError(
                f"Неизвестный режим плотности '{self.density}', "
                f"допустимо: {DENSITY_MODES}"
            )

        high = settings.get(
            "MAX_BOUND_DEPTH" if self.variant == "unsorted" else "MAX_SORTED_DEPTH"
        )
        validate_depth(self.n, 2, high)

        if self.norm is None:
            self.norm = settings.get("NORM")
        if self.norm not in NORM_KINDS:
            raise ValueError(
                f"Неизвестная норма '{self.norm}', допустимо: {NORM_KINDS}"
            )

        validate_positive_int(self.threads, "threads")
        if self.split_depth is None:
            self.split_depth = settings.get("SPLIT_DEPTH")
        if self.leaf_batch_depth is None:
            self.leaf_batch_depth = settings.get("LEAF_BATCH_DEPTH")
        validate_positive_int(self.split_depth, "split_depth")
        validate_positive_int(self.leaf_batch_depth, "leaf_batch_depth")

    @property
    def prefix_depth(self) -> int:
        """Длина префиксов поддеревьев."""
        return min(self.n, max(self.split_depth, self.n - self.leaf_batch_depth))

    @property
    def alphabet(self) -> str:
        """Алфавит перебора."""
        return BRANCH_ALPHABET if self.variant == "unsorted" else SORTED_ALPHABET

    def to_dict(self) -> dict:
        """Представление для JSON."""
        return {
            "n": self.n,
            "variant": self.variant,
            "norm": self.norm,
            "density": self.density,
            "threads": self.threads,
            "split_depth": self.split_depth,
            "leaf_batch_depth": self.leaf_batch_depth,
        }
