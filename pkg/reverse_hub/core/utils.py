"""Вспомогательные функции валидации аргументов."""

from __future__ import annotations

from reverse_hub.core.exceptions import ResourceLimitError
from reverse_hub.infra.settings import SettingsLoader

BRANCH_ALPHABET = "1234"
SORTED_ALPHABET = "abcd"
LETTERS = "123"


def validate_word(
    word, alphabet: str = BRANCH_ALPHABET, max_length: int | None = None
) -> str:
    """
    Валидировать слово над алфавитом ветвей.

    Args:
        word: Строка или последовательность символов/целых
        alphabet: Допустимые символы
        max_length: Предел длины (по умолчанию MAX_WORD_LENGTH)

    Returns:
        Слово в виде строки

    Raises:
        ValueError: Если встречен недопустимый символ
        ResourceLimitError: Если слово длиннее предела
    """
    if isinstance(word, str):
        text = word
    else:
        text = "".join(str(a) for a in word)

    bad = set(text) - set(alphabet)
    if bad:
        raise ValueError(
            f"Недопустимые символы {sorted(bad)} в слове, алфавит: {alphabet}"
        )

    if max_length is None:
        max_length = SettingsLoader().get("MAX_WORD_LENGTH")
    if len(text) > max_length:
        raise ResourceLimitError("длина слова", len(text), max_length)
    return text


def validate_depth(n: int, low: int, high: int, name: str = "n") -> int:
    """
    Валидировать глубину перебора.

    Raises:
        ValueError: Если значение не целое
        ResourceLimitError: Если значение вне [low, high]
    """
    if isinstance(n, bool) or not isinstance(n, int):
        raise ValueError(f"'{name}' должен быть целым числом")
    if not low <= n <= high:
        raise ResourceLimitError(name, n, f"[{low}, {high}]")
    return n


def validate_positive_int(value, name: str) -> int:
    """
    Валидировать положительное целое.

    Raises:
        ValueError: Если значение не положительное целое
    """
    if isinstance(value, bool) or not isinstance(value, int) or value <= 0:
        raise ValueError(f"'{name}' должен быть положительным целым числом")
    return value


def validate_rate(rate: float) -> float:
    """
    Валидировать долю вставки блока.

    Raises:
        ValueError: Если доля вне [0, 1]
    """
    if not isinstance(rate, (int, float)):
        raise TypeError("'inject_rate' должен быть числом")
    if not 0.0 <= rate <= 1.0:
        raise ValueError("'inject_rate' должен лежать в [0, 1]")
    return float(rate)


def parse_vector(text: str, size: int = 3) -> tuple:
    """
    Разобрать вектор из строки вида '0.6,0.3,0.1'.

    Raises:
        ValueError: Если число компонент не совпадает
    """
    parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
    if len(parts) != size:
        raise ValueError(f"Ожидалось {size} компоненты, получено {len(parts)}")
    return tuple(float(p) for p in parts)
