"""Подстановки σ₁–σ₄ над алфавитом {1,2,3} и их реестр."""

from __future__ import annotations

from reverse_hub.core.exactlin import IntMatrix3
from reverse_hub.core.utils import LETTERS


def abelianize(word: str) -> tuple:
    """Вектор l(w) числа вхождений букв 1, 2, 3."""
    return tuple(word.count(letter) for letter in LETTERS)


class Substitution:
    """
    Нестирающая подстановка над {1,2,3}.

    Образы применяются через таблицу str.translate, поэтому apply
    работает за один проход по слову.
    """

    def __init__(self, images: dict, name: str = "τ"):
        """
        Инициализация подстановки.

        Args:
            images: Буква → непустой образ над {1,2,3}
            name: Обозначение для отчетов
        """
        self._validate_images(images)
        self.images = {letter: images[letter] for letter in LETTERS}
        self.name = name
        self._table = str.maketrans(self.images)

    @staticmethod
    def _validate_images(images: dict):
        """Валидация образов."""
        if set(images) != set(LETTERS):
            raise ValueError("Подстановка должна быть задана на буквах 1, 2, 3")
        for letter, image in images.items():
            if not image or not isinstance(image, str):
                raise ValueError(f"Образ буквы {letter} должен быть непустым")
            if set(image) - set(LETTERS):
                raise ValueError(f"Образ '{image}' содержит буквы вне 1, 2, 3")

    def apply(self, word: str) -> str:
        """Образ слова: конкатенация образов букв."""
        if set(word) - set(LETTERS):
            raise ValueError(f"Слово '{word}' содержит буквы вне 1, 2, 3")
        return word.translate(self._table)

    def __call__(self, word: str) -> str:
        return self.apply(word)

    @property
    def incidence(self) -> IntMatrix3:
        """Матрица инцидентности: столбец j равен l(σ(j))."""
        columns = [abelianize(self.images[letter]) for letter in LETTERS]
        return IntMatrix3(tuple(zip(*columns)))

    def compose(self, other: Substitution) -> Substitution:
        """Композиция self∘other."""
        images = {letter: self.apply(other.images[letter]) for letter in LETTERS}
        return Substitution(images, name=f"{self.name}∘{other.name}")

    def __matmul__(self, other: Substitution) -> Substitution:
        return self.compose(other)

    def is_left_proper(self) -> bool:
        """Все образы начинаются с одной буквы."""
        return len({image[0] for image in self.images.values()}) == 1

    def is_right_proper(self) -> bool:
        """Все образы заканчиваются одной буквой."""
        return len({image[-1] for image in self.images.values()}) == 1

    def get_display_info(self) -> str:
        """Строка для таблиц CLI и логов."""
        parts = ", ".join(f"{k}→{v}" for k, v in self.images.items())
        return f"{self.name}: {parts}"

    def __eq__(self, other) -> bool:
        return isinstance(other, Substitution) and self.images == other.images

    def __hash__(self) -> int:
        return hash(tuple(self.images.items()))

    def __repr__(self) -> str:
        return f"Substitution({self.get_display_info()})"

    @classmethod
    def identity(cls) -> Substitution:
        """Тождественная подстановка."""
        return cls({letter: letter for letter in LETTERS}, name="id")


class ArnouxRauzySubstitution(Substitution):
    """σᵢ для i ∈ {1,2,3}: i ↦ i, j ↦ j·i."""

    def __init__(self, letter: str):
        """
        Инициализация подстановки Арну-Рози.

        Args:
            letter: Выделенная буква i
        """
        if letter not in LETTERS:
            raise ValueError(f"Буква '{letter}' вне алфавита {LETTERS}")
        images = {j: j if j == letter else j + letter for j in LETTERS}
        super().__init__(images, name=f"σ{letter}")
        self.letter = letter

    def get_display_info(self) -> str:
        return f"[AR] {super().get_display_info()}"


class ReverseSubstitution(Substitution):
    """σ₄: 1 ↦ 23, 2 ↦ 31, 3 ↦ 12."""

    def __init__(self):
        super().__init__({"1": "23", "2": "31", "3": "12"}, name="σ4")

    def get_display_info(self) -> str:
        return f"[REV] {super().get_display_info()}"


_SUBSTITUTION_REGISTRY = {
    1: ArnouxRauzySubstitution("1"),
    2: ArnouxRauzySubstitution("2"),
    3: ArnouxRauzySubstitution("3"),
    4: ReverseSubstitution(),
}


def get_substitution(index) -> Substitution:
    """
    Фабричный метод получения σᵢ по номеру.

    Args:
        index: Номер 1-4 (целое или строка)

    Raises:
        ValueError: Если номер вне 1-4
    """
    try:
        key = int(index)
    except (TypeError, ValueError):
        key = None
    if key not in _SUBSTITUTION_REGISTRY:
        raise ValueError(f"Неизвестная подстановка '{index}', допустимо 1-4")
    return _SUBSTITUTION_REGISTRY[key]


def get_all_substitutions() -> dict:
    """Все зарегистрированные подстановки."""
    return _SUBSTITUTION_REGISTRY.copy()
