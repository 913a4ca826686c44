"""
S-адические языки подстановок σ₁–σ₄.

Направляющие последовательности, композиции τ_{[k,l)}, выборки языка,
константы сбалансированности по огибающим числа букв, обобщенный правый
собственный вектор и конечные проверки констант 11/7, 5/7 и 10.
"""

from __future__ import annotations

import itertools
import math
import os
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from reverse_hub.core.exactlin import inf_norm_restricted
from reverse_hub.core.exceptions import (
    BilliardConstructionError,
    DegenerateGeometryError,
    DirectiveSequenceError,
    ResourceLimitError,
)
from reverse_hub.core.models import BalanceReport
from reverse_hub.core.substitutions import Substitution, abelianize, get_substitution
from reverse_hub.core.utils import (
    BRANCH_ALPHABET,
    LETTERS,
    validate_positive_int,
    validate_rate,
)
from reverse_hub.infra.settings import SettingsLoader

# Вставляемый блок (σ₁σ₂σ₃)⁹
BLOCK_PATTERN = "123" * 9
BLOCK_LENGTH = len(BLOCK_PATTERN)
# Окно τ_{[m−3,m+3)} = (σ₁σ₂σ₃)², при котором m допустимо
ADMISSIBLE_WINDOW = "123123"

RANDOM_CHUNK = 4096
# Предел числа элементов в одном векторном проходе огибающих
ENVELOPE_BLOCK = 1 << 21

CONSTELLATION_LIMIT = 11 / 7
CONTRACTION_LIMIT = 5 / 7
RESTRICTED_NORM_LIMIT = 10.0

FREQUENCY_VECTORS = ((4, 2, 1), (3, 2, 1), (2, 1, 1))
ONE_VECTORS = ((4, 3, 2), (2, 2, 1), (1, 1, 1))

_INT_MAX = np.iinfo(np.int64).max


@lru_cache(maxsize=256)
def _random_chunk(seed: int, index: int, alphabet: str) -> str:
    """Кусок случайной последовательности: счетчик Philox задает номер куска."""
    counter = np.array([0, index, 0, 0], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=seed, counter=counter))
    picks = rng.integers(0, len(alphabet), size=RANDOM_CHUNK)
    return "".join(alphabet[i] for i in picks)


@lru_cache(maxsize=4096)
def _block_offset(seed: int, block: int, span: int) -> int:
    """Сдвиг блока внутри своего периода."""
    if span <= 0:
        return 0
    counter = np.array([0, block, 1, 0], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=seed, counter=counter))
    return int(rng.integers(0, span + 1))


class DirectiveSequence:
    """
    Направляющая последовательность над {σ₁,σ₂,σ₃,σ₄}.

    Символы хранятся строками '1'-'4'. Любой префикс вычисляется заново
    по seed без хранения потока. При inject_rate > 0 в каждый период
    длины 27/inject_rate вставляется блок (σ₁σ₂σ₃)⁹ со сдвигом,
    зависящим от seed; inject_rate равна доле позиций, покрытых блоками.
    """

    KINDS = ("explicit", "random", "periodic")

    def __init__(
        self,
        kind: str = "random",
        prefix: str | None = None,
        pattern: str | None = None,
        seed: int | None = None,
        alphabet: str = BRANCH_ALPHABET,
        inject_rate: float = 0.0,
    ):
        """
        Инициализация последовательности.

        Args:
            kind: explicit | random | periodic
            prefix: Конечный префикс для explicit
            pattern: Период для periodic
            seed: Зерно для random и для сдвигов блоков
            alphabet: Подмножество {1,2,3,4} для random
            inject_rate: Доля позиций, покрытых блоками (σ₁σ₂σ₃)⁹
        """
        if kind not in self.KINDS:
            raise ValueError(f"Неизвестный вид '{kind}', допустимо: {self.KINDS}")
        self.kind = kind
        self.seed = SettingsLoader().get("DEFAULT_SEED") if seed is None else seed
        if isinstance(self.seed, bool) or not isinstance(self.seed, int):
            raise ValueError("'seed' должен быть целым числом")
        if self.seed < 0:
            raise ValueError("'seed' должен быть неотрицательным")
        self.inject_rate = validate_rate(inject_rate)

        if kind == "explicit":
            self.source = self._validate_symbols(prefix, "prefix", allow_empty=True)
        elif kind == "periodic":
            self.source = self._validate_symbols(pattern, "pattern")
        else:
            self.source = self._validate_symbols(alphabet, "alphabet")
            self.source = "".join(sorted(set(self.source)))

    @staticmethod
    def _validate_symbols(text, name: str, allow_empty: bool = False) -> str:
        if text is None or (not text and not allow_empty):
            raise ValueError(f"'{name}' должен быть непустой строкой")
        text = "".join(str(s) for s in text)
        bad = set(text) - set(BRANCH_ALPHABET)
        if bad:
            raise ValueError(f"Недопустимые символы {sorted(bad)} в '{name}'")
        return text

    @classmethod
    def explicit(cls, prefix: str) -> DirectiveSequence:
        """Конечный префикс без вставок."""
        return cls(kind="explicit", prefix=prefix)

    @classmethod
    def periodic(
        cls, pattern: str, inject_rate: float = 0.0, seed: int | None = None
    ) -> DirectiveSequence:
        """Периодическая последовательность pattern^∞."""
        return cls(kind="periodic", pattern=pattern, inject_rate=inject_rate, seed=seed)

    @classmethod
    def random(
        cls,
        seed: int | None = None,
        alphabet: str = BRANCH_ALPHABET,
        inject_rate: float = 0.0,
    ) -> DirectiveSequence:
        """Равномерная случайная последовательность над alphabet."""
        return cls(kind="random", seed=seed, alphabet=alphabet, inject_rate=inject_rate)

    @property
    def period(self) -> float:
        """Длина периода вставки блоков."""
        return BLOCK_LENGTH / self.inject_rate

    def _base_symbol(self, k: int) -> str:
        if self.kind == "explicit":
            if k >= len(self.source):
                raise DirectiveSequenceError(
                    f"префикс длины {len(self.source)} исчерпан на позиции {k}"
                )
            return self.source[k]
        if self.kind == "periodic":
            return self.source[k % len(self.source)]
        return _random_chunk(self.seed, k // RANDOM_CHUNK, self.source)[
            k % RANDOM_CHUNK
        ]

    def _base_prefix(self, length: int) -> str:
        if self.kind == "explicit":
            if length > len(self.source):
                raise DirectiveSequenceError(
                    f"префикс длины {len(self.source)} короче запрошенных {length}"
                )
            return self.source[:length]
        if self.kind == "periodic":
            repeats = length // len(self.source) + 1
            return (self.source * repeats)[:length]
        chunks = -(-length // RANDOM_CHUNK)
        text = "".join(
            _random_chunk(self.seed, c, self.source) for c in range(chunks)
        )
        return text[:length]

    def block_start(self, block: int) -> int:
        """Начало блока с номером block."""
        period = self.period
        span = math.floor(period) - BLOCK_LENGTH
        return math.floor(block * period) + _block_offset(self.seed, block, span)

    def block_starts(self, length: int) -> list[int]:
        """Начала блоков, пересекающих [0, length)."""
        if self.inject_rate == 0.0:
            return []
        starts = []
        block = 0
        while math.floor(block * self.period) < length:
            start = self.block_start(block)
            if start < length:
                starts.append(start)
            block += 1
        return starts

    def _block_symbol(self, k: int) -> str | None:
        if self.inject_rate == 0.0:
            return None
        period = self.period
        block = math.floor(k / period)
        if math.floor((block + 1) * period) <= k:
            block += 1
        start = self.block_start(block)
        if start <= k < start + BLOCK_LENGTH:
            return BLOCK_PATTERN[k - start]
        return None

    def symbol(self, k: int) -> str:
        """Символ τ_k."""
        if k < 0:
            raise ValueError("Позиция должна быть неотрицательной")
        injected = self._block_symbol(k)
        return injected if injected is not None else self._base_symbol(k)

    def prefix(self, length: int) -> str:
        """Символы τ_0⋯τ_{length−1}."""
        if length < 0:
            raise ValueError("Длина префикса должна быть неотрицательной")
        starts = self.block_starts(length)
        if not starts:
            return self._base_prefix(length)

        symbols = list(self._base_prefix(length))
        for start in starts:
            stop = min(start + BLOCK_LENGTH, length)
            symbols[start:stop] = BLOCK_PATTERN[: stop - start]
        return "".join(symbols)

    def coverage(self, length: int) -> float:
        """Доля позиций [0, length), покрытых вставленными блоками."""
        if length <= 0:
            return 0.0
        covered = sum(
            min(BLOCK_LENGTH, length - start) for start in self.block_starts(length)
        )
        return covered / length

    def to_dict(self) -> dict:
        """Описание для RunConfig."""
        return {
            "kind": self.kind,
            "source": self.source,
            "seed": self.seed,
            "inject_rate": self.inject_rate,
        }


def compose_range(
    d: DirectiveSequence, k: int, l: int, max_length: int | None = None
) -> Substitution:
    """
    Композиция τ_{[k,l)} = τ_k∘⋯∘τ_{l−1}.

    Raises:
        ResourceLimitError: Если образ длиннее MAX_IMAGE_LENGTH
    """
    if k < 0 or k > l:
        raise ValueError(f"Нужно 0 ≤ k ≤ l, получено k={k}, l={l}")
    if max_length is None:
        max_length = SettingsLoader().get("MAX_IMAGE_LENGTH")

    images = {letter: letter for letter in LETTERS}
    for position, symbol in enumerate(d.prefix(l)[k:], start=k):
        sigma = get_substitution(symbol)
        # τ_{[k,j+1)}(a) = τ_{[k,j)}(σ(a))
        images = {
            a: "".join(images[b] for b in sigma.images[a]) for a in LETTERS
        }
        longest = max(len(image) for image in images.values())
        if longest > max_length:
            raise ResourceLimitError(
                f"длина образа τ[{k},{position + 1})", longest, max_length
            )
    return Substitution(images, name=f"τ[{k},{l})")


def _cumulative_counts(word: str) -> np.ndarray:
    """Префиксные суммы числа букв, форма (len+1, 3)."""
    codes = np.frombuffer(word.encode("ascii"), dtype=np.uint8) - ord("1")
    onehot = np.zeros((len(word) + 1, 3), dtype=np.int64)
    onehot[np.arange(1, len(word) + 1), codes] = 1
    return np.cumsum(onehot, axis=0)


def _letter_envelopes(word: str, cap: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Минимум и максимум числа каждой буквы по окнам длины 1..cap.

    Строки без окон заполнены (INT_MAX, −1).
    """
    mins = np.full((cap, 3), _INT_MAX, dtype=np.int64)
    maxs = np.full((cap, 3), -1, dtype=np.int64)
    size = len(word)
    top = min(cap, size)
    if top == 0:
        return mins, maxs

    cumulative = _cumulative_counts(word)
    starts = np.arange(size)
    step = max(1, ENVELOPE_BLOCK // size)
    for first in range(1, top + 1, step):
        lengths = np.arange(first, min(first + step, top + 1))
        ends = starts[None, :] + lengths[:, None]
        valid = (ends <= size)[..., None]
        counts = cumulative[np.minimum(ends, size)] - cumulative[starts][None]
        mins[lengths - 1] = np.where(valid, counts, _INT_MAX).min(axis=1)
        maxs[lengths - 1] = np.where(valid, counts, -1).max(axis=1)
    return mins, maxs


def _balance_from_envelopes(mins: np.ndarray, maxs: np.ndarray) -> int:
    present = maxs[:, 0] >= 0
    if not present.any():
        return 0
    return int((maxs[present] - mins[present]).max())


class LanguageSample:
    """
    Выборка S-адического языка глубины n.

    Слова τ_{[0,n)}(i) хранятся целиком, множество факторов до длины cap
    строится лениво и ограничено MAX_FACTORS.
    """

    def __init__(self, depth: int, words: dict, cap: int):
        """
        Инициализация выборки.

        Args:
            depth: Глубина n
            words: Метка → слово (обычно буква i → τ_{[0,n)}(i))
            cap: Предел длины факторов
        """
        if not words:
            raise ValueError("Выборка языка не может быть пустой")
        validate_positive_int(cap, "cap")
        self.depth = depth
        self.words = dict(words)
        self.cap = cap

    @cached_property
    def envelopes(self) -> tuple[np.ndarray, np.ndarray]:
        """Огибающие числа букв по всем словам выборки."""
        mins = np.full((self.cap, 3), _INT_MAX, dtype=np.int64)
        maxs = np.full((self.cap, 3), -1, dtype=np.int64)
        for word in self.words.values():
            word_mins, word_maxs = _letter_envelopes(word, self.cap)
            mins = np.minimum(mins, word_mins)
            maxs = np.maximum(maxs, word_maxs)
        return mins, maxs

    @cached_property
    def factors(self) -> frozenset:
        """
        Все различные факторы длины ≤ cap.

        Raises:
            ResourceLimitError: Если факторов больше MAX_FACTORS
        """
        limit = SettingsLoader().get("MAX_FACTORS")
        found = set()
        for length in range(1, self.cap + 1):
            for word in self.words.values():
                found.update(
                    word[s : s + length] for s in range(len(word) - length + 1)
                )
            if len(found) > limit:
                raise ResourceLimitError("число факторов", len(found), limit)
        return frozenset(found)

    def factors_of_length(self, length: int) -> list[str]:
        """Факторы заданной длины в лексикографическом порядке."""
        return sorted(f for f in self.factors if len(f) == length)

    def export(self, path: str) -> int:
        """
        Сохранить список факторов: одно слово в строке, по длине и алфавиту.

        Returns:
            Число записанных слов
        """
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        ordered = sorted(self.factors, key=lambda f: (len(f), f))

        temp_file = path + ".tmp"
        with open(temp_file, "w", encoding="utf-8") as f:
            for factor in ordered:
                f.write(factor + "\n")
        os.replace(temp_file, path)
        return len(ordered)


def generate_language(d: DirectiveSequence, n: int, cap: int) -> LanguageSample:
    """Выборка языка: образы τ_{[0,n)}(i) и их факторы до длины cap."""
    if n < 0:
        raise ValueError("Глубина языка должна быть неотрицательной")
    tau = compose_range(d, 0, n)
    return LanguageSample(n, tau.images, cap)


def letter_balance(sample: LanguageSample) -> int:
    """Наименьшее C буквенной сбалансированности факторов выборки."""
    mins, maxs = sample.envelopes
    return _balance_from_envelopes(mins, maxs)


def word_letter_balance(word: str) -> int:
    """Константа буквенной сбалансированности факторов одного слова."""
    if not word:
        raise ValueError("Слово должно быть непустым")
    if set(word) - set(LETTERS):
        raise ValueError(f"Слово '{word}' содержит буквы вне 1, 2, 3")
    return _balance_from_envelopes(*_letter_envelopes(word, len(word)))


def balance_growth_check(u: str, i) -> bool:
    """C(σᵢ(u)) ≤ C(u) + 4 для i ≤ 3 и ≤ C(u) + 2 для i = 4."""
    if not u:
        raise ValueError("Слово должно быть непустым")
    sigma = get_substitution(i)
    slack = 2 if int(i) == 4 else 4
    return word_letter_balance(sigma.apply(u)) <= word_letter_balance(u) + slack


def projection_sup(sample: LanguageSample, frequency) -> float:
    """sup ‖π_{u,1}(l(v))‖_∞ по факторам v выборки, u нормирован в ℓ¹."""
    u = np.asarray(frequency, dtype=float)
    u = u / u.sum()
    mins, maxs = sample.envelopes
    present = maxs[:, 0] >= 0
    lengths = np.arange(1, sample.cap + 1, dtype=float)[present, None]
    expected = lengths * u[None, :]
    above = maxs[present] - expected
    below = expected - mins[present]
    return float(np.maximum(above, below).max())


def factor_balance(
    sample: LanguageSample, factor_cap: int | None = None, window_cap: int | None = None
) -> dict:
    """
    Таблица факторной сбалансированности до ограничения длины.

    Для каждого фактора v длины ≤ factor_cap: максимум по длинам окон
    ℓ ≤ window_cap разности наибольшего и наименьшего числа вхождений v.
    """
    if factor_cap is None:
        factor_cap = min(sample.cap, SettingsLoader().get("FACTOR_CAP"))
    if window_cap is None:
        window_cap = sample.cap
    factor_cap = min(factor_cap, sample.cap)

    coded = [
        np.frombuffer(word.encode("ascii"), dtype=np.uint8)
        for word in sample.words.values()
    ]
    table = {}
    for factor in sorted(
        (f for f in sample.factors if len(f) <= factor_cap),
        key=lambda f: (len(f), f),
    ):
        pattern = np.frombuffer(factor.encode("ascii"), dtype=np.uint8)
        mins, maxs = _occurrence_envelopes(coded, pattern, window_cap)
        present = maxs >= 0
        table[factor] = int((maxs[present] - mins[present]).max(initial=0))
    return table


def _occurrence_envelopes(
    coded: list, pattern: np.ndarray, window_cap: int
) -> tuple[np.ndarray, np.ndarray]:
    """Огибающие числа вхождений pattern по окнам длины k..window_cap."""
    k = len(pattern)
    count = max(window_cap - k + 1, 0)
    mins = np.full(count, _INT_MAX, dtype=np.int64)
    maxs = np.full(count, -1, dtype=np.int64)
    for codes in coded:
        size = len(codes)
        if size < k:
            continue
        hits = (sliding_window_view(codes, k) == pattern).all(axis=1)
        cumulative = np.concatenate(([0], np.cumsum(hits, dtype=np.int64)))
        for index, length in enumerate(range(k, min(window_cap, size) + 1)):
            windows = size - length + 1
            inside = length - k + 1
            counts = cumulative[inside : inside + windows] - cumulative[:windows]
            mins[index] = min(mins[index], int(counts.min()))
            maxs[index] = max(maxs[index], int(counts.max()))
    return mins, maxs


def right_eigenvector(d: DirectiveSequence, depth: int) -> tuple[np.ndarray, float]:
    """
    Обобщенный правый собственный вектор по окну глубины depth.

    Returns:
        (u, diameter): нормированный в ℓ¹ образ барицентра под B̄_{[0,depth)}
        и наибольший угол между нормированными столбцами произведения

    Raises:
        DegenerateGeometryError: Если произведение не положительно
    """
    validate_positive_int(depth, "depth")
    product = np.eye(3)
    support = np.eye(3, dtype=np.int64)
    for symbol in d.prefix(depth):
        incidence = get_substitution(symbol).incidence.to_numpy()
        product = product @ incidence
        product /= product.max()
        support = np.minimum(support @ (incidence > 0).astype(np.int64), 1)

    if not support.all():
        raise DegenerateGeometryError(
            f"произведение матриц инцидентности глубины {depth} не положительно"
        )

    image = product @ np.ones(3)
    u = image / image.sum()

    columns = product / np.linalg.norm(product, axis=0)
    diameter = 0.0
    for a, b in itertools.combinations(range(3), 2):
        chord = np.linalg.norm(columns[:, a] - columns[:, b])
        diameter = max(diameter, 2.0 * math.asin(min(1.0, chord / 2.0)))
    return u, diameter


def _exact_projection(x, u, w) -> tuple:
    """π_{u,w}(x) в рациональных числах."""
    scale = Fraction(sum(a * b for a, b in zip(x, w)), sum(a * b for a, b in zip(u, w)))
    return tuple(a - scale * b for a, b in zip(x, u))


def constellation_table(ones=ONE_VECTORS) -> list[tuple]:
    """
    ‖π_{uₙ,1ₙ}(x)‖_∞ по всем созвездиям (uₙ, 1ₙ, x), x ∈ {±1}³.

    Returns:
        Список (значение, uₙ, 1ₙ, x) в порядке перебора
    """
    table = []
    for u in FREQUENCY_VECTORS:
        for w in ones:
            for x in itertools.product((1, -1), repeat=3):
                value = max(abs(c) for c in _exact_projection(x, u, w))
                table.append((value, u, w, x))
    return table


def constellation_bound(ones=ONE_VECTORS) -> float:
    """Точный максимум по созвездиям."""
    return float(max(row[0] for row in constellation_table(ones)))


def constellation_argmax(ones=ONE_VECTORS) -> tuple:
    """Первое созвездие, на котором достигается максимум."""
    table = constellation_table(ones)
    best = max(row[0] for row in table)
    return next(row[1:] for row in table if row[0] == best)


def arnoux_rauzy_period() -> np.ndarray:
    """B = B_{σ₁}B_{σ₂}B_{σ₃}."""
    product = np.eye(3, dtype=np.int64)
    for symbol in "123":
        product = product @ get_substitution(symbol).incidence.to_numpy(np.int64)
    return product


def contraction_check(samples: int, seed: int | None = None) -> float:
    """
    Максимум ‖B|_{w⊥}‖_∞ по w = ᵗ(B²)·z.

    z пробегает три координатных луча и samples случайных положительных
    векторов. Выборка не исчерпывает конус.
    """
    validate_positive_int(samples, "samples")
    seed = SettingsLoader().get("DEFAULT_SEED") if seed is None else seed
    rng = np.random.default_rng(seed)

    b = arnoux_rauzy_period().astype(float)
    square_t = (b @ b).T
    rays = list(np.eye(3)) + list(rng.exponential(size=(samples, 3)))
    return max(inf_norm_restricted(b, square_t @ z) for z in rays)


def exact_restricted_norm(matrix, w) -> float:
    """
    ‖matrix|_{w⊥}‖_∞ в точной арифметике для целых matrix и w > 0.

    Вершины сечения куба плоскостью w⊥ имеют две координаты ±1,
    третья находится из уравнения ⟨x, w⟩ = 0.
    """
    rows = [[int(v) for v in row] for row in matrix]
    w = [int(v) for v in w]
    if any(v <= 0 for v in w):
        raise DegenerateGeometryError(f"вектор {w} должен быть положительным")

    best = Fraction(0)
    for k in range(3):
        others = [j for j in range(3) if j != k]
        for signs in itertools.product((1, -1), repeat=2):
            x = [Fraction(0)] * 3
            for j, s in zip(others, signs):
                x[j] = Fraction(s)
            x[k] = -sum(w[j] * x[j] for j in others) / w[k]
            if abs(x[k]) > 1:
                continue
            image = max(abs(sum(r[j] * x[j] for j in range(3))) for r in rows)
            best = max(best, image)
    return float(best)


def _exact_incidence_product(symbols: str) -> np.ndarray:
    product = np.eye(3, dtype=np.int64).astype(object)
    for symbol in symbols:
        incidence = get_substitution(symbol).incidence.to_numpy(np.int64)
        product = product @ incidence.astype(object)
    return product


def _ones_vectors(symbols: str) -> list:
    """1_k = ᵗB̄_{[0,k)}·1 для k = 0..len(symbols), в целых Python."""
    vector = np.ones(3, dtype=np.int64).astype(object)
    vectors = [vector]
    for symbol in symbols:
        incidence = get_substitution(symbol).incidence.to_numpy(np.int64)
        vector = incidence.T.astype(object) @ vector
        vectors.append(vector)
    return vectors


def restricted_norm(d: DirectiveSequence, m: int, n: int) -> float:
    """‖B̄_{[m,n)}|_{1ₙ⊥}‖_∞ в точной арифметике."""
    if not 0 <= m <= n:
        raise ValueError(f"Нужно 0 ≤ m ≤ n, получено m={m}, n={n}")
    symbols = d.prefix(n)
    ones = _ones_vectors(symbols)[n]
    return exact_restricted_norm(_exact_incidence_product(symbols[m:n]), ones)


def admissible_positions(symbols: str) -> list[int]:
    """m = 0 и все m ≥ 3 с τ_{[m−3,m+3)} = (σ₁σ₂σ₃)²."""
    positions = [0]
    start = symbols.find(ADMISSIBLE_WINDOW)
    while start != -1:
        positions.append(start + 3)
        start = symbols.find(ADMISSIBLE_WINDOW, start + 1)
    return positions


def restricted_norm_survey(
    d: DirectiveSequence,
    windows: int,
    seed: int | None = None,
    horizon: int = 1000,
    max_span: int = 60,
) -> float:
    """
    Максимум ‖B̄_{[m,n)}|_{1ₙ⊥}‖_∞ по случайным допустимым парам (m, n).

    Raises:
        DirectiveSequenceError: Если в горизонте нет вхождений (σ₁σ₂σ₃)²
    """
    validate_positive_int(windows, "windows")
    seed = SettingsLoader().get("DEFAULT_SEED") if seed is None else seed
    rng = np.random.default_rng(seed)

    symbols = d.prefix(horizon + max_span)
    positions = admissible_positions(symbols[:horizon])
    if len(positions) == 1:
        raise DirectiveSequenceError(
            f"нет допустимых окон (σ1σ2σ3)² в первых {horizon} символах"
        )
    ones = _ones_vectors(symbols)

    worst = 0.0
    for _ in range(windows):
        m = int(rng.choice(positions))
        n = m + int(rng.integers(0, max_span + 1))
        product = _exact_incidence_product(symbols[m:n])
        worst = max(worst, exact_restricted_norm(product, ones[n]))
    return worst


def billiard_word(target, norm_reference=(1, 1, 1)) -> str:
    """
    Слово w с l(w) = target, все префиксы которого близки к прямой target.

    Жадное правило: на шаге t добавляется буква с наибольшим дефицитом
    t·xᵢ/|x| − |p|ᵢ. Каждый префикс проверяется точно:
    ‖π_{x,w}(l(p))‖_∞ ≤ 1 для w = norm_reference.

    Raises:
        BilliardConstructionError: Если проверка префикса не прошла
    """
    x = tuple(int(v) for v in target)
    if len(x) != 3 or any(v < 0 for v in x) or sum(x) == 0:
        raise ValueError(f"Цель {target} должна лежать в ℕ³∖{{0}}")
    w = tuple(int(v) for v in norm_reference)
    scale = sum(a * b for a, b in zip(x, w))
    if scale <= 0:
        raise DegenerateGeometryError(f"⟨x, w⟩ = {scale} для x={x}, w={w}")

    total = sum(x)
    counts = [0, 0, 0]
    letters = []
    for t in range(1, total + 1):
        deficits = [t * x[i] - total * counts[i] for i in range(3)]
        chosen = max(range(3), key=lambda i: (deficits[i], -i))
        counts[chosen] += 1
        letters.append(LETTERS[chosen])

        # scale·π_{x,w}(l(p)) = scale·l(p) − ⟨l(p), w⟩·x
        weight = sum(c * v for c, v in zip(counts, w))
        worst = max(abs(scale * c - weight * v) for c, v in zip(counts, x))
        if worst > scale:
            raise BilliardConstructionError(x, "".join(letters), worst / scale)
    return "".join(letters)


def prefix_projection_bound(word: str, norm_reference=(1, 1, 1)) -> float:
    """max по префиксам p слова ‖π_{l(word),w}(l(p))‖_∞."""
    x = abelianize(word)
    w = tuple(int(v) for v in norm_reference)
    scale = sum(a * b for a, b in zip(x, w))
    if scale <= 0:
        raise DegenerateGeometryError(f"⟨x, w⟩ = {scale} для x={x}, w={w}")

    counts = [0, 0, 0]
    worst = 0
    for letter in word:
        counts[LETTERS.index(letter)] += 1
        weight = sum(c * v for c, v in zip(counts, w))
        worst = max(worst, *(abs(scale * c - weight * v) for c, v in zip(counts, x)))
    return worst / scale


def block_balance_witness(
    d: DirectiveSequence,
    depth: int,
    cap: int,
    eigen_depth: int | None = None,
) -> BalanceReport:
    """
    Эмпирическая сбалансированность языка с вставленными блоками.

    Raises:
        ValueError: Если в последовательности нет вставок блока
        ResourceLimitError: При превышении пределов выборки
    """
    if d.inject_rate <= 0.0:
        raise ValueError("Нужна положительная доля вставки блока (σ1σ2σ3)⁹")
    sample = generate_language(d, depth, cap)
    u, diameter = right_eigenvector(d, eigen_depth or max(depth, 60))
    return BalanceReport(
        letter_balance_constant=letter_balance(sample),
        factor_balance=factor_balance(sample),
        projection_sup=projection_sup(sample, u),
        depth=depth,
        cap=cap,
        frequency=tuple(float(v) for v in u),
        cone_diameter=diameter,
    )
