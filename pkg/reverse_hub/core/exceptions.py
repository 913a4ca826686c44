"""Пользовательские исключения для приложения."""


class CocycleOverflowError(ArithmeticError):
    """Исключение при выходе целочисленной арифметики за пределы int64."""

    def __init__(self, entry: int, limit: int):
        """
        Инициализация исключения.

        Args:
            entry: Значение, не поместившееся в диапазон
            limit: Допустимая граница по модулю
        """
        self.entry = entry
        self.limit = limit
        message = (
            f"Переполнение коцикла: элемент {entry} превышает "
            f"допустимую границу {limit}"
        )
        super().__init__(message)


class DomainError(ValueError):
    """Исключение при точке вне области определения отображения."""

    def __init__(self, what: str, value):
        """
        Инициализация исключения.

        Args:
            what: Описание нарушенного условия
            value: Значение, вызвавшее ошибку
        """
        self.what = what
        self.value = value
        message = f"Точка вне области: {what} (получено {value})"
        super().__init__(message)


class OrbitTerminatedError(Exception):
    """Исключение при попадании орбиты в окрестность салфетки Рози."""

    def __init__(self, step: int, coordinate: float):
        """
        Инициализация исключения.

        Args:
            step: Номер шага, на котором сработала защита
            coordinate: Минимальная координата образа
        """
        self.step = step
        self.coordinate = coordinate
        message = (
            f"Орбита остановлена на шаге {step}: координата {coordinate:.3e} "
            "ниже допуска (окрестность салфетки Рози)"
        )
        super().__init__(message)


class ResourceLimitError(Exception):
    """Исключение при превышении ограничения на ресурсы."""

    def __init__(self, resource: str, requested, limit):
        """
        Инициализация исключения.

        Args:
            resource: Название ресурса
            requested: Запрошенное значение
            limit: Допустимый предел
        """
        self.resource = resource
        self.requested = requested
        self.limit = limit
        message = (
            f"Превышен предел '{resource}': запрошено {requested}, "
            f"допустимо {limit}"
        )
        super().__init__(message)


class QuadratureError(ArithmeticError):
    """Исключение при несходимости адаптивной квадратуры."""

    def __init__(self, interval: tuple, estimate: float):
        """
        Инициализация исключения.

        Args:
            interval: Отрезок, на котором не достигнута точность
            estimate: Последняя оценка погрешности
        """
        self.interval = interval
        self.estimate = estimate
        message = (
            f"Квадратура не сошлась на отрезке [{interval[0]}, {interval[1]}]: "
            f"оценка погрешности {estimate:.3e}"
        )
        super().__init__(message)


class DegenerateGeometryError(ValueError):
    """Исключение при вырожденных геометрических данных."""

    def __init__(self, reason: str):
        """
        Инициализация исключения.

        Args:
            reason: Причина вырожденности
        """
        self.reason = reason
        message = f"Вырожденная геометрия: {reason}"
        super().__init__(message)


class DirectiveSequenceError(Exception):
    """Исключение при ошибках направляющей последовательности."""

    def __init__(self, reason: str):
        """
        Инициализация исключения.

        Args:
            reason: Причина ошибки
        """
        self.reason = reason
        message = f"Ошибка направляющей последовательности: {reason}"
        super().__init__(message)


class BilliardConstructionError(Exception):
    """Исключение при нарушении оценки префиксов бильярдного слова."""

    def __init__(self, target: tuple, prefix: str, value: float):
        """
        Инициализация исключения.

        Args:
            target: Целевой вектор букв
            prefix: Префикс, нарушивший оценку
            value: Значение нормы проекции на префиксе
        """
        self.target = target
        self.prefix = prefix
        self.value = value
        message = (
            f"Бильярдное слово для {target} нарушает оценку на префиксе "
            f"'{prefix}': {value:.6f}"
        )
        super().__init__(message)
