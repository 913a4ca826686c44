"""CSV-таблицы частичных сумм перебора."""

import csv
import logging
import os

from reverse_hub.enumeration.runner import EnumerationResult

FIELDNAMES = (
    "prefix",
    "words",
    "positive_words",
    "negative_words",
    "positive",
    "negative",
    "total",
)


class PartialSumsWriter:
    """Запись частичных сумм по префиксам поддеревьев."""

    def __init__(self, path: str):
        """
        Инициализация записи.

        Args:
            path: Путь к CSV-файлу
        """
        self.path = path
        self.logger = logging.getLogger(self.__class__.__name__)

    def write(self, result: EnumerationResult):
        """
        Сохранить таблицу: строка на поддерево, заголовок в первой строке.

        Args:
            result: Результат перебора
        """
        directory = os.path.dirname(self.path)
        if directory:
            os.makedirs(directory, exist_ok=True)

        # Атомарная запись через временный файл
        temp_file = self.path + ".tmp"
        with open(temp_file, "w", encoding="utf-8", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=FIELDNAMES)
            writer.writeheader()
            for subtree in result.subtrees:
                writer.writerow(subtree.to_row())
        os.replace(temp_file, self.path)
        self.logger.info(f"Saved {len(result.subtrees)} partial sums to {self.path}")

    def read(self) -> list[dict]:
        """Прочитать таблицу (значения сумм как float)."""
        with open(self.path, encoding="utf-8", newline="") as f:
            rows = list(csv.DictReader(f))
        for row in rows:
            for key in ("positive", "negative", "total"):
                row[key] = float(row[key])
            for key in ("words", "positive_words", "negative_words"):
                row[key] = int(row[key])
        return rows
