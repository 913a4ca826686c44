"""Singleton для хранения отчетов в формате JSON Lines."""

import json
import os

from reverse_hub.infra.settings import SettingsLoader


class ResultStore:
    """
    Singleton для записи отчетов вычислений.

    Каждый отчет занимает одну строку UTF-8 JSON. Файл переписывается
    целиком через временный файл, поэтому при сбое остается прежняя версия.
    """

    _instance = None
    _initialized = False

    def __new__(cls):
        """Создает или возвращает существующий экземпляр."""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        """Инициализирует хранилище (выполняется только один раз)."""
        if not self._initialized:
            self.settings = SettingsLoader()
            ResultStore._initialized = True

    @staticmethod
    def _ensure_directory(filepath: str):
        directory = os.path.dirname(filepath)
        if directory and not os.path.exists(directory):
            os.makedirs(directory, exist_ok=True)

    def _write_lines(self, filepath: str, lines: list[str]):
        """
        Записывает строки в файл.

        Args:
            filepath: Путь к файлу
            lines: Строки без перевода строки
        """
        self._ensure_directory(filepath)

        # Атомарная запись через временный файл
        temp_file = filepath + ".tmp"
        with open(temp_file, "w", encoding="utf-8") as f:
            for line in lines:
                f.write(line + "\n")

        os.replace(temp_file, filepath)

    def read_records(self, filepath: str | None = None) -> list[dict]:
        """
        Читает все отчеты файла.

        Args:
            filepath: Путь к файлу (по умолчанию REPORTS_FILE)

        Returns:
            Список отчетов, пустой если файла нет
        """
        filepath = filepath or self.settings.get("REPORTS_FILE")
        try:
            with open(filepath, encoding="utf-8") as f:
                return [json.loads(line) for line in f if line.strip()]
        except FileNotFoundError:
            return []

    def append(self, record: dict, filepath: str | None = None) -> str:
        """
        Добавляет отчет в конец файла.

        Args:
            record: Отчет
            filepath: Путь к файлу (по умолчанию REPORTS_FILE)

        Returns:
            Путь к файлу
        """
        filepath = filepath or self.settings.get("REPORTS_FILE")
        lines = [
            json.dumps(existing, ensure_ascii=False)
            for existing in self.read_records(filepath)
        ]
        lines.append(json.dumps(record, ensure_ascii=False))
        self._write_lines(filepath, lines)
        return filepath

    @classmethod
    def reset(cls):
        """Сбрасывает singleton (для тестирования)."""
        cls._instance = None
        cls._initialized = False
