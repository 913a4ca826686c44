"""Конфигурация логирования для приложения."""

import logging
import os
from logging.handlers import RotatingFileHandler

from reverse_hub.infra.settings import SettingsLoader


def setup_logging(
    log_file: str | None = None, level: int | str | None = None
):
    """
    Настройка логирования с ротацией файлов.

    Args:
        log_file: Путь к файлу логов (по умолчанию LOG_FILE из настроек)
        level: Уровень логирования (по умолчанию LOG_LEVEL из настроек)
    """
    settings = SettingsLoader()
    log_file = log_file or settings.get("LOG_FILE")
    level = level or settings.get("LOG_LEVEL")

    log_dir = os.path.dirname(log_file)
    if log_dir and not os.path.exists(log_dir):
        os.makedirs(log_dir, exist_ok=True)

    formatter = logging.Formatter(
        "%(levelname)s %(asctime)s %(message)s", datefmt="%Y-%m-%dT%H:%M:%S"
    )

    logger = logging.getLogger()
    logger.setLevel(level)
    logger.handlers.clear()

    # Файл с ротацией (10 MB, 5 архивов)
    file_handler = RotatingFileHandler(
        log_file,
        maxBytes=10 * 1024 * 1024,
        backupCount=5,
        encoding="utf-8"
    )
    file_handler.setLevel(level)
    file_handler.setFormatter(formatter)
    logger.addHandler(file_handler)

    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.WARNING)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    return logger
