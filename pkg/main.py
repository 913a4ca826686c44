"""Точка входа в приложение Reverse Hub."""

import sys

from reverse_hub.cli.interface import main as cli_main
from reverse_hub.logging_config import setup_logging


def main():
    """Главная функция приложения."""
    # Настраиваем логирование
    setup_logging()

    # Запускаем CLI
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
