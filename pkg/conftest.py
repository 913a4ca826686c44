"""Общие фикстуры тестов."""

import numpy as np
import pytest

from reverse_hub.infra.settings import SettingsLoader
from reverse_hub.infra.storage import ResultStore


def pytest_addoption(parser):
    parser.addoption(
        "--runslow",
        action="store_true",
        default=False,
        help="запускать вычисления полного размера",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="нужен флаг --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def settings(tmp_path):
    """Свежие синглтоны и каталог результатов во временной директории."""
    SettingsLoader.reset()
    ResultStore.reset()
    loader = SettingsLoader()
    loader.set("OUTPUT_DIR", str(tmp_path / "results"))
    loader.set("REPORTS_FILE", str(tmp_path / "results" / "reports.jsonl"))
    loader.set("LOG_FILE", str(tmp_path / "logs" / "actions.log"))
    yield loader
    SettingsLoader.reset()
    ResultStore.reset()


@pytest.fixture
def rng():
    """Генератор с фиксированным зерном."""
    return np.random.default_rng(20240607)
