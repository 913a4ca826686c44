"""Тесты командного интерфейса."""

import pytest

from reverse_hub import __version__
from reverse_hub.cli.interface import CLI, EXIT_FAILED, EXIT_OK, EXIT_USAGE
from reverse_hub.core.usecases import VerificationService
from reverse_hub.infra.storage import ResultStore


@pytest.fixture
def cli():
    return CLI()


def _last_record(path=None):
    records = ResultStore().read_records(path)
    assert records, "отчет не записан"
    return records[-1]


def test_help(cli, capsys):
    assert cli.run([]) == EXIT_OK
    assert cli.run(["help"]) == EXIT_OK
    assert "verify-lemmas" in capsys.readouterr().out


def test_unknown_command(cli, capsys):
    assert cli.run(["simulate"]) == EXIT_USAGE
    assert "Неизвестная команда" in capsys.readouterr().out


def test_parse_args(cli):
    parsed = cli.parse_args(["orbit", "--x", "1,2,3", "--inject-rate", "0.1", "--v"])
    assert parsed == {
        "command": "orbit",
        "params": {"x": "1,2,3", "inject_rate": "0.1", "v": True},
    }


def test_mass_writes_record(cli, tmp_path):
    out = str(tmp_path / "mass.jsonl")
    assert cli.run(["mass", "--out", out]) == EXIT_OK
    record = _last_record(out)
    assert record["run"]["command"] == "mass"
    assert record["run"]["version"] == __version__
    assert "started_at" in record["run"]
    assert record["result"]["passed"] is True


def test_records_are_appended(cli, settings):
    assert cli.run(["orbit", "--x", "1,1,1", "--steps", "2"]) == EXIT_OK
    assert cli.run(["orbit", "--x", "0.6,0.3,0.1", "--steps", "1"]) == EXIT_OK
    records = ResultStore().read_records(settings.get("REPORTS_FILE"))
    assert [r["result"]["word"] for r in records] == ["44", "1"]


def test_orbit(cli, capsys):
    assert cli.run(["orbit", "--x", "0.62,0.27,0.11", "--steps", "3"]) == EXIT_OK
    assert "Слово: 143" in capsys.readouterr().out
    record = _last_record()
    assert record["result"]["word"] == "143"
    assert record["run"]["params"]["steps"] == 3
    assert len(record["result"]["points"]) == 4


def test_orbit_usage_errors(cli):
    assert cli.run(["orbit"]) == EXIT_USAGE
    assert cli.run(["orbit", "--x"]) == EXIT_USAGE
    assert cli.run(["orbit", "--x", "1,2"]) == EXIT_USAGE
    assert cli.run(["orbit", "--x", "1,1,1", "--steps", "abc"]) == EXIT_USAGE
    assert cli.run(["orbit", "--x", "1,1,1", "--steps", "0"]) == EXIT_USAGE


def test_orbit_reaching_gasket_fails(cli, capsys):
    assert cli.run(["orbit", "--x", "2,3,1", "--steps", "3"]) == EXIT_FAILED
    assert "❌" in capsys.readouterr().out


def test_bound(cli, tmp_path):
    table = tmp_path / "sums.csv"
    assert cli.run(["bound", "--n", "3", "--table", str(table)]) == EXIT_OK
    assert len(table.read_text(encoding="utf-8").splitlines()) == 1 + 4**3

    assert cli.run(["bound", "--n", "2"]) == EXIT_OK
    result = _last_record()["result"]
    assert result["word_count"] == 13
    assert result["variant"] == "unsorted"
    assert result["total"] == pytest.approx(result["l1"] + result["l2"])


def test_bound_errors(cli):
    assert cli.run(["bound", "--n", "20"]) == EXIT_FAILED
    assert cli.run(["bound"]) == EXIT_USAGE
    assert cli.run(["bound", "--n", "3", "--norm", "spectral"]) == EXIT_USAGE


def test_bound_sorted(cli):
    assert cli.run(["bound-sorted", "--n", "3", "--norm", "entrywise"]) == EXIT_OK
    result = _last_record()["result"]
    assert result["variant"] == "sorted"
    assert result["norm"] == "entrywise"
    assert result["word_count"] == 4**3 - 1


def test_mc(cli):
    assert cli.run(["mc", "--iterations", "20000", "--seed", "3"]) == EXIT_OK
    result = _last_record()["result"]
    assert result["lambda1"] > 0
    assert result["seed"] == 3
    assert cli.run(["mc", "--iterations", "100"]) == EXIT_USAGE


def test_language_export(cli, tmp_path):
    export = tmp_path / "factors.txt"
    args = ["language", "--pattern", "1234", "--depth", "4", "--cap", "6"]
    assert cli.run([*args, "--export", str(export)]) == EXIT_OK
    result = _last_record()["result"]
    assert result["directive_prefix"] == "1234"
    assert result["exported"] == len(export.read_text(encoding="utf-8").splitlines())
    assert len(result["factor_complexity"]) == 6


def test_language_from_seed(cli):
    assert cli.run(["language", "--seed", "5", "--depth", "6"]) == EXIT_OK
    assert _last_record()["run"]["params"]["seed"] == 5


def test_balance(cli):
    args = ["balance", "--pattern", "123", "--inject-rate", "0.1"]
    assert cli.run([*args, "--depth", "6", "--cap", "10"]) == EXIT_OK
    result = _last_record()["result"]
    assert result["two_c_relation"] is True
    assert sum(result["frequency"]) == pytest.approx(1.0)


def test_balance_usage_errors(cli):
    assert cli.run(["balance", "--inject-rate", "abc"]) == EXIT_USAGE
    assert cli.run(["balance", "--inject-rate", "0"]) == EXIT_USAGE
    assert cli.run(["balance", "--inject-rate", "2"]) == EXIT_USAGE


def test_verify_lemmas(cli, capsys):
    assert cli.run(["verify-lemmas", "--samples", "20", "--seed", "4"]) == EXIT_OK
    assert "Все проверки пройдены" in capsys.readouterr().out
    result = _last_record()["result"]
    assert result["passed"] is True
    assert set(result["checks"]) >= {"constellation", "contraction", "billiard"}
    assert cli.run(["verify-lemmas", "--samples", "0"]) == EXIT_USAGE


def test_verify_lemmas_sizes_come_from_settings(cli, settings):
    settings.set("VERIFY_WORDS", 30)
    settings.set("VERIFY_GROWTH_WORDS", 8)
    settings.set("VERIFY_BILLIARD_TARGETS", 12)
    settings.set("VERIFY_SURVEY_WINDOWS", 2)
    assert cli.run(["verify-lemmas", "--seed", "4"]) == EXIT_OK
    result = _last_record()["result"]
    assert result["sizes"] == {
        "words": 30,
        "growth_words": 8,
        "billiard_targets": 12,
        "survey_windows": 2,
        "survey_sequences": 10,
    }
    assert result["checks"]["row_norms"]["value"] == 30
    assert result["checks"]["balance_growth"]["value"] == 32


@pytest.mark.slow
def test_verify_lemmas_full_size():
    result = VerificationService().verify_lemmas(seed=4)
    assert result["sizes"] == {
        "words": 100_000,
        "growth_words": 10_000,
        "billiard_targets": 10_000,
        "survey_windows": 1000,
        "survey_sequences": 10,
    }
    assert result["passed"] is True
