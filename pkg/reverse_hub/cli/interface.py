"""CLI интерфейс для запуска вычислений."""

from __future__ import annotations

import sys

from prettytable import PrettyTable

from reverse_hub.core.exceptions import (
    BilliardConstructionError,
    CocycleOverflowError,
    DegenerateGeometryError,
    DirectiveSequenceError,
    DomainError,
    OrbitTerminatedError,
    QuadratureError,
    ResourceLimitError,
)
from reverse_hub.core.usecases import (
    BoundService,
    LanguageService,
    OrbitService,
    ReportService,
    SpectrumService,
    VerificationService,
)
from reverse_hub.core.utils import parse_vector
from reverse_hub.infra.settings import SettingsLoader

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# Доля вставки блока по умолчанию для команды balance
DEFAULT_BALANCE_RATE = 0.05
DEFAULT_ORBIT_STEPS = 20
DEFAULT_MC_ITERATIONS = 10**6
DEFAULT_LANGUAGE_DEPTH = 8


class CLI:
    """Класс командного интерфейса."""

    def __init__(self):
        """Инициализация CLI."""
        self.settings = SettingsLoader()
        self.bound_service = BoundService()
        self.spectrum_service = SpectrumService()
        self.orbit_service = OrbitService()
        self.language_service = LanguageService()
        self.verification_service = VerificationService()
        self.report_service = ReportService()

    def parse_args(self, args: list) -> dict:
        """
        Парсинг аргументов командной строки.

        Args:
            args: Список аргументов

        Returns:
            Словарь с командой и параметрами
        """
        if not args:
            return {"command": "help", "params": {}}

        command = args[0]
        params = {}

        i = 1
        while i < len(args):
            if args[i].startswith("--"):
                key = args[i][2:].replace("-", "_")
                if i + 1 < len(args) and not args[i + 1].startswith("--"):
                    params[key] = args[i + 1]
                    i += 2
                else:
                    params[key] = True
                    i += 1
            else:
                i += 1

        return {"command": command, "params": params}

    def run(self, args: list) -> int:
        """
        Выполнить команду.

        Args:
            args: Аргументы командной строки

        Returns:
            Код выхода: 0 при успехе всех проверок
        """
        parsed = self.parse_args(args)
        command = parsed["command"]
        params = parsed["params"]

        handlers = {
            "bound": self.cmd_bound,
            "bound-sorted": self.cmd_bound_sorted,
            "mc": self.cmd_mc,
            "orbit": self.cmd_orbit,
            "language": self.cmd_language,
            "balance": self.cmd_balance,
            "verify-lemmas": self.cmd_verify_lemmas,
            "mass": self.cmd_mass,
        }

        if command == "help":
            self.cmd_help()
            return EXIT_OK
        handler = handlers.get(command)
        if handler is None:
            print(f"Неизвестная команда: {command}")
            print("Используйте 'help' для списка команд")
            return EXIT_USAGE

        try:
            return handler(params)
        except (
            CocycleOverflowError,
            ResourceLimitError,
            QuadratureError,
            OrbitTerminatedError,
            DomainError,
            DegenerateGeometryError,
            DirectiveSequenceError,
            BilliardConstructionError,
        ) as e:
            print(f"❌ {e}")
            return EXIT_FAILED
        except (TypeError, ValueError) as e:
            print(f"❌ {e}")
            return EXIT_USAGE
        except Exception as e:
            print(f"❌ Ошибка: {e}")
            return EXIT_FAILED

    @staticmethod
    def _int(params: dict, key: str, default=None):
        value = params.get(key, default)
        if value is None:
            raise ValueError(f"Необходимо указать --{key.replace('_', '-')}")
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ValueError(f"'--{key}' должен быть целым числом") from None

    @staticmethod
    def _float(params: dict, key: str, default=None):
        value = params.get(key, default)
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ValueError(f"'--{key}' должен быть числом") from None

    def _seed(self, params: dict) -> int:
        return self._int(params, "seed", self.settings.get("DEFAULT_SEED"))

    def _save(self, command: str, params: dict, payload: dict) -> dict:
        return self.report_service.save(command, params, payload, params.get("out"))

    def _print_bound(self, report, title: str):
        table = PrettyTable(["Величина", "Значение"])
        table.align["Величина"] = "l"
        table.align["Значение"] = "r"
        table.add_row(["L1", f"{report.l1:.9f}"])
        table.add_row(["L2", f"{report.l2:.9f}"])
        table.add_row(["L1 + L2", f"{report.total:.9f}"])
        table.add_row(["положительная часть L2", f"{report.positive_part:.9f}"])
        table.add_row(["отрицательная часть L2", f"{report.negative_part:.9f}"])
        table.add_row(["ошибка округления", f"{report.accumulated_error:.3e}"])
        table.add_row(["слов", report.word_count])
        table.add_row(["время, с", f"{report.wall_time:.2f}"])
        print(f"\n{title} (n={report.n}, норма {report.norm}):")
        print(table)

    def cmd_bound(self, params: dict) -> int:
        """Команда оценки L1(n) + L2(n)."""
        run = {
            "n": self._int(params, "n"),
            "threads": self._int(params, "threads", 1),
            "norm": params.get("norm") or self.settings.get("NORM"),
        }
        report = self.bound_service.compute_bound(table=params.get("table"), **run)
        self._print_bound(report, "Оценка для алгоритма Reverse")
        self._save("bound", {**run, "out": params.get("out")}, report.to_dict())

        sign = "✓ отрицательна" if report.is_negative else "оценка не отрицательна"
        print(f"{sign}: L1 + L2 + ошибка = {report.certified_upper:.9f}")
        return EXIT_OK

    def cmd_bound_sorted(self, params: dict) -> int:
        """Команда оценки L1′(n) + L2′(n)."""
        run = {
            "n": self._int(params, "n"),
            "threads": self._int(params, "threads", 1),
            "norm": params.get("norm") or self.settings.get("NORM"),
        }
        report = self.bound_service.compute_sorted_bound(
            table=params.get("table"), **run
        )
        self._print_bound(report, "Оценка для отсортированного варианта")
        self._save("bound-sorted", {**run, "out": params.get("out")}, report.to_dict())
        return EXIT_OK

    def cmd_mc(self, params: dict) -> int:
        """Команда оценки спектра Ляпунова методом Монте-Карло."""
        run = {
            "iterations": self._int(params, "iterations", DEFAULT_MC_ITERATIONS),
            "seed": self._seed(params),
        }
        payload = self.spectrum_service.estimate(**run)

        table = PrettyTable(["Показатель", "Оценка"])
        table.align = "r"
        for key in ("lambda1", "lambda2", "lambda3", "lambda_d", "stderr"):
            table.add_row([key, f"{payload[key]:.6f}"])
        if payload["approx_exponent"] is not None:
            table.add_row(["η*", f"{payload['approx_exponent']:.6f}"])
        print(f"\nСпектр Ляпунова ({payload['iterations']} шагов):")
        print(table)

        self._save("mc", {**run, "out": params.get("out")}, payload)
        return EXIT_OK

    def cmd_orbit(self, params: dict) -> int:
        """Команда вычисления орбиты."""
        x = params.get("x")
        if not x or x is True:
            print("❌ Необходимо указать --x a,b,c")
            return EXIT_USAGE
        run = {
            "x": list(parse_vector(x)),
            "steps": self._int(params, "steps", DEFAULT_ORBIT_STEPS),
        }
        payload = self.orbit_service.trace(**run)

        table = PrettyTable(["Шаг", "x0", "x1", "x2", "Ветвь"])
        table.align = "r"
        for k, point in enumerate(payload["points"]):
            branch = payload["word"][k] if k < len(payload["word"]) else ""
            table.add_row([k, *(f"{c:.12f}" for c in point), branch])
        print(table)
        print(f"Слово: {payload['word']}")

        self._save("orbit", {**run, "out": params.get("out")}, payload)
        return EXIT_OK

    def _sequence_params(self, params: dict, default_rate: float) -> dict:
        pattern = params.get("pattern")
        return {
            "seed": self._seed(params),
            "pattern": pattern if isinstance(pattern, str) else None,
            "inject_rate": self._float(params, "inject_rate", default_rate),
        }

    def cmd_language(self, params: dict) -> int:
        """Команда построения выборки S-адического языка."""
        sequence_params = self._sequence_params(params, 0.0)
        sequence = self.language_service.build_sequence(**sequence_params)
        run = {
            "depth": self._int(params, "depth", DEFAULT_LANGUAGE_DEPTH),
            "cap": self._int(params, "cap", self.settings.get("FACTOR_CAP")),
        }
        payload = self.language_service.language(
            sequence, export=params.get("export"), **run
        )

        print(f"Направляющий префикс: {payload['directive_prefix']}")
        for letter, length in payload["image_lengths"].items():
            print(f"- |τ[0,{run['depth']})({letter})| = {length}")
        print(f"Факторов до длины {run['cap']}: {payload['factor_count']}")
        print(f"Константа буквенной сбалансированности: {payload['letter_balance']}")
        if "export_path" in payload:
            print(f"✓ Список факторов сохранен в {payload['export_path']}")

        self._save(
            "language",
            {**sequence_params, **run, "out": params.get("out")},
            payload,
        )
        return EXIT_OK

    def cmd_balance(self, params: dict) -> int:
        """Команда отчета о сбалансированности языка."""
        sequence_params = self._sequence_params(params, DEFAULT_BALANCE_RATE)
        sequence = self.language_service.build_sequence(**sequence_params)
        run = {
            "depth": self._int(params, "depth", DEFAULT_LANGUAGE_DEPTH),
            "cap": self._int(params, "cap", self.settings.get("FACTOR_CAP")),
        }
        report = self.language_service.balance(sequence, **run)

        table = PrettyTable(["Фактор", "Расхождение"])
        table.align["Фактор"] = "l"
        for factor, value in sorted(
            report.factor_balance.items(), key=lambda item: (len(item[0]), item[0])
        ):
            table.add_row([factor, value])
        print(f"\nСбалансированность {report.to_dict()['label']}:")
        print(table)
        print(f"C (буквы): {report.letter_balance_constant}")
        print(f"sup ‖π_u,1(l(v))‖∞: {report.projection_sup:.6f}")
        print(f"Частоты u: {', '.join(f'{v:.9f}' for v in report.frequency)}")

        relation = report.letter_balance_constant <= 2 * report.projection_sup + 1
        payload = {**report.to_dict(), "two_c_relation": relation}
        self._save(
            "balance",
            {**sequence_params, **run, "out": params.get("out")},
            payload,
        )
        if not relation:
            print("❌ Нарушено соотношение C ≤ 2·sup + 1")
            return EXIT_FAILED
        return EXIT_OK

    def _print_checks(self, payload: dict):
        table = PrettyTable(["Проверка", "Итог", "Значение"])
        table.align["Проверка"] = "l"
        for name, check in payload["checks"].items():
            table.add_row([name, "✓" if check["passed"] else "❌", check["value"]])
        print(table)

    def cmd_verify_lemmas(self, params: dict) -> int:
        """Команда конечных проверок."""
        run = {
            "seed": self._seed(params),
            "samples": self._int(params, "samples") if "samples" in params else None,
        }
        payload = self.verification_service.verify_lemmas(**run)
        self._print_checks(payload)
        self._save("verify-lemmas", {**run, "out": params.get("out")}, payload)

        if payload["passed"]:
            print("✓ Все проверки пройдены")
            return EXIT_OK
        print("❌ Есть непройденные проверки")
        return EXIT_FAILED

    def cmd_mass(self, params: dict) -> int:
        """Команда вычисления полной массы инвариантных мер."""
        payload = self.verification_service.mass()
        print(f"μ(Δ)  = {payload['mass']:.12f}")
        print(f"μ′(Δ′) = {payload['sorted_mass']:.12f}")
        self._save("mass", {"out": params.get("out")}, payload)
        return EXIT_OK if payload["passed"] else EXIT_FAILED

    def cmd_help(self):
        """Команда помощи."""
        help_text = """
Reverse Hub - оценки показателей Ляпунова алгоритма Reverse

Команды:
  bound --n <N> [--threads <T>] [--norm <induced|entrywise|row>]
        [--table <csv>] [--out <jsonl>]
      Оценка L1(n) + L2(n), 2 ≤ n ≤ 14

  bound-sorted --n <N> [--threads <T>] [--norm <...>] [--table <csv>]
      Оценка для отсортированного варианта, 2 ≤ n ≤ 13

  mc [--iterations <I>] [--seed <S>]
      Спектр Ляпунова методом Монте-Карло

  orbit --x <a,b,c> [--steps <K>]
      Орбита точки симплекса и ее слово

  language [--seed <S> | --pattern <1234...>] [--depth <D>] [--cap <C>]
           [--inject-rate <R>] [--export <txt>]
      Выборка S-адического языка

  balance [--seed <S> | --pattern <...>] [--depth <D>] [--cap <C>]
          [--inject-rate <R>]
      Отчет о сбалансированности (доля вставки по умолчанию 0.05)

  verify-lemmas [--seed <S>] [--samples <N>]
      Конечные проверки свойств алгоритма и подстановок
      (без --samples размеры выборок берутся из настроек VERIFY_*)

  mass
      Полная масса инвариантных мер

  help
      Показать эту справку

Все команды дописывают запись JSON в --out (по умолчанию results/reports.jsonl).
"""
        print(help_text)


def main() -> int:
    """Точка входа в CLI."""
    cli = CLI()
    return cli.run(sys.argv[1:])
