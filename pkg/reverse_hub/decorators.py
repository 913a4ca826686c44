"""Декораторы для логирования вычислений."""

import functools
import logging
import time

# Параметры, которые попадают в строку лога
_LOGGED_KWARGS = ("n", "depth", "cap", "seed", "iterations", "threads", "norm")


def log_action(action_name: str, verbose: bool = False):
    """
    Декоратор для логирования доменных операций.

    Args:
        action_name: Название операции (BOUND, MC, LANGUAGE, VERIFY, ...)
        verbose: Добавлять ли в лог длительность вычисления

    Декоратор логирует операции на уровне INFO и не глотает исключения.
    """
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            logger = logging.getLogger()
            started = time.perf_counter()

            msg_parts = [action_name]
            for key in _LOGGED_KWARGS:
                if key in kwargs:
                    msg_parts.append(f"{key}={kwargs[key]}")

            try:
                result = func(*args, **kwargs)
            except Exception as e:
                msg_parts.append(f"result=ERROR error={type(e).__name__}")
                logger.error(" ".join(msg_parts))
                raise

            if verbose:
                msg_parts.append(f"elapsed={time.perf_counter() - started:.3f}s")
            msg_parts.append("result=OK")
            logger.info(" ".join(msg_parts))
            return result

        return wrapper
    return decorator
