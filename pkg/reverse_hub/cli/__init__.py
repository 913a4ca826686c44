"""Командный интерфейс приложения."""

