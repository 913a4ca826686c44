"""Основная математика: алгоритм, коциклы, оценки, подстановки."""
