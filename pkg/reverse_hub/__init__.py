"""Reverse Hub - алгоритм Reverse, оценки показателей Ляпунова и S-адические языки."""

__version__ = "0.1.0"
