"""Исчерпывающий обход дерева цилиндров для оценок L2."""
