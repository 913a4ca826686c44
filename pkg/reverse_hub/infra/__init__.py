"""Инфраструктурные компоненты: настройки, хранилище результатов."""
