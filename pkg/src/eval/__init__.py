"""Módulo de avaliação."""
